// Copyright 2026 The screwplan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "screwplan/contacts.hpp"
#include "screwplan/planner.hpp"
#include "screwplan/rrt.hpp"
#include "screwplan/sequence.hpp"

namespace screwplan {
namespace {

Obstacle sphere(const std::string& id, const Vec3& c, double r) {
  return {id, Sphere{c, r}};
}

Obstacle wall(const std::string& id, const Vec3& a, const Vec3& b, double t) {
  return {id, Wall{a, b, t}};
}

// Planar arm in the z = 0 plane with unit links along x.
KinematicChain planar_arm(int n, double link = 1.0) {
  KinematicChain c;
  for (int k = 0; k < n; ++k) {
    Joint j;
    j.origin = k == 0 ? Vec3::Zero() : Vec3(link, 0, 0);
    c.joints.push_back(j);
    c.links.push_back({Vec3::Zero(), Vec3(link, 0, 0), 0.05});
  }
  c.ee_offset.p = Vec3(link, 0, 0);
  return c;
}

// Seven-joint arm with alternating z/y axes.
KinematicChain arm7() {
  KinematicChain c;
  const Vec3 axes[7] = {Vec3::UnitZ(), Vec3::UnitY(), Vec3::UnitZ(), Vec3::UnitY(),
                        Vec3::UnitZ(), Vec3::UnitY(), Vec3::UnitZ()};
  const double offs[7] = {0.34, 0, 0.4, 0, 0.4, 0, 0.126};
  for (int k = 0; k < 7; ++k) {
    Joint j;
    j.axis = axes[k];
    j.origin = Vec3(0, 0, offs[k]);
    j.lower = -2.9;
    j.upper = 2.9;
    c.joints.push_back(j);
    const double len = k + 1 < 7 ? offs[k + 1] : 0.15;
    c.links.push_back({Vec3::Zero(), Vec3(0, 0, len), 0.04});
  }
  c.ee_offset.p = Vec3(0, 0, 0.15);
  return c;
}

JointVector arm7_start() {
  JointVector t(7);
  t << -0.6, 0.4, 0, 1.6, 0, -0.43, 0;
  return t;
}

// Rotation by `angle` about the world `axis`, applied after q.
UnitQuaternion turned(const Vec3& axis, double angle, const UnitQuaternion& q) {
  return UnitQuaternion::normalized(UnitQuaternion::from_axis_angle(axis, angle).value() *
                                    q.value());
}

Segment segment(const PoseVector& goal, ConstraintTag tag = ConstraintTag::none) {
  Segment s;
  s.goal = goal;
  s.constraint = tag;
  return s;
}

PlannerConfig free_config() {
  PlannerConfig c;
  c.max_iters = 2000;
  return c;
}

// --- Point robot -----------------------------------------------------------

TEST(PointRobot, FreeSpaceMovesKpPerStepAlongTheLine) {
  PlannerConfig cfg = free_config();
  const double k_p = 0.1;
  const PathResult r = point_robot_plan(Vec2(0, 0), Vec2(1, 0.5), {}, cfg, k_p);
  ASSERT_EQ(r.status, PlanStatus::reached);
  const Vec2 dir = Vec2(1, 0.5).normalized();
  for (std::size_t i = 1; i < r.joint_path.size(); ++i) {
    const Vec2 a = r.joint_path[i - 1];
    const Vec2 b = r.joint_path[i];
    EXPECT_LE((b - a).norm(), k_p + 1e-12);
    // Collinear with the start-goal line.
    EXPECT_NEAR(b.x() * dir.y() - b.y() * dir.x(), 0.0, 1e-12);
  }
  EXPECT_LE((r.joint_path.back() - JointVector(Vec2(1, 0.5))).norm(), cfg.pos_tol);
}

TEST(PointRobot, LastStepIsCappedAtTheGoal) {
  const PathResult r = point_robot_plan(Vec2(0, 0), Vec2(0.25, 0), {}, free_config(), 0.1);
  ASSERT_EQ(r.status, PlanStatus::reached);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_NEAR(r.joint_path.back()(0), 0.25, 1e-15);
}

TEST(PointRobot, WallNormalToTheGoalStallsWithoutPenetration) {
  PlannerConfig cfg = free_config();
  cfg.eps = 0.05;
  const std::vector<Obstacle> obs = {wall("w", Vec3(1, -1, 0), Vec3(1, 1, 0), 0.2)};
  const PathResult r = point_robot_plan(Vec2(0, 0), Vec2(2, 0), obs, cfg, 0.04);
  EXPECT_EQ(r.status, PlanStatus::stalled);
  const ClearanceReport rep = validate_clearance(point_robot_chain(), r.joint_path, obs,
                                                 cfg.eps, 1e-4);
  EXPECT_TRUE(rep.pass) << "worst violation " << rep.worst_violation;
  // Clearance ends at eps: the wall face sits at x = 0.9.
  EXPECT_NEAR(r.joint_path.back()(0), 0.9 - cfg.eps, 1e-6);
}

TEST(PointRobot, SlidesAlongAnInclinedWall) {
  PlannerConfig cfg = free_config();
  cfg.eps = 0.05;
  cfg.max_iters = 5000;
  const std::vector<Obstacle> obs = {wall("w", Vec3(1, -1.5, 0), Vec3(2, 1, 0), 0.1)};
  const PathResult r = point_robot_plan(Vec2(0, 0), Vec2(3, 1), obs, cfg, 0.04);
  ASSERT_EQ(r.status, PlanStatus::reached);
  EXPECT_TRUE(validate_clearance(point_robot_chain(), r.joint_path, obs, cfg.eps, 1e-4).pass);
  bool had_contact = false;
  for (const Eigen::VectorXd& v : r.vc) had_contact |= v.size() > 0 && v.sum() > 0.0;
  EXPECT_TRUE(had_contact);
}

TEST(PointRobot, GantryCarriageDoesNotCollide) {
  const KinematicChain c = point_robot_chain();
  EXPECT_FALSE(c.collides(0));
  EXPECT_TRUE(c.collides(1));
  // An obstacle on the x axis far from the point cannot touch the carriage.
  const std::vector<Obstacle> obs = {sphere("s", Vec3(0.5, 0, 0), 0.1)};
  EXPECT_GT(min_clearance(c, JointVector(Vec2(0.5, 3.0)), obs), 2.0);
}

TEST(PointRobot, RejectsNonPositiveGain) {
  EXPECT_THROW(point_robot_plan(Vec2(0, 0), Vec2(1, 0), {}, free_config(), 0.0), InvalidInput);
}

// --- Single step -----------------------------------------------------------

TEST(StepState, FreeStepIsTheMinimumNormTaskSolution) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const KinematicChain c = oracle::random_chain(rng, 7, 8, 0.0);
    const JointVector t = oracle::random_joints(rng, c.dof());
    const PoseVector cur = forward_kinematics(c, t);
    const Matrix6X J = manipulator_jacobian(c, t);
    if (!fixture::full_row_rank(J)) continue;
    PlannerConfig cfg;
    cfg.lambda = 0.0;
    PoseVector target = cur;
    target.p += Vec3(oracle::uniform(rng, -1e-3, 1e-3), oracle::uniform(rng, -1e-3, 1e-3),
                     oracle::uniform(rng, -1e-3, 1e-3));
    const StepResult s = step_state(t, cur, target, c, {}, cfg);
    const Eigen::VectorXd dtheta = s.theta - t;
    const Eigen::VectorXd dgamma = target.gamma() - cur.gamma();
    // J dtheta reproduces the twist implied by the pose increment...
    EXPECT_LE((J * dtheta - representation_jacobian(cur.Q) * dgamma).norm(), 1e-10);
    // ...and dtheta lies in the row space of J (least norm).
    const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(c.dof(), c.dof()) -
                              J.transpose() * (J * J.transpose()).inverse() * J;
    EXPECT_LE((P * dtheta).norm(), 1e-10);
    EXPECT_TRUE(s.contacts.empty());
    EXPECT_FALSE(s.diag.had_lcp);
  }
}

TEST(StepState, ClearanceHoldsWhenDrivenIntoAnObstacle) {
  const KinematicChain c = planar_arm(3);
  PlannerConfig cfg;
  cfg.task = TaskMode::position;
  const JointVector t = Eigen::Vector3d(0.0, 0.0, 0.0);
  // Sphere just above the tip of the stretched arm, task pushes the tip up.
  const std::vector<Obstacle> obs = {sphere("s", Vec3(2.5, 0.2, 0), 0.1)};
  const double psi0 = min_clearance(c, t, obs);
  ASSERT_GT(psi0, cfg.eps);
  JointVector theta = t;
  PoseVector cur = forward_kinematics(c, theta);
  for (int k = 0; k < 20; ++k) {
    PoseVector target = cur;
    target.p += Vec3(0, 0.01, 0);
    const StepResult s = step_state(theta, cur, target, c, obs, cfg);
    theta = s.theta;
    cur = forward_kinematics(c, theta);
    EXPECT_GE(min_clearance(c, theta, obs), cfg.eps - 1e-6) << "step " << k;
    if (s.diag.had_lcp && s.diag.solution.status == LcpStatus::solved) {
      EXPECT_GE(s.vc.minCoeff(), 0.0);
      const LcpResidual res = verify_solution(s.diag.problem, s.diag.solution);
      EXPECT_TRUE(res.pass);
    }
  }
}

TEST(StepState, NullSpaceCompensationLeavesTheTaskVelocityAlone) {
  // A redundant planar arm whose elbow approaches a sphere while the tip
  // holds still: the compensation must come from self-motion.
  const KinematicChain c = planar_arm(4);
  PlannerConfig cfg;
  cfg.task = TaskMode::position;
  cfg.mode = ProjectionMode::null_space;
  cfg.refine_iters = 0;
  cfg.clearance_corrections = 0;
  const JointVector t = Eigen::Vector4d(0.3, 0.4, -0.5, -0.6);
  const ChainState st = chain_state(c, t);
  // Sphere just inside eps of the middle of the second link.
  const Vec3 a = st.link_frames[1].translation();
  const Vec3 b = st.link_frames[2].translation();
  const Vec3 dir = (b - a).normalized();
  const Vec3 side(-dir.y(), dir.x(), 0);
  const std::vector<Obstacle> obs = {
      sphere("s", 0.5 * (a + b) + (0.05 + 0.1 + 0.005) * side, 0.1)};
  const PoseVector cur = forward_kinematics(c, t);
  const StepResult s = step_state(t, cur, cur, c, obs, cfg);
  ASSERT_FALSE(s.contacts.empty());
  ASSERT_TRUE(s.diag.had_lcp);
  EXPECT_FALSE(s.diag.nullspace_fallback);
  ASSERT_GT(s.vc.maxCoeff(), 0.0);
  EXPECT_GE(min_clearance(c, s.theta, obs), cfg.eps - 1e-4);
  // First order: the tip does not move; the residual is second order.
  const Matrix6X J = manipulator_jacobian(c, t);
  EXPECT_LE((J.topRows<3>() * (s.theta - t)).norm(), 1e-8);
  EXPECT_LE(position_distance(forward_kinematics(c, s.theta), cur), 1e-3);
}

TEST(StepLcp, NullSpaceCompensationIsInvisibleToTheTask) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const KinematicChain c = oracle::random_chain(rng, 7, 9, 0.0);
    const JointVector t = oracle::random_joints(rng, c.dof());
    const ChainState st = chain_state(c, t);
    const Matrix6X J = point_jacobian(st, c, c.dof() - 1, st.ee.translation());
    if (!fixture::full_row_rank(J)) continue;
    const Eigen::MatrixXd P = nullspace_projector(J, 0.0);
    const Eigen::MatrixXd B = b_matrix(J, representation_jacobian(to_pose(st.ee).Q), 0.0);
    std::vector<ContactInfo> cs(3);
    std::vector<Matrix6X> jcs;
    for (ContactInfo& ci : cs) {
      ci.link_index = std::uniform_int_distribution<int>(0, c.dof() - 1)(rng);
      ci.normal = oracle::random_unit(rng);
      ci.psi = 0.0;
      ci.witness = st.link_frames[ci.link_index].translation() + 0.1 * oracle::random_unit(rng);
      jcs.push_back(point_jacobian(st, c, ci.link_index, ci.witness));
    }
    const LcpProblem p =
        assemble_step_lcp(B, Eigen::VectorXd::Zero(7), cs, jcs, 0.01, 0.01, 0.0, &P);
    EXPECT_LE((J * p.compensation).norm(), 1e-8);
    for (Eigen::Index i = 0; i < p.M.rows(); ++i) EXPECT_GE(p.M(i, i), -1e-15);
  }
}

TEST(StepState, NullSpaceFallsBackWhenTheProjectionRemovesTheGain) {
  // Six joints and a full 6-D task leave no null space at all.
  std::mt19937_64 rng(3);
  KinematicChain c;
  JointVector t;
  do {
    c = oracle::random_chain(rng, 6, 6, 0.0);
    t = oracle::random_joints(rng, 6);
  } while (!fixture::full_row_rank(manipulator_jacobian(c, t)));
  PlannerConfig cfg;
  cfg.mode = ProjectionMode::null_space;
  const PoseVector cur = forward_kinematics(c, t);
  const Vec3 tip = cur.p;
  const std::vector<Obstacle> obs = {sphere("s", tip + Vec3(0, 0, 0.05 + 0.1 + 0.02), 0.1)};
  const StepResult s = step_state(t, cur, cur, c, obs, cfg);
  if (s.contacts.empty()) GTEST_SKIP() << "no contact in generated configuration";
  EXPECT_TRUE(s.diag.nullspace_fallback);
}

TEST(StepState, JointLimitsAreClampedAndReported) {
  KinematicChain c = planar_arm(2);
  c.joints[0].upper = 0.01;
  PlannerConfig cfg;
  cfg.task = TaskMode::position;
  const JointVector t = Eigen::Vector2d(0.0, 0.5);
  PoseVector cur = forward_kinematics(c, t);
  PoseVector target = cur;
  // Counter-clockwise about the base: needs theta_0 to grow.
  target.p += 0.2 * Vec3(-cur.p.y(), cur.p.x(), 0).normalized();
  const StepResult s = step_state(t, cur, target, c, {}, cfg);
  EXPECT_LE(s.theta(0), 0.01);
  ASSERT_FALSE(s.clamped.empty());
  EXPECT_EQ(s.clamped.front(), 0);
}

// --- Local planner ---------------------------------------------------------

TEST(LocalPlan, PureTranslationFollowsTheStraightLine) {
  const KinematicChain c = arm7();
  const JointVector t = arm7_start();
  const PoseVector start = forward_kinematics(c, t);
  PoseVector goal = start;
  goal.p += Vec3(0.0, 0.2, 0.05);
  // Null-space mode refines each step onto its target, so the commanded
  // poses stay on the screw; joint-space steps drift at first order.
  PlannerConfig cfg = free_config();
  cfg.mode = ProjectionMode::null_space;
  const PathResult r = local_plan(start, goal, t, c, {}, cfg);
  ASSERT_EQ(r.status, PlanStatus::reached);
  const Vec3 dir = (goal.p - start.p).normalized();
  for (const PoseVector& p : r.commanded_path) {
    const Vec3 off = p.p - start.p;
    EXPECT_LE((off - off.dot(dir) * dir).norm(), 1e-6);
    EXPECT_LE(orientation_distance(p, start), 1e-6);
  }
  EXPECT_LT(position_distance(r.pose_path.back(), goal), free_config().pos_tol);
}

TEST(LocalPlan, ExecutedPoseTracksTheCommandedPose) {
  const KinematicChain c = arm7();
  const JointVector t = arm7_start();
  const PoseVector start = forward_kinematics(c, t);
  PoseVector goal{start.p + Vec3(0.05, 0.1, -0.05),
                  turned(Vec3::UnitX(), 0.3, start.Q)};
  for (ProjectionMode m : {ProjectionMode::joint_space, ProjectionMode::null_space}) {
    PlannerConfig cfg = free_config();
    cfg.mode = m;
    const PathResult r = local_plan(start, goal, t, c, {}, cfg);
    ASSERT_EQ(r.status, PlanStatus::reached) << static_cast<int>(m);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.pose_path.size(); ++i) {
      worst = std::max(worst, position_distance(r.pose_path[i], r.commanded_path[i]));
    }
    EXPECT_LE(worst, m == ProjectionMode::null_space ? 1e-9 : 1e-3);
  }
}

TEST(LocalPlan, UnreachableGoalDoesNotReport_reached) {
  const KinematicChain c = planar_arm(2);
  PlannerConfig cfg = free_config();
  cfg.task = TaskMode::position;
  cfg.max_iters = 300;
  const JointVector t = Eigen::Vector2d(0.2, 0.3);
  const PoseVector start = forward_kinematics(c, t);
  const PoseVector goal{Vec3(5, 0, 0), UnitQuaternion()};
  const PathResult r = local_plan(start, goal, t, c, {}, cfg);
  EXPECT_NE(r.status, PlanStatus::reached);
  EXPECT_TRUE(r.status == PlanStatus::stalled || r.status == PlanStatus::iteration_limit);
}

TEST(LocalPlan, RejectsAStartPoseThatDisagreesWithTheJoints) {
  const KinematicChain c = planar_arm(2);
  const JointVector t = Eigen::Vector2d(0.2, 0.3);
  PoseVector start = forward_kinematics(c, t);
  start.p.x() += 0.5;
  EXPECT_THROW(local_plan(start, start, t, c, {}, free_config()), InvalidInput);
}

TEST(LocalPlan, WrongJointCountIsRejected) {
  const KinematicChain c = planar_arm(3);
  EXPECT_THROW(local_plan({}, {}, JointVector::Zero(2), c, {}, free_config()), InvalidInput);
}

TEST(PlannerConfig, ValidateRejectsBadValues) {
  auto bad = [](auto mutate) {
    PlannerConfig c;
    mutate(c);
    return c;
  };
  EXPECT_NO_THROW(PlannerConfig{}.validate());
  EXPECT_THROW(bad([](PlannerConfig& c) { c.tau = 0.0; }).validate(), InvalidInput);
  EXPECT_THROW(bad([](PlannerConfig& c) { c.tau = 1.5; }).validate(), InvalidInput);
  EXPECT_THROW(bad([](PlannerConfig& c) { c.h = -1.0; }).validate(), InvalidInput);
  EXPECT_THROW(bad([](PlannerConfig& c) { c.eps = 0.0; }).validate(), InvalidInput);
  EXPECT_THROW(bad([](PlannerConfig& c) { c.d_active = 0.005; }).validate(), InvalidInput);
  EXPECT_THROW(bad([](PlannerConfig& c) { c.max_iters = 0; }).validate(), InvalidInput);
  EXPECT_THROW(bad([](PlannerConfig& c) { c.lambda = -1e-3; }).validate(), InvalidInput);
  EXPECT_THROW(bad([](PlannerConfig& c) { c.nullspace_min_gain = 2.0; }).validate(),
               InvalidInput);
}

// --- Task sequences --------------------------------------------------------

TEST(TaskSequence, FixedOrientationThenFixedPosition) {
  const KinematicChain c = arm7();
  const JointVector t = arm7_start();
  const PoseVector start = forward_kinematics(c, t);
  Segment move{{start.p + Vec3(0, 0.3, 0), start.Q}, ConstraintTag::fixed_orientation, PlannerKind::local, {}};
  Segment turn{{start.p + Vec3(0, 0.3, 0),
                turned(Vec3::UnitX(), -0.5, start.Q)},
               ConstraintTag::fixed_position, PlannerKind::local, {}};
  const std::vector<Segment> segs = {move, turn};
  const SequenceResult r = plan_task_sequence(segs, t, c, {}, free_config());
  ASSERT_EQ(r.segments.size(), 2u);
  for (const SegmentReport& s : r.segments) {
    EXPECT_EQ(s.status, PlanStatus::reached);
    EXPECT_EQ(s.mode, ProjectionMode::null_space);
    EXPECT_LE(s.commanded_deviation, kCommandedConstraintTol);
    EXPECT_TRUE(s.constraint_ok);
  }
  EXPECT_EQ(r.segments[0].first, 0u);
  EXPECT_EQ(r.segments[1].first, r.segments[0].last);
  EXPECT_EQ(r.segments[1].last + 1, r.path.joint_path.size());
}

TEST(TaskSequence, TaggedGoalIsProjectedOntoTheConstraint) {
  const KinematicChain c = arm7();
  const JointVector t = arm7_start();
  const PoseVector start = forward_kinematics(c, t);
  // The goal's orientation disagrees with the tag; the tag wins.
  const Segment seg{{start.p + Vec3(0, 0.1, 0),
                     turned(Vec3::UnitZ(), 0.4, start.Q)},
                    ConstraintTag::fixed_orientation, PlannerKind::local, {}};
  const SequenceResult r = plan_task_sequence(std::vector<Segment>{seg}, t, c, {},
                                              free_config());
  ASSERT_EQ(r.path.status, PlanStatus::reached);
  EXPECT_LE(orientation_distance(r.path.pose_path.back(), start), 1e-9);
}

TEST(TaskSequence, UntaggedSegmentsUseTheConfiguredMode) {
  const KinematicChain c = arm7();
  const JointVector t = arm7_start();
  const PoseVector start = forward_kinematics(c, t);
  const Segment seg = segment({start.p + Vec3(0, 0.05, 0), start.Q});
  PlannerConfig cfg = free_config();
  for (ProjectionMode m : {ProjectionMode::joint_space, ProjectionMode::null_space}) {
    cfg.mode = m;
    const SequenceResult r = plan_task_sequence(std::vector<Segment>{seg}, t, c, {}, cfg);
    ASSERT_EQ(r.segments.size(), 1u);
    EXPECT_EQ(r.segments[0].mode, m);
  }
}

TEST(TaskSequence, StopsAtTheFirstFailingSegment) {
  const KinematicChain c = planar_arm(2);
  PlannerConfig cfg = free_config();
  cfg.task = TaskMode::position;
  cfg.max_iters = 200;
  const JointVector t = Eigen::Vector2d(0.2, 0.3);
  const std::vector<Segment> segs = {segment({Vec3(5, 0, 0), UnitQuaternion()}),
                                     segment({Vec3(1, 1, 0), UnitQuaternion()})};
  const SequenceResult r = plan_task_sequence(segs, t, c, {}, cfg);
  EXPECT_EQ(r.segments.size(), 1u);
  EXPECT_NE(r.path.status, PlanStatus::reached);
}

TEST(TaskSequence, EmptySequenceIsTriviallyReached) {
  const SequenceResult r = plan_task_sequence({}, JointVector::Zero(2), planar_arm(2), {},
                                              free_config());
  EXPECT_EQ(r.path.status, PlanStatus::reached);
  EXPECT_TRUE(r.segments.empty());
}

// --- RRT -------------------------------------------------------------------

struct RrtFixture {
  KinematicChain chain = arm7();
  JointVector theta = arm7_start();
  PoseVector start = forward_kinematics(chain, theta);
  PoseVector goal{start.p + Vec3(0, 0.4, 0), start.Q};
  std::vector<Obstacle> obs = {sphere("s", start.p + Vec3(0, 0.2, 0.0), 0.05)};
  RrtConfig rrt;

  RrtFixture() {
    rrt.seed = 11;
    rrt.workspace = {start.p - Vec3(0.3, 0.3, 0.3), start.p + Vec3(0.3, 0.7, 0.3)};
    rrt.constraint = ConstraintTag::fixed_orientation;
  }
};

TEST(Rrt, SameSeedGivesTheSamePath) {
  const RrtFixture f;
  PlannerConfig cfg = free_config();
  cfg.mode = ProjectionMode::null_space;
  const RrtResult a = rrt_plan(f.start, f.goal, f.theta, f.chain, f.obs, cfg, f.rrt);
  const RrtResult b = rrt_plan(f.start, f.goal, f.theta, f.chain, f.obs, cfg, f.rrt);
  ASSERT_TRUE(a.stats.success);
  EXPECT_EQ(a.stats.nodes, b.stats.nodes);
  EXPECT_EQ(a.stats.samples, b.stats.samples);
  ASSERT_EQ(a.path.joint_path.size(), b.path.joint_path.size());
  for (std::size_t i = 0; i < a.path.joint_path.size(); ++i) {
    ASSERT_EQ(a.path.joint_path[i], b.path.joint_path[i]) << "waypoint " << i;
  }
}

TEST(Rrt, FixedOrientationSamplesKeepTheStartOrientation) {
  // Contact-free, so every commanded pose comes straight from a sample.
  const RrtFixture f;
  PlannerConfig cfg = free_config();
  cfg.mode = ProjectionMode::null_space;
  RrtConfig rrt = f.rrt;
  rrt.goal_bias = 0.0;
  rrt.max_nodes = 5;
  const RrtResult r = rrt_plan(f.start, f.goal, f.theta, f.chain, {}, cfg, rrt);
  ASSERT_GE(r.stats.nodes, 2);
  for (const PoseVector& p : r.path.commanded_path) {
    EXPECT_LE(orientation_distance(p, f.start), 1e-9);
  }
}

TEST(Rrt, RoutesAroundAnObstacleWithinTolerance) {
  const RrtFixture f;
  PlannerConfig cfg = free_config();
  cfg.mode = ProjectionMode::null_space;
  const RrtResult r = rrt_plan(f.start, f.goal, f.theta, f.chain, f.obs, cfg, f.rrt);
  ASSERT_TRUE(r.stats.success);
  EXPECT_EQ(r.path.status, PlanStatus::reached);
  // Compensation on the end-effector link perturbs the orientation; the
  // next interpolation pulls it back.
  for (const PoseVector& p : r.path.pose_path) {
    EXPECT_LE(orientation_distance(p, f.start), cfg.ori_tol);
  }
  EXPECT_TRUE(validate_clearance(f.chain, r.path.joint_path, f.obs, cfg.eps, 1e-4).pass);
}

TEST(Rrt, ExhaustedBudgetFails) {
  RrtFixture f;
  f.rrt.max_nodes = 1;
  // Goal inside the obstacle: no extension can reach it.
  f.goal.p = std::get<Sphere>(f.obs[0].shape).center;
  const RrtResult r =
      rrt_plan(f.start, f.goal, f.theta, f.chain, f.obs, free_config(), f.rrt);
  EXPECT_FALSE(r.stats.success);
  EXPECT_EQ(r.path.status, PlanStatus::failed);
}

TEST(Rrt, RejectsBadConfig) {
  const RrtFixture f;
  RrtConfig bad = f.rrt;
  bad.goal_bias = 1.5;
  EXPECT_THROW(rrt_plan(f.start, f.goal, f.theta, f.chain, f.obs, free_config(), bad),
               InvalidInput);
}

}  // namespace
}  // namespace screwplan
