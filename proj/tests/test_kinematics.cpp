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

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "screwplan/kinematics.hpp"

namespace screwplan {
namespace {

constexpr double kPi = std::numbers::pi;

KinematicChain planar(int n, double len = 1.0) {
  KinematicChain c;
  for (int k = 0; k < n; ++k) {
    c.joints.push_back({JointType::revolute, Vec3::UnitZ(),
                        k == 0 ? Vec3::Zero() : Vec3(len, 0, 0)});
    c.links.push_back({Vec3::Zero(), Vec3(len, 0, 0), 0.05});
  }
  c.ee_offset.p = Vec3(len, 0, 0);
  return c;
}

JointVector jv(std::initializer_list<double> v) {
  JointVector t(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) t(i++) = x;
  return t;
}

TEST(ForwardKinematics, Planar2R) {
  const KinematicChain c = planar(2);
  EXPECT_LE((forward_kinematics(c, jv({0, 0})).p - Vec3(2, 0, 0)).norm(), 1e-15);
  EXPECT_LE((forward_kinematics(c, jv({kPi / 2, 0})).p - Vec3(0, 2, 0)).norm(), 1e-15);
}

TEST(ForwardKinematics, DimensionMismatch) {
  EXPECT_THROW(forward_kinematics(planar(2), jv({0})), InvalidInput);
}

TEST(ForwardKinematics, MatchesIndependentMatrixChain) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 300; ++i) {
    const KinematicChain c = oracle::random_chain(rng);
    const JointVector t = oracle::random_joints(rng, c.dof());
    const Eigen::Matrix4d expected = oracle::fk_matrix(c, t);
    EXPECT_LE((oracle::homogeneous(forward_kinematics(c, t)) - expected).norm(), 1e-12);
  }
}

TEST(LinkFrames, StraightArm) {
  const auto f = link_frames(planar(2), jv({0, 0}));
  ASSERT_EQ(f.size(), 2u);
  EXPECT_LE(f[0].p.norm(), 1e-15);
  EXPECT_LE((f[1].p - Vec3(1, 0, 0)).norm(), 1e-15);
}

TEST(LinkFrames, ZeroDofChainIsBase) {
  KinematicChain c;
  c.base.p = Vec3(1, 2, 3);
  const auto f = link_frames(c, JointVector(0));
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].p, Vec3(1, 2, 3));
}

TEST(LinkFrames, LastFrameComposedWithOffsetIsFk) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 100; ++i) {
    const KinematicChain c = oracle::random_chain(rng);
    const JointVector t = oracle::random_joints(rng, c.dof());
    const auto f = link_frames(c, t);
    const Eigen::Matrix4d composed =
        oracle::homogeneous(f.back()) * oracle::homogeneous(c.ee_offset);
    EXPECT_LE((composed - oracle::homogeneous(forward_kinematics(c, t))).norm(), 1e-12);
  }
}

TEST(ManipulatorJacobian, FiniteDifferenceOracle) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    const KinematicChain c = oracle::random_chain(rng);
    const JointVector t = oracle::random_joints(rng, c.dof());
    const JointVector rate = oracle::random_joints(rng, c.dof(), 1.0);
    const auto fd = oracle::fd_twist(c, t, rate);
    EXPECT_LE((manipulator_jacobian(c, t) * rate - fd).norm(), 1e-6);
  }
}

TEST(ManipulatorJacobian, PrismaticColumnHasNoAngularPart) {
  KinematicChain c = planar(2);
  c.joints[1].type = JointType::prismatic;
  c.joints[1].axis = Vec3::UnitX();
  const Matrix6X J = manipulator_jacobian(c, jv({0.3, 0.2}));
  EXPECT_EQ(J.col(1).tail(3).norm(), 0.0);
}

TEST(ManipulatorJacobian, LockedJointsGiveSubChain) {
  // Locking the last joint of a 3R arm at zero equals a 2R arm with a longer
  // end-effector offset.
  const KinematicChain c3 = planar(3);
  KinematicChain c2 = planar(2);
  c2.ee_offset.p = Vec3(2, 0, 0);
  const JointVector t3 = jv({0.4, -0.7, 0.0});
  const Matrix6X J3 = manipulator_jacobian(c3, t3);
  const Matrix6X J2 = manipulator_jacobian(c2, jv({0.4, -0.7}));
  EXPECT_LE((J3.leftCols(2) - J2).norm(), 1e-12);
}

TEST(RepresentationJacobian, IdentityRate) {
  const Matrix67 Jr = representation_jacobian(UnitQuaternion());
  Vec7 g = Vec7::Zero();
  g(4) = 0.5;
  const Eigen::Matrix<double, 6, 1> V = Jr * g;
  EXPECT_LE((V.tail<3>() - Vec3(1, 0, 0)).norm(), 1e-15);
  EXPECT_EQ((Jr.leftCols(3).topRows(3) - Eigen::Matrix3d::Identity()).norm(), 0.0);
}

TEST(RepresentationJacobian, MatchesFiniteDifferencedPoseVector) {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 300; ++i) {
    const KinematicChain c = oracle::random_chain(rng);
    const JointVector t = oracle::random_joints(rng, c.dof());
    const JointVector rate = oracle::random_joints(rng, c.dof(), 1.0);
    constexpr double kStep = 1e-6;
    const PoseVector p0 = forward_kinematics(c, t);
    Vec7 gp = forward_kinematics(c, t + kStep * rate).gamma();
    Vec7 gm = forward_kinematics(c, t - kStep * rate).gamma();
    // Keep both samples in the hemisphere of the centre quaternion.
    if (gp.tail<4>().dot(p0.gamma().tail<4>()) < 0) gp.tail<4>() *= -1;
    if (gm.tail<4>().dot(p0.gamma().tail<4>()) < 0) gm.tail<4>() *= -1;
    const Vec7 gdot = (gp - gm) / (2 * kStep);
    const Eigen::Matrix<double, 6, 1> V = representation_jacobian(p0.Q) * gdot;
    EXPECT_LE((V - manipulator_jacobian(c, t) * rate).norm(), 1e-5);
  }
}

TEST(BMatrix, SquareInvertible) {
  std::mt19937_64 rng(25);
  int tested = 0;
  while (tested < 50) {
    const KinematicChain c = oracle::random_chain(rng, 6, 6, 0.0);
    const JointVector t = oracle::random_joints(rng, 6);
    const Matrix6X J = manipulator_jacobian(c, t);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    if (svd.singularValues()(5) < 1e-2) continue;
    const Matrix67 Jr = representation_jacobian(forward_kinematics(c, t).Q);
    const Eigen::MatrixXd B = b_matrix(J, Jr, 0.0);
    EXPECT_LE((B - Eigen::MatrixXd(J).inverse() * Jr).norm(), 1e-8);
    ++tested;
  }
}

TEST(BMatrix, RedundantRightInverse) {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 100; ++i) {
    const KinematicChain c = oracle::random_chain(rng, 8, 8, 0.0);
    const JointVector t = oracle::random_joints(rng, 8);
    const Matrix6X J = manipulator_jacobian(c, t);
    const Matrix67 Jr = representation_jacobian(forward_kinematics(c, t).Q);
    EXPECT_LE((J * b_matrix(J, Jr, 0.0) - Jr).norm(), 1e-8);
  }
}

TEST(BMatrix, SingularWithoutDampingThrows) {
  // Planar arm: J has three identically zero rows.
  const KinematicChain c = planar(3);
  const JointVector t = jv({0.1, 0.2, 0.3});
  const Matrix6X J = manipulator_jacobian(c, t);
  const Matrix67 Jr = representation_jacobian(UnitQuaternion());
  EXPECT_THROW(b_matrix(J, Jr, 0.0), SingularityError);
  const Eigen::MatrixXd B = b_matrix(J, Jr, 0.01);
  EXPECT_TRUE(B.allFinite());
  // Bound from the SVD: sigma / (sigma^2 + lambda^2) <= 1 / (2 lambda).
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_b(B);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_r(Jr);
  EXPECT_LE(svd_b.singularValues()(0),
            svd_r.singularValues()(0) / (2 * 0.01) + 1e-9);
}

TEST(ContactJacobian, AtEndEffectorEqualsManipulatorJacobian) {
  std::mt19937_64 rng(27);
  const KinematicChain c = oracle::random_chain(rng, 5, 5);
  const JointVector t = oracle::random_joints(rng, 5);
  const Vec3 ee = forward_kinematics(c, t).p;
  EXPECT_LE((contact_jacobian(c, t, 4, ee) - manipulator_jacobian(c, t)).norm(), 1e-15);
}

TEST(ContactJacobian, PaddingAndRange) {
  const KinematicChain c = planar(2);
  const Matrix6X Jc = contact_jacobian(c, jv({0.3, 0.4}), 0, Vec3(0.5, 0.1, 0));
  EXPECT_EQ(Jc.col(1), (Eigen::Matrix<double, 6, 1>::Zero()));
  EXPECT_THROW(contact_jacobian(c, jv({0, 0}), 2, Vec3::Zero()), InvalidInput);
  EXPECT_THROW(contact_jacobian(c, jv({0, 0}), -1, Vec3::Zero()), InvalidInput);
}

TEST(ContactJacobian, LinearRowsMatchWitnessFiniteDifferences) {
  std::mt19937_64 rng(28);
  for (int i = 0; i < 200; ++i) {
    const KinematicChain c = oracle::random_chain(rng, 2, 7);
    const int n = c.dof();
    const JointVector t = oracle::random_joints(rng, n);
    const int k = std::uniform_int_distribution<int>(0, n - 1)(rng);
    // A point fixed in link k's frame.
    const Vec3 local(oracle::uniform(rng, -0.5, 0.5), oracle::uniform(rng, -0.5, 0.5),
                     oracle::uniform(rng, -0.5, 0.5));
    auto world = [&](const JointVector& q) {
      const PoseVector f = link_frames(c, q)[k];
      return Vec3(f.p + f.Q.rotate(local));
    };
    const JointVector rate = oracle::random_joints(rng, n, 1.0);
    constexpr double kStep = 1e-6;
    const Vec3 fd = (world(t + kStep * rate) - world(t - kStep * rate)) / (2 * kStep);
    const Matrix6X Jc = contact_jacobian(c, t, k, world(t));
    EXPECT_LE((Jc.topRows(3) * rate - fd).norm(), 1e-6);
    for (int j = k + 1; j < n; ++j) EXPECT_EQ(Jc.col(j).norm(), 0.0);
  }
}

TEST(Pseudoinverse, BasicCases) {
  EXPECT_LE((pseudoinverse(Eigen::MatrixXd::Identity(3, 3), 0.0) -
             Eigen::MatrixXd::Identity(3, 3))
                .norm(),
            1e-15);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = 2.0;
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 2);
  expected(0, 0) = 0.5;
  EXPECT_LE((pseudoinverse(D, 0.0) - expected).norm(), 1e-15);
}

TEST(Pseudoinverse, PenroseConditions) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 200; ++i) {
    const int r = std::uniform_int_distribution<int>(1, 6)(rng);
    const int c = std::uniform_int_distribution<int>(1, 8)(rng);
    Eigen::MatrixXd A(r, c);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < c; ++b) A(a, b) = oracle::uniform(rng, -1, 1);
    const Eigen::MatrixXd P = pseudoinverse(A, 0.0);
    EXPECT_LE((A * P * A - A).norm(), 1e-9);
    EXPECT_LE((P * A * P - P).norm(), 1e-9);
    EXPECT_LE((A * P - (A * P).transpose()).norm(), 1e-9);
  }
}

TEST(Pseudoinverse, DampedSingularValues) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = 2.0;
  D(1, 1) = 1e-3;
  const Eigen::MatrixXd P = pseudoinverse(D, 0.1);
  EXPECT_NEAR(P(0, 0), 2.0 / (4.0 + 0.01), 1e-15);
  EXPECT_NEAR(P(1, 1), 1e-3 / (1e-6 + 0.01), 1e-15);
}

TEST(NullspaceProjector, Properties) {
  std::mt19937_64 rng(30);
  for (int i = 0; i < 100; ++i) {
    const KinematicChain c = oracle::random_chain(rng, 8, 8, 0.0);
    const JointVector t = oracle::random_joints(rng, 8);
    const Matrix6X J = manipulator_jacobian(c, t);
    const Eigen::MatrixXd P = nullspace_projector(J, 0.0);
    const JointVector x = oracle::random_joints(rng, 8, 1.0);
    EXPECT_LE((J * P * x).norm(), 1e-8 * x.norm());
    EXPECT_LE((P * P - P).norm(), 1e-8);
  }
  // Square invertible: empty null space.
  const KinematicChain c6 = oracle::random_chain(rng, 6, 6, 0.0);
  const Matrix6X J6 = manipulator_jacobian(c6, oracle::random_joints(rng, 6));
  EXPECT_LE(nullspace_projector(J6, 0.0).norm(), 1e-8);
}

TEST(JointLimitClamp, Cases) {
  KinematicChain c = planar(2);
  auto r = joint_limit_clamp(jv({0.1, -0.2}), c);
  EXPECT_TRUE(r.clamped.empty());
  EXPECT_EQ(r.theta, jv({0.1, -0.2}));
  c.joints[0].upper = 1.0;
  r = joint_limit_clamp(jv({1.5, 0.0}), c);
  EXPECT_EQ(r.theta(0), 1.0);
  ASSERT_EQ(r.clamped.size(), 1u);
  EXPECT_EQ(r.clamped[0], 0);
  r = joint_limit_clamp(jv({0.0, kPi}), planar(2));
  EXPECT_TRUE(r.clamped.empty());
  EXPECT_EQ(r.theta(1), kPi);
}

TEST(ChainValidate, Rejections) {
  KinematicChain c = planar(2);
  c.links.pop_back();
  EXPECT_THROW(c.validate(), InvalidInput);
  c = planar(2);
  c.joints[1].axis = Vec3(1, 1, 0);
  EXPECT_THROW(c.validate(), InvalidInput);
  c = planar(2);
  c.joints[0].lower = 1;
  c.joints[0].upper = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(IkSolve, ConvergesOnReachablePose) {
  std::mt19937_64 rng(31);
  const KinematicChain c = oracle::random_chain(rng, 7, 7, 0.0);
  const JointVector goal_t = oracle::random_joints(rng, 7, 1.0);
  const PoseVector target = forward_kinematics(c, goal_t);
  const IkResult r = ik_solve(c, target, goal_t + oracle::random_joints(rng, 7, 0.2));
  EXPECT_TRUE(r.converged);
  EXPECT_LE(position_distance(forward_kinematics(c, r.theta), target), 1e-8);
}

}  // namespace
}  // namespace screwplan
