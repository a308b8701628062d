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

/// \file planner.hpp
/// \brief Complementarity-based local planning in task space.
///
/// One planner step moves the joints toward a task-space target gamma^{t+h}
/// (a screw interpolate of the current pose toward the goal):
///
///   Theta^{t+h} = Theta^t + B (gamma^{t+h} - gamma^t)
///                 + h^2 * P * sum_i J_ci^+ N_i v_i
///   0 <= v_i  _|_  psi_i + N_i^T J_ci (Theta^{t+h} - Theta^t) - eps >= 0
///
/// where P is the identity (joint-space form) or the null-space projector of
/// the end-effector Jacobian. With the task velocity gamma-dot =
/// (gamma^{t+h} - gamma^t) / h the complementarity rows become the LCP
/// q_i = psi_i + h N_i^T J_ci B gamma-dot - eps, M_ij = h^2 N_i^T J_ci P
/// J_cj^+ N_j.

#ifndef SCREWPLAN_PLANNER_HPP_
#define SCREWPLAN_PLANNER_HPP_

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "screwplan/contacts.hpp"
#include "screwplan/dualquat.hpp"
#include "screwplan/error.hpp"
#include "screwplan/kinematics.hpp"
#include "screwplan/lcp.hpp"

namespace screwplan {

/// How compensating joint rates enter the update.
enum class ProjectionMode {
  joint_space,  // added directly; the end effector is deflected too
  null_space,   // projected into the null space of the end-effector Jacobian
};

/// Which components of the pose the task controls. `position` treats the
/// task space as R^3 (planar arms and point robots).
enum class TaskMode { full, position };

struct PlannerConfig {
  double tau = 0.02;
  double h = 0.01;
  double eps = 0.01;
  std::optional<double> d_active;  // defaults to 5 * eps
  double pos_tol = 1e-3;
  double ori_tol = 1e-2;
  double stall_tol = 1e-6;
  int stall_window = 3;
  int max_iters = 10000;
  double lambda = 1e-6;
  ProjectionMode mode = ProjectionMode::joint_space;
  TaskMode task = TaskMode::full;
  /// Extra Newton sub-steps toward the same target, null-space mode only.
  int refine_iters = 3;
  /// Re-linearization passes on the exact clearance at the candidate joints;
  /// 0 keeps the single first-order LCP per step.
  int clearance_corrections = 2;
  /// Null-space mode: when projecting a contact's compensation onto the task
  /// null space leaves less than this fraction of its normal gain M_ii, the
  /// null space cannot serve that contact and the step uses the joint-space
  /// form instead.
  double nullspace_min_gain = 0.05;

  double activation_radius() const { return d_active.value_or(5.0 * eps); }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidInput(std::string("planner config: ") + name +
                           " must be positive");
      }
    };
    positive(tau, "tau");
    if (tau > 1.0) throw InvalidInput("planner config: tau must be <= 1");
    positive(h, "h");
    positive(eps, "eps");
    positive(pos_tol, "pos_tol");
    positive(ori_tol, "ori_tol");
    positive(stall_tol, "stall_tol");
    if (!(lambda >= 0.0)) {
      throw InvalidInput("planner config: lambda must be non-negative");
    }
    if (max_iters <= 0) throw InvalidInput("planner config: max_iters <= 0");
    if (stall_window <= 0) {
      throw InvalidInput("planner config: stall_window <= 0");
    }
    if (refine_iters < 0) {
      throw InvalidInput("planner config: refine_iters < 0");
    }
    if (clearance_corrections < 0) {
      throw InvalidInput("planner config: clearance_corrections < 0");
    }
    if (!(nullspace_min_gain >= 0.0 && nullspace_min_gain <= 1.0)) {
      throw InvalidInput("planner config: nullspace_min_gain must lie in [0, 1]");
    }
    if (!(activation_radius() > eps)) {
      throw InvalidInput("planner config: d_active must exceed eps");
    }
  }

  bool operator==(const PlannerConfig&) const = default;
};

struct StepDiagnostics {
  bool had_lcp = false;
  LcpStatus lcp_status = LcpStatus::solved;
  bool sequential_fallback = false;
  bool nullspace_fallback = false;
  int refine_steps = 0;
  int correction_passes = 0;
  /// min_i (psi_i + N_i^T J_ci dTheta - eps) over the active contacts, before
  /// joint-limit clamping; +inf without contacts.
  double min_linearized_surplus = std::numeric_limits<double>::infinity();
  LcpProblem problem;
  LcpSolution solution;
};

struct StepResult {
  JointVector theta;
  std::vector<ContactInfo> contacts;
  Eigen::VectorXd vc;
  std::vector<int> clamped;
  StepDiagnostics diag;
};

namespace detail {

/// gamma_target - gamma_t with the target quaternion moved into the same
/// hemisphere as the current one.
inline Vec7 pose_increment(const PoseVector& current, const PoseVector& target) {
  Vec7 d = target.gamma() - current.gamma();
  if (dot(current.Q.value(), target.Q.value()) < 0.0) {
    Vec7 flipped = target.gamma();
    flipped.tail<4>() *= -1.0;
    d = flipped - current.gamma();
  }
  return d;
}

/// Projected Gauss-Seidel over single contact rows, in the problem's order
/// (ascending psi). Returns false if some row cannot be satisfied.
inline bool sequential_resolution(const LcpProblem& p, double h,
                                  const Eigen::VectorXd& free_step,
                                  const std::vector<double>& psi_minus_eps,
                                  Eigen::VectorXd& z, Eigen::VectorXd& dtheta) {
  const Eigen::Index nc = p.size();
  z = Eigen::VectorXd::Zero(nc);
  dtheta = free_step;
  const double h2 = h * h;
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool clean = true;
    for (Eigen::Index i = 0; i < nc; ++i) {
      const double gap = psi_minus_eps[i] + p.normal_rows.row(i).dot(dtheta);
      const double m = h2 * p.normal_rows.row(i).dot(p.compensation.col(i));
      if (gap < -1e-12) {
        clean = false;
        if (!(m > 1e-12 * h2)) return false;
        const double dz = -gap / m;
        z(i) += dz;
        dtheta += h2 * dz * p.compensation.col(i);
      } else if (z(i) > 0.0 && gap > 1e-12 && m > 1e-12 * h2) {
        // Release speed that is no longer needed.
        const double dz = std::min(z(i), gap / m);
        z(i) -= dz;
        dtheta -= h2 * dz * p.compensation.col(i);
      }
    }
    if (clean) return true;
  }
  for (Eigen::Index i = 0; i < nc; ++i) {
    if (psi_minus_eps[i] + p.normal_rows.row(i).dot(dtheta) < -1e-8) {
      return false;
    }
  }
  return true;
}

/// Contact Jacobians of the active contacts. With a position task the
/// angular rows are zeroed: the compensation then only has to translate the
/// witness point, instead of also holding the contact link's orientation,
/// which is singular for a planar arm whose upstream joints line up.
inline std::vector<Matrix6X> contact_jacobians(const ChainState& st,
                                               const KinematicChain& chain,
                                               std::span<const ContactInfo> cs,
                                               TaskMode task) {
  std::vector<Matrix6X> out;
  out.reserve(cs.size());
  for (const ContactInfo& c : cs) {
    out.push_back(point_jacobian(st, chain, c.link_index, c.witness));
    if (task == TaskMode::position) out.back().bottomRows(3).setZero();
  }
  return out;
}

/// True when projecting onto the task null space keeps at least
/// cfg.nullspace_min_gain of every contact's unprojected normal gain.
inline bool nullspace_serves(const LcpProblem& projected, const LcpProblem& plain,
                             const PlannerConfig& cfg) {
  for (Eigen::Index i = 0; i < projected.M.rows(); ++i) {
    if (!(projected.M(i, i) >= cfg.nullspace_min_gain * plain.M(i, i))) return false;
  }
  return true;
}

/// Newton passes on psi(Theta) >= eps: while some clearance at
/// theta + dtheta is below eps, solve the contact LCP linearized there with
/// zero task motion and add its compensation. Returns the passes used.
inline int correct_clearance(const JointVector& theta, Eigen::VectorXd& dtheta,
                             Eigen::Index task_cols,
                             const KinematicChain& chain,
                             std::span<const Obstacle> obstacles,
                             const PlannerConfig& cfg, ProjectionMode mode) {
  const int n = chain.dof();
  int passes = 0;
  for (; passes < cfg.clearance_corrections; ++passes) {
    const JointVector candidate = theta + dtheta;
    const ChainState st = chain_state(chain, candidate);
    const std::vector<ContactInfo> cs =
        detect_contacts(chain, st, obstacles, cfg.activation_radius());
    if (cs.empty() || cs.front().psi >= cfg.eps) break;
    const std::vector<Matrix6X> jcs = contact_jacobians(st, chain, cs, cfg.task);
    Eigen::MatrixXd P;
    if (mode == ProjectionMode::null_space) {
      const Matrix6X J =
          point_jacobian(st, chain, n - 1, st.ee.translation());
      P = nullspace_projector(
          cfg.task == TaskMode::position ? Eigen::MatrixXd(J.topRows(3))
                                         : Eigen::MatrixXd(J),
          cfg.lambda);
    }
    const Eigen::MatrixXd B0 = Eigen::MatrixXd::Zero(n, task_cols);
    LcpProblem pr = assemble_step_lcp(B0, Eigen::VectorXd::Zero(task_cols), cs,
                                      jcs, cfg.h, cfg.eps, cfg.lambda);
    if (mode == ProjectionMode::null_space) {
      LcpProblem projected =
          assemble_step_lcp(B0, Eigen::VectorXd::Zero(task_cols), cs, jcs,
                            cfg.h, cfg.eps, cfg.lambda, &P);
      if (nullspace_serves(projected, pr, cfg)) pr = std::move(projected);
    }
    const LcpSolution sol = solve_lcp(pr);
    if (sol.status != LcpStatus::solved) break;
    dtheta += cfg.h * cfg.h * pr.compensation * sol.z;
  }
  return passes;
}

/// One unrefined step. `mode` may differ from cfg.mode (fallback).
inline StepResult core_step(const JointVector& theta, const PoseVector& current,
                            const PoseVector& target,
                            const KinematicChain& chain,
                            std::span<const Obstacle> obstacles,
                            const PlannerConfig& cfg, ProjectionMode mode) {
  const int n = chain.dof();
  const ChainState state = chain_state(chain, theta);
  const Matrix6X J =
      point_jacobian(state, chain, n - 1, state.ee.translation());

  Vec7 dgamma = pose_increment(current, target);
  Eigen::MatrixXd J_task;
  Eigen::MatrixXd Jr;
  if (cfg.task == TaskMode::position) {
    J_task = J.topRows(3);
    Jr = Eigen::MatrixXd::Zero(3, 7);
    Jr.leftCols(3).setIdentity();
    dgamma.tail<4>().setZero();
  } else {
    J_task = J;
    Jr = representation_jacobian(current.Q);
  }
  const Eigen::MatrixXd B = b_matrix(J_task, Jr, cfg.lambda);
  const Eigen::VectorXd task_velocity = dgamma / cfg.h;
  const Eigen::VectorXd free_step = B * dgamma;

  StepResult out;
  out.contacts =
      detect_contacts(chain, state, obstacles, cfg.activation_radius());
  const std::size_t nc = out.contacts.size();
  Eigen::VectorXd dtheta = free_step;
  out.vc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nc));
  if (nc > 0) {
    const std::vector<Matrix6X> jcs =
        contact_jacobians(state, chain, out.contacts, cfg.task);
    Eigen::MatrixXd P;
    if (mode == ProjectionMode::null_space) {
      P = nullspace_projector(J_task, cfg.lambda);
    }
    StepDiagnostics& dg = out.diag;
    dg.had_lcp = true;
    dg.problem = assemble_step_lcp(
        B, task_velocity, out.contacts, jcs, cfg.h, cfg.eps, cfg.lambda,
        mode == ProjectionMode::null_space ? &P : nullptr);
    if (mode == ProjectionMode::null_space &&
        !nullspace_serves(dg.problem,
                          assemble_step_lcp(B, task_velocity, out.contacts, jcs,
                                            cfg.h, cfg.eps, cfg.lambda),
                          cfg)) {
      StepResult r = core_step(theta, current, target, chain, obstacles, cfg,
                               ProjectionMode::joint_space);
      r.diag.nullspace_fallback = true;
      return r;
    }
    dg.solution = solve_lcp(dg.problem);
    dg.lcp_status = dg.solution.status;
    const double h2 = cfg.h * cfg.h;
    if (dg.solution.status == LcpStatus::solved) {
      out.vc = dg.solution.z;
      dtheta = free_step + h2 * dg.problem.compensation * out.vc;
    } else {
      std::vector<double> gaps(nc);
      for (std::size_t i = 0; i < nc; ++i) {
        gaps[i] = out.contacts[i].psi - cfg.eps;
      }
      Eigen::VectorXd z;
      if (!sequential_resolution(dg.problem, cfg.h, free_step, gaps, z,
                                 dtheta)) {
        if (mode == ProjectionMode::null_space) {
          StepResult r = core_step(theta, current, target, chain, obstacles,
                                   cfg, ProjectionMode::joint_space);
          r.diag.nullspace_fallback = true;
          return r;
        }
        throw StepFailure(std::string("step LCP ") +
                          to_string(dg.solution.status) +
                          " and sequential resolution failed");
      }
      dg.sequential_fallback = true;
      out.vc = z;
    }
    for (std::size_t i = 0; i < nc; ++i) {
      dg.min_linearized_surplus = std::min(
          dg.min_linearized_surplus,
          out.contacts[i].psi + dg.problem.normal_rows.row(i).dot(dtheta) -
              cfg.eps);
    }
  }
  out.diag.correction_passes =
      correct_clearance(theta, dtheta, B.cols(), chain, obstacles, cfg, mode);
  ClampResult cl = joint_limit_clamp(theta + dtheta, chain);
  out.theta = std::move(cl.theta);
  out.clamped = std::move(cl.clamped);
  return out;
}

}  // namespace detail

/// One step of the complementarity state evolution from (theta, current)
/// toward `target`. In null-space mode up to cfg.refine_iters extra
/// sub-steps toward the same target remove the second-order pose error of
/// the linear update; each sub-step is itself contact-aware.
inline StepResult step_state(const JointVector& theta, const PoseVector& current,
                             const PoseVector& target,
                             const KinematicChain& chain,
                             std::span<const Obstacle> obstacles,
                             const PlannerConfig& cfg) {
  check_dimension(chain, theta);
  StepResult out =
      detail::core_step(theta, current, target, chain, obstacles, cfg, cfg.mode);
  if (cfg.mode != ProjectionMode::null_space) return out;
  for (int k = 0; k < cfg.refine_iters; ++k) {
    const PoseVector reached = forward_kinematics(chain, out.theta);
    const double ep = position_distance(reached, target);
    const double eo = cfg.task == TaskMode::full
                          ? orientation_distance(reached, target)
                          : 0.0;
    if (ep < 1e-13 && eo < 1e-13) break;
    StepResult sub = detail::core_step(out.theta, reached, target, chain,
                                       obstacles, cfg, cfg.mode);
    out.theta = std::move(sub.theta);
    for (int j : sub.clamped) out.clamped.push_back(j);
    out.diag.nullspace_fallback |= sub.diag.nullspace_fallback;
    out.diag.sequential_fallback |= sub.diag.sequential_fallback;
    ++out.diag.refine_steps;
  }
  return out;
}

enum class PlanStatus { reached, stalled, iteration_limit, failed };

inline const char* to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::reached:
      return "reached";
    case PlanStatus::stalled:
      return "stalled";
    case PlanStatus::iteration_limit:
      return "iteration-limit";
    case PlanStatus::failed:
      return "failed";
  }
  return "?";
}

/// A planned path. Index 0 is the start; entry i > 0 is produced by step i.
struct PathResult {
  std::vector<JointVector> joint_path;
  std::vector<PoseVector> pose_path;       // FK of joint_path
  std::vector<PoseVector> commanded_path;  // interpolation targets
  std::vector<std::vector<ContactInfo>> contacts;
  std::vector<Eigen::VectorXd> vc;
  PlanStatus status = PlanStatus::failed;
  int iterations = 0;
  double final_pos_distance = 0.0;
  double final_ori_distance = 0.0;
  std::vector<int> joint_limit_flags;  // sorted, unique, 0-based
  std::string message;

  std::size_t size() const { return joint_path.size(); }

  void push(JointVector theta, PoseVector pose, PoseVector commanded,
            std::vector<ContactInfo> c, Eigen::VectorXd v) {
    joint_path.push_back(std::move(theta));
    pose_path.push_back(std::move(pose));
    commanded_path.push_back(std::move(commanded));
    contacts.push_back(std::move(c));
    vc.push_back(std::move(v));
  }

  void flag_joints(std::span<const int> clamped) {
    std::set<int> s(joint_limit_flags.begin(), joint_limit_flags.end());
    s.insert(clamped.begin(), clamped.end());
    joint_limit_flags.assign(s.begin(), s.end());
  }

  /// Appends `next`, dropping its first entry (the shared junction).
  void append(const PathResult& next) {
    for (std::size_t i = 1; i < next.size(); ++i) {
      push(next.joint_path[i], next.pose_path[i], next.commanded_path[i],
           next.contacts[i], next.vc[i]);
    }
    iterations += next.iterations;
    status = next.status;
    final_pos_distance = next.final_pos_distance;
    final_ori_distance = next.final_ori_distance;
    flag_joints(next.joint_limit_flags);
    if (!next.message.empty()) message = next.message;
  }
};

using StepObserver =
    std::function<void(int iteration, const PoseVector& target,
                        const StepResult& step)>;

inline bool goal_reached(const PoseVector& a, const PoseVector& goal,
                         const PlannerConfig& cfg) {
  if (position_distance(a, goal) >= cfg.pos_tol) return false;
  return cfg.task == TaskMode::position ||
         orientation_distance(a, goal) < cfg.ori_tol;
}

/// Screw-interpolating local planner: repeatedly interpolates from the
/// current (re-anchored) pose toward the goal with parameter tau, resolves
/// the step with the contact LCP, and stops when the goal is reached or
/// progress stays below stall_tol for stall_window consecutive steps.
inline PathResult local_plan(const PoseVector& start, const PoseVector& goal,
                             const JointVector& theta_start,
                             const KinematicChain& chain,
                             std::span<const Obstacle> obstacles,
                             const PlannerConfig& cfg,
                             const StepObserver& observer = {}) {
  cfg.validate();
  check_dimension(chain, theta_start);
  const PoseVector fk_start = forward_kinematics(chain, theta_start);
  if (position_distance(fk_start, start) > 1e-6 ||
      (cfg.task == TaskMode::full &&
       orientation_distance(fk_start, start) > 1e-6)) {
    throw InvalidInput("local_plan: FK(theta_start) does not match the start pose");
  }
  PathResult res;
  res.push(theta_start, fk_start, fk_start, {}, Eigen::VectorXd());
  res.final_pos_distance = position_distance(fk_start, goal);
  res.final_ori_distance = orientation_distance(fk_start, goal);
  if (goal_reached(fk_start, goal, cfg)) {
    res.status = PlanStatus::reached;
    return res;
  }
  const UnitDualQuaternion dq_goal = pose_to_dq(goal);
  PoseVector gamma_old = fk_start;
  JointVector theta_old = theta_start;
  int stall = 0;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    UnitDualQuaternion goal_dq = dq_goal;
    if (cfg.task == TaskMode::position) {
      goal_dq = pose_to_dq(PoseVector{goal.p, gamma_old.Q});
    }
    const PoseVector target =
        dq_to_pose(sclerp(pose_to_dq(gamma_old), goal_dq, cfg.tau));
    StepResult step;
    try {
      step = step_state(theta_old, gamma_old, target, chain, obstacles, cfg);
    } catch (const StepFailure& e) {
      res.status = PlanStatus::failed;
      res.message = e.what();
      return res;
    }
    if (observer) observer(iter, target, step);
    const PoseVector gamma_new = forward_kinematics(chain, step.theta);
    res.flag_joints(step.clamped);
    res.push(step.theta, gamma_new, target, step.contacts, step.vc);
    res.iterations = iter;
    res.final_pos_distance = position_distance(gamma_new, goal);
    res.final_ori_distance = orientation_distance(gamma_new, goal);
    if (goal_reached(gamma_new, goal, cfg)) {
      res.status = PlanStatus::reached;
      return res;
    }
    const bool no_progress =
        position_distance(gamma_new, gamma_old) < cfg.stall_tol &&
        (cfg.task == TaskMode::position ||
         orientation_distance(gamma_new, gamma_old) < cfg.stall_tol);
    stall = no_progress ? stall + 1 : 0;
    if (stall >= cfg.stall_window) {
      res.status = PlanStatus::stalled;
      return res;
    }
    gamma_old = gamma_new;
    theta_old = step.theta;
  }
  res.status = PlanStatus::iteration_limit;
  return res;
}

// ---------------------------------------------------------------------------
// Point robot.

using Vec2 = Eigen::Vector2d;

/// An XY gantry whose only colliding link is a point: joint vector = (x, y), and the
/// end effector sits at (x, y, 0) with identity orientation.
inline KinematicChain point_robot_chain() {
  KinematicChain c;
  constexpr double kBig = 1e9;
  c.joints = {Joint{JointType::prismatic, Vec3::UnitX(), Vec3::Zero(), -kBig, kBig},
              Joint{JointType::prismatic, Vec3::UnitY(), Vec3::Zero(), -kBig, kBig}};
  c.links = {LinkGeometry{Vec3::Zero(), Vec3::Zero(), 0.0},
             LinkGeometry{Vec3::Zero(), Vec3::Zero(), 0.0}};
  c.passive_links = {0};  // the x carriage
  return c;
}

/// Planar point robot X^{t+h} = X^t + h u^t + h^2 N v with the input
/// u = K_p (X_G - X) / (h |X_G - X|), capped so that one free step never
/// passes the goal. Only the nearest obstacle enters the LCP.
inline PathResult point_robot_plan(const Vec2& start, const Vec2& goal,
                                   std::span<const Obstacle> obstacles,
                                   const PlannerConfig& cfg, double k_p = 1.0,
                                   const StepObserver& observer = {}) {
  cfg.validate();
  if (!(k_p > 0.0)) throw InvalidInput("point_robot_plan: K_p must be positive");
  const KinematicChain chain = point_robot_chain();
  auto pose_of = [](const Vec2& x) {
    return PoseVector{Vec3(x.x(), x.y(), 0.0), UnitQuaternion()};
  };
  PathResult res;
  res.push(start, pose_of(start), pose_of(start), {}, Eigen::VectorXd());
  res.final_pos_distance = (goal - start).norm();
  if (res.final_pos_distance < cfg.pos_tol) {
    res.status = PlanStatus::reached;
    return res;
  }
  Matrix6X Jc = Matrix6X::Zero(6, 2);
  Jc.block<2, 2>(0, 0).setIdentity();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2, 7);
  B.block<2, 2>(0, 0).setIdentity();
  const double h = cfg.h;
  Vec2 x = start;
  int stall = 0;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const Vec2 d = goal - x;
    const double dist = d.norm();
    const Vec2 u = (k_p >= dist ? d : Vec2(k_p * d / dist)) / h;
    StepResult step;
    std::vector<ContactInfo> all =
        detect_contacts(chain, JointVector(x), obstacles, cfg.activation_radius());
    Vec2 next = x + h * u;
    if (!all.empty()) {
      step.contacts = {all.front()};
      Eigen::VectorXd tv = Eigen::VectorXd::Zero(7);
      tv.head<2>() = u;
      const std::vector<Matrix6X> jcs = {Jc};
      step.diag.had_lcp = true;
      step.diag.problem = assemble_step_lcp(B, tv, step.contacts, jcs, h,
                                            cfg.eps, 0.0);
      step.diag.solution = solve_lcp(step.diag.problem);
      step.diag.lcp_status = step.diag.solution.status;
      step.vc = step.diag.solution.z;
      const Vec3& nrm = step.contacts.front().normal;
      next += h * h * step.vc(0) * Vec2(nrm.x(), nrm.y());
      step.diag.min_linearized_surplus = step.diag.solution.w(0);
    } else {
      step.vc = Eigen::VectorXd();
    }
    step.theta = next;
    const PoseVector target = pose_of(x + h * u);
    if (observer) observer(iter, target, step);
    res.push(next, pose_of(next), target, step.contacts, step.vc);
    res.iterations = iter;
    res.final_pos_distance = (goal - next).norm();
    if (res.final_pos_distance < cfg.pos_tol) {
      res.status = PlanStatus::reached;
      return res;
    }
    stall = (next - x).norm() < cfg.stall_tol ? stall + 1 : 0;
    if (stall >= cfg.stall_window) {
      res.status = PlanStatus::stalled;
      return res;
    }
    x = next;
  }
  res.status = PlanStatus::iteration_limit;
  return res;
}

}  // namespace screwplan

#endif  // SCREWPLAN_PLANNER_HPP_
