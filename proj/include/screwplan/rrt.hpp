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

/// \file rrt.hpp
/// \brief Task-space RRT whose extend step is the complementarity local
/// planner.

#ifndef SCREWPLAN_RRT_HPP_
#define SCREWPLAN_RRT_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "screwplan/planner.hpp"

namespace screwplan {

/// Task constraint carried by a segment. Held implicitly by screw
/// interpolation, verified on the output, and respected by RRT sampling.
enum class ConstraintTag { none, fixed_orientation, fixed_position };

inline const char* to_string(ConstraintTag t) {
  switch (t) {
    case ConstraintTag::none:
      return "none";
    case ConstraintTag::fixed_orientation:
      return "fixed-orientation";
    case ConstraintTag::fixed_position:
      return "fixed-position";
  }
  return "?";
}

struct Workspace {
  Vec3 min = Vec3::Constant(-1.0);
  Vec3 max = Vec3::Constant(1.0);
  bool operator==(const Workspace&) const = default;
};

struct RrtConfig {
  double goal_bias = 0.1;
  int max_nodes = 2000;
  std::uint64_t seed = 1;
  int extend_iters = 500;  // local_plan iteration cap per extension
  double w_ori = 0.5;      // length per radian in the nearest-node metric
  Workspace workspace;
  ConstraintTag constraint = ConstraintTag::none;

  void validate() const {
    if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) {
      throw InvalidInput("rrt config: goal_bias must lie in [0, 1]");
    }
    if (max_nodes < 1) throw InvalidInput("rrt config: max_nodes < 1");
    if (extend_iters < 1) throw InvalidInput("rrt config: extend_iters < 1");
    if (!(w_ori >= 0.0)) throw InvalidInput("rrt config: w_ori < 0");
    if (!(workspace.min.array() <= workspace.max.array()).all()) {
      throw InvalidInput("rrt config: workspace min > max");
    }
  }
};

struct RrtStats {
  int nodes = 1;       // including the root
  int samples = 0;
  int extensions = 0;  // local_plan calls
  bool success = false;
};

struct RrtResult {
  PathResult path;
  RrtStats stats;
};

namespace detail {

/// Uniform rotation (Shoemake's subgroup algorithm).
inline UnitQuaternion random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double u1 = u(rng);
  const double u2 = 2.0 * std::numbers::pi * u(rng);
  const double u3 = 2.0 * std::numbers::pi * u(rng);
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  return UnitQuaternion::normalized(Quaternion{a * std::cos(u2), a * std::sin(u2),
                                               b * std::cos(u3), b * std::sin(u3)});
}

struct RrtNode {
  PoseVector pose;
  JointVector theta;
  int parent = -1;
  PathResult edge;  // from the parent; empty for the root
};

}  // namespace detail

/// Weighted split metric: position distance plus w_ori times the
/// orientation geodesic angle.
inline double rrt_metric(const PoseVector& a, const PoseVector& b, double w_ori) {
  return position_distance(a, b) + w_ori * orientation_distance(a, b);
}

inline RrtResult rrt_plan(const PoseVector& start, const PoseVector& goal,
                          const JointVector& theta_start,
                          const KinematicChain& chain,
                          std::span<const Obstacle> obstacles,
                          const PlannerConfig& cfg, const RrtConfig& rrt) {
  cfg.validate();
  rrt.validate();
  PlannerConfig ext_cfg = cfg;
  ext_cfg.max_iters = rrt.extend_iters;

  std::vector<detail::RrtNode> tree;
  tree.push_back({forward_kinematics(chain, theta_start), theta_start, -1, {}});
  RrtResult out;
  const double w_ori = cfg.task == TaskMode::position ? 0.0 : rrt.w_ori;

  auto finish = [&](int leaf) {
    std::vector<int> chain_ids;
    for (int k = leaf; k >= 0; k = tree[k].parent) chain_ids.push_back(k);
    PathResult path;
    path.push(tree[0].theta, tree[0].pose, tree[0].pose, {}, Eigen::VectorXd());
    for (auto it = chain_ids.rbegin(); it != chain_ids.rend(); ++it) {
      if (tree[*it].parent >= 0) path.append(tree[*it].edge);
    }
    path.final_pos_distance = position_distance(path.pose_path.back(), goal);
    path.final_ori_distance = orientation_distance(path.pose_path.back(), goal);
    path.status = PlanStatus::reached;
    return path;
  };

  if (goal_reached(tree[0].pose, goal, cfg)) {
    out.stats.success = true;
    out.path = finish(0);
    return out;
  }

  std::mt19937_64 rng(rrt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int max_samples = 20 * rrt.max_nodes;
  while (static_cast<int>(tree.size()) < rrt.max_nodes &&
         out.stats.samples < max_samples) {
    ++out.stats.samples;
    PoseVector target = goal;
    if (unit(rng) >= rrt.goal_bias) {
      Vec3 p;
      for (int k = 0; k < 3; ++k) {
        p(k) = rrt.workspace.min(k) +
               unit(rng) * (rrt.workspace.max(k) - rrt.workspace.min(k));
      }
      const UnitQuaternion q = detail::random_rotation(rng);
      switch (rrt.constraint) {
        case ConstraintTag::none:
          target = {p, q};
          break;
        case ConstraintTag::fixed_orientation:
          target = {p, start.Q};
          break;
        case ConstraintTag::fixed_position:
          target = {start.p, q};
          break;
      }
    }
    int nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < tree.size(); ++k) {
      const double d = rrt_metric(tree[k].pose, target, w_ori);
      if (d < best) {
        best = d;
        nearest = static_cast<int>(k);
      }
    }
    ++out.stats.extensions;
    PathResult edge = local_plan(tree[nearest].pose, target, tree[nearest].theta,
                                 chain, obstacles, ext_cfg);
    if (edge.size() < 2) continue;
    const PoseVector end = edge.pose_path.back();
    if (rrt_metric(end, tree[nearest].pose, w_ori) < cfg.pos_tol) continue;
    JointVector theta_end = edge.joint_path.back();
    tree.push_back({end, std::move(theta_end), nearest, std::move(edge)});
    out.stats.nodes = static_cast<int>(tree.size());
    if (goal_reached(end, goal, cfg)) {
      out.stats.success = true;
      out.path = finish(static_cast<int>(tree.size()) - 1);
      out.path.iterations = out.stats.extensions;
      return out;
    }
  }
  // Report the node closest to the goal as a partial path.
  int closest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tree.size(); ++k) {
    const double d = rrt_metric(tree[k].pose, goal, w_ori);
    if (d < best) {
      best = d;
      closest = static_cast<int>(k);
    }
  }
  out.path = finish(closest);
  out.path.status = PlanStatus::failed;
  out.path.iterations = out.stats.extensions;
  out.path.message = "rrt: node budget exhausted after " +
                     std::to_string(out.stats.nodes) + " nodes";
  return out;
}

}  // namespace screwplan

#endif  // SCREWPLAN_RRT_HPP_
