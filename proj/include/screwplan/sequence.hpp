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

#ifndef SCREWPLAN_SEQUENCE_HPP_
#define SCREWPLAN_SEQUENCE_HPP_

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "screwplan/planner.hpp"
#include "screwplan/rrt.hpp"

namespace screwplan {

enum class PlannerKind { local, rrt };

inline const char* to_string(PlannerKind k) {
  return k == PlannerKind::local ? "local" : "rrt";
}

struct Segment {
  PoseVector goal;
  ConstraintTag constraint = ConstraintTag::none;
  PlannerKind planner = PlannerKind::local;
  /// Unset: null-space for tagged segments, the configured mode otherwise.
  std::optional<ProjectionMode> mode;
  bool operator==(const Segment&) const = default;
};

/// Per-segment constraint audit. Deviations are measured against the pose
/// at the start of the segment; `first` and `last` index the combined path.
struct SegmentReport {
  ConstraintTag constraint = ConstraintTag::none;
  PlannerKind planner = PlannerKind::local;
  ProjectionMode mode = ProjectionMode::joint_space;
  PlanStatus status = PlanStatus::failed;
  std::size_t first = 0;
  std::size_t last = 0;
  double commanded_deviation = 0.0;
  double executed_deviation = 0.0;
  bool constraint_ok = true;
  std::optional<RrtStats> rrt;
};

struct SequenceResult {
  PathResult path;
  std::vector<SegmentReport> segments;
};

/// Commanded deviations must vanish to rounding; executed ones must stay
/// within the termination tolerance of the constrained quantity.
inline constexpr double kCommandedConstraintTol = 1e-9;

inline SegmentReport audit_segment(const PathResult& path, std::size_t first,
                                   std::size_t last, ConstraintTag tag,
                                   const PlannerConfig& cfg) {
  SegmentReport r;
  r.constraint = tag;
  r.first = first;
  r.last = last;
  if (tag == ConstraintTag::none) return r;
  const PoseVector& anchor = path.pose_path[first];
  auto deviation = [&](const PoseVector& p) {
    return tag == ConstraintTag::fixed_orientation
               ? orientation_distance(p, anchor)
               : position_distance(p, anchor);
  };
  for (std::size_t i = first + 1; i <= last; ++i) {
    r.commanded_deviation =
        std::max(r.commanded_deviation, deviation(path.commanded_path[i]));
    r.executed_deviation =
        std::max(r.executed_deviation, deviation(path.pose_path[i]));
  }
  const double exec_tol =
      tag == ConstraintTag::fixed_orientation ? cfg.ori_tol : cfg.pos_tol;
  r.constraint_ok = r.commanded_deviation <= kCommandedConstraintTol &&
                    r.executed_deviation <= exec_tol;
  return r;
}

/// Plans the segments in order, each from its predecessor's terminal joint
/// vector. A segment that does not reach its goal aborts the sequence with
/// the partial result.
inline SequenceResult plan_task_sequence(std::span<const Segment> segments,
                                         const JointVector& theta_start,
                                         const KinematicChain& chain,
                                         std::span<const Obstacle> obstacles,
                                         const PlannerConfig& cfg,
                                         const RrtConfig& rrt_cfg = {},
                                         const StepObserver& observer = {}) {
  SequenceResult out;
  out.path.status = PlanStatus::reached;
  if (segments.empty()) return out;
  check_dimension(chain, theta_start);
  JointVector theta = theta_start;
  for (const Segment& seg : segments) {
    PlannerConfig c = cfg;
    c.mode = seg.mode.value_or(seg.constraint == ConstraintTag::none
                                   ? cfg.mode
                                   : ProjectionMode::null_space);
    const PoseVector start = forward_kinematics(chain, theta);
    // The previous segment ends within tolerance of its goal, not on it, so
    // the tagged quantity of this goal is taken from the actual start.
    PoseVector goal = seg.goal;
    if (seg.constraint == ConstraintTag::fixed_orientation) goal.Q = start.Q;
    if (seg.constraint == ConstraintTag::fixed_position) goal.p = start.p;
    PathResult part;
    std::optional<RrtStats> stats;
    if (seg.planner == PlannerKind::rrt) {
      RrtConfig r = rrt_cfg;
      r.constraint = seg.constraint;
      RrtResult rr = rrt_plan(start, goal, theta, chain, obstacles, c, r);
      part = std::move(rr.path);
      stats = rr.stats;
    } else {
      part = local_plan(start, goal, theta, chain, obstacles, c, observer);
    }
    const std::size_t first =
        out.path.joint_path.empty() ? 0 : out.path.joint_path.size() - 1;
    if (out.path.joint_path.empty()) {
      out.path.push(part.joint_path[0], part.pose_path[0],
                    part.commanded_path[0], {}, Eigen::VectorXd());
    }
    out.path.append(part);
    SegmentReport rep = audit_segment(out.path, first,
                                      out.path.joint_path.size() - 1,
                                      seg.constraint, c);
    rep.planner = seg.planner;
    rep.mode = c.mode;
    rep.status = part.status;
    rep.rrt = stats;
    out.segments.push_back(rep);
    if (part.status != PlanStatus::reached) break;
    theta = out.path.joint_path.back();
  }
  return out;
}

}  // namespace screwplan

#endif  // SCREWPLAN_SEQUENCE_HPP_
