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

// Plans a three-link planar arm around a sphere using only the core headers:
// no scenario file, no output files.

#include <algorithm>
#include <cstdio>
#include <vector>

#include "screwplan/planner.hpp"

int main() {
  using namespace screwplan;

  KinematicChain arm;
  for (int k = 0; k < 3; ++k) {
    Joint j;  // revolute about z
    j.origin = k == 0 ? Vec3::Zero() : Vec3(1, 0, 0);
    arm.joints.push_back(j);
    arm.links.push_back({Vec3::Zero(), Vec3(1, 0, 0), 0.05});
  }
  arm.ee_offset.p = Vec3(1, 0, 0);

  const std::vector<Obstacle> obstacles = {{"ball", Sphere{Vec3(1.4, 1.6, 0), 0.2}}};

  PlannerConfig cfg;
  cfg.task = TaskMode::position;  // a planar arm cannot hold a 3-D orientation

  const JointVector theta = Eigen::Vector3d(0.0, 0.3, 0.3);
  const PoseVector start = forward_kinematics(arm, theta);
  PoseVector goal = start;
  goal.p = Vec3(-0.5, 2.5, 0);

  const PathResult path = local_plan(start, goal, theta, arm, obstacles, cfg);

  double closest = 1e300;
  for (const JointVector& t : path.joint_path) {
    closest = std::min(closest, min_clearance(arm, t, obstacles));
  }
  std::printf("%s after %d iterations, %zu waypoints\n", to_string(path.status),
              path.iterations, path.size());
  std::printf("final tip (%.4f, %.4f), closest approach %.4f (eps %.3f)\n",
              path.pose_path.back().p.x(), path.pose_path.back().p.y(), closest,
              cfg.eps);
  return path.status == PlanStatus::reached ? 0 : 1;
}
