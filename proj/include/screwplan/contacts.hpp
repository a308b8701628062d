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

#ifndef SCREWPLAN_CONTACTS_HPP_
#define SCREWPLAN_CONTACTS_HPP_

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "screwplan/geometry.hpp"
#include "screwplan/kinematics.hpp"

namespace screwplan {

/// A virtual contact between one link and one obstacle.
struct ContactInfo {
  int link_index = 0;  // 0-based
  double psi = 0.0;
  Vec3 normal = Vec3::UnitX();  // from the obstacle toward the link
  Vec3 witness = Vec3::Zero();  // on the link surface, base frame
  Vec3 obstacle_point = Vec3::Zero();
  std::string obstacle_id;
};

inline std::vector<Capsule> placed_links(const KinematicChain& chain,
                                         const ChainState& state) {
  std::vector<Capsule> out;
  out.reserve(chain.links.size());
  for (std::size_t k = 0; k < chain.links.size(); ++k) {
    out.push_back(place(chain.links[k], to_pose(state.link_frames[k])));
  }
  return out;
}

/// All (link, obstacle) pairs with psi < d_active, one minimum-distance
/// witness per pair, sorted by psi ascending (ties by link, then obstacle).
inline std::vector<ContactInfo> detect_contacts(const KinematicChain& chain,
                                                const ChainState& state,
                                                std::span<const Obstacle> obstacles,
                                                double d_active) {
  std::vector<ContactInfo> out;
  const std::vector<Capsule> links = placed_links(chain, state);
  for (std::size_t k = 0; k < links.size(); ++k) {
    if (!chain.collides(static_cast<int>(k))) continue;
    for (const Obstacle& o : obstacles) {
      const Proximity pr = signed_distance(links[k], o.shape);
      if (pr.psi < d_active) {
        out.push_back({static_cast<int>(k), pr.psi, pr.normal, pr.point_a,
                       pr.point_b, o.id});
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ContactInfo& a, const ContactInfo& b) {
                     return a.psi < b.psi;
                   });
  return out;
}

inline std::vector<ContactInfo> detect_contacts(const KinematicChain& chain,
                                                const JointVector& theta,
                                                std::span<const Obstacle> obstacles,
                                                double d_active) {
  return detect_contacts(chain, chain_state(chain, theta), obstacles,
                         d_active);
}

/// Smallest psi over every link/obstacle pair (+inf without obstacles).
inline double min_clearance(const KinematicChain& chain,
                            const JointVector& theta,
                            std::span<const Obstacle> obstacles) {
  double best = std::numeric_limits<double>::infinity();
  const std::vector<Capsule> links =
      placed_links(chain, chain_state(chain, theta));
  for (std::size_t k = 0; k < links.size(); ++k) {
    if (!chain.collides(static_cast<int>(k))) continue;
    for (const Obstacle& o : obstacles) {
      best = std::min(best, signed_distance(links[k], o.shape).psi);
    }
  }
  return best;
}

struct ClearanceReport {
  bool pass = true;
  std::vector<double> min_psi;  // per waypoint
  double overall_min = std::numeric_limits<double>::infinity();
  /// Largest (eps - psi) over waypoints and audit interpolates, or 0.
  double worst_violation = 0.0;
  std::optional<std::size_t> first_violation;  // index of the waypoint/step
};

/// Pass iff min psi >= eps - tol at every waypoint and at `substeps`
/// joint-space interpolates strictly inside each step.
inline ClearanceReport validate_clearance(const KinematicChain& chain,
                                          std::span<const JointVector> path,
                                          std::span<const Obstacle> obstacles,
                                          double eps, double tol,
                                          int substeps = 4) {
  ClearanceReport rep;
  rep.min_psi.reserve(path.size());
  auto record = [&](double psi, std::size_t index) {
    rep.overall_min = std::min(rep.overall_min, psi);
    rep.worst_violation = std::max(rep.worst_violation, eps - psi);
    if (psi < eps - tol && rep.pass) {
      rep.pass = false;
      rep.first_violation = index;
    }
  };
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) {
      for (int s = 1; s <= substeps; ++s) {
        const double a = static_cast<double>(s) / (substeps + 1);
        record(min_clearance(chain, (1.0 - a) * path[i - 1] + a * path[i],
                             obstacles),
               i);
      }
    }
    const double psi = min_clearance(chain, path[i], obstacles);
    rep.min_psi.push_back(psi);
    record(psi, i);
  }
  if (obstacles.empty()) rep.worst_violation = 0.0;
  return rep;
}

}  // namespace screwplan

#endif  // SCREWPLAN_CONTACTS_HPP_
