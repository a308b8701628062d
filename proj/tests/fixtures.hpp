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

// Random problem generators shared by the unit and acceptance tests.

#ifndef SCREWPLAN_TESTS_FIXTURES_HPP_
#define SCREWPLAN_TESTS_FIXTURES_HPP_

#include <random>
#include <vector>

#include "oracles.hpp"
#include "screwplan/kinematics.hpp"
#include "screwplan/lcp.hpp"

namespace fixture {

using namespace screwplan;

inline bool full_row_rank(const Matrix6X& J) {
  if (J.cols() < 6) return false;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  return svd.singularValues()(5) > 1e-3 * svd.singularValues()(0);
}

/// A step LCP built from a random chain, configuration, task increment and
/// 1..max_contacts random contacts (random link, witness near the link,
/// random normal and clearance). With `full_rank`, every contact Jacobian
/// has full row rank: revolute chains of 6..8 joints, contacts on links with
/// at least six joints upstream, same link for all contacts.
inline LcpProblem random_step_lcp(std::mt19937_64& rng, int max_contacts = 4,
                                  double h = 0.01, double eps = 0.01,
                                  bool full_rank = false, int exact_contacts = 0) {
  const KinematicChain c = full_rank ? oracle::random_chain(rng, 6, 8, 0.0)
                                     : oracle::random_chain(rng, 2, 8);
  const int n = c.dof();
  const int shared_link = std::uniform_int_distribution<int>(5, std::max(5, n - 1))(rng);
  JointVector t = oracle::random_joints(rng, n);
  // Rank does not depend on the witness point (an adjoint shift).
  while (full_rank &&
         !full_row_rank(point_jacobian(chain_state(c, t), c, shared_link, Vec3::Zero()))) {
    t = oracle::random_joints(rng, n);
  }
  const ChainState s = chain_state(c, t);
  const Matrix6X J = point_jacobian(s, c, n - 1, s.ee.translation());
  const PoseVector pose = to_pose(s.ee);
  const Eigen::MatrixXd B = b_matrix(J, representation_jacobian(pose.Q), 1e-6);
  Vec7 dgamma;
  for (int k = 0; k < 7; ++k) dgamma(k) = oracle::uniform(rng, -0.05, 0.05);
  const int nc = exact_contacts > 0
                     ? exact_contacts
                     : std::uniform_int_distribution<int>(1, max_contacts)(rng);
  std::vector<ContactInfo> cs;
  std::vector<Matrix6X> jcs;
  for (int i = 0; i < nc; ++i) {
    ContactInfo ci;
    ci.link_index = full_rank ? shared_link
                              : std::uniform_int_distribution<int>(0, n - 1)(rng);
    ci.psi = oracle::uniform(rng, -0.01, 0.05);
    ci.normal = oracle::random_unit(rng);
    ci.witness = s.link_frames[ci.link_index].translation() +
                 Vec3(oracle::uniform(rng, -0.3, 0.3), oracle::uniform(rng, -0.3, 0.3),
                      oracle::uniform(rng, -0.3, 0.3));
    ci.obstacle_id = "o" + std::to_string(i);
    cs.push_back(ci);
  }
  std::sort(cs.begin(), cs.end(),
            [](const ContactInfo& a, const ContactInfo& b) { return a.psi < b.psi; });
  for (const ContactInfo& ci : cs) {
    jcs.push_back(point_jacobian(s, c, ci.link_index, ci.witness));
  }
  return assemble_step_lcp(B, dgamma / h, cs, jcs, h, eps, 0.0);
}

}  // namespace fixture

#endif  // SCREWPLAN_TESTS_FIXTURES_HPP_
