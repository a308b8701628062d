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

/// \file kinematics.hpp
/// \brief Serial-chain forward kinematics and the Jacobians used by the
/// resolved-rate step.
///
/// A chain is a list of joints. Joint k sits at `origin` in the frame of link
/// k-1 (the base for k = 0) and moves about/along `axis`, expressed in that
/// same frame. Link k is rigidly attached to the frame after joint k.
///
/// Velocities use the base-frame convention V = [v; w]: v is the velocity of
/// the reference point (the end effector, or a contact witness) and w the
/// angular velocity, both in base coordinates. The representation Jacobian
/// J_r is derived for that convention, so V = J * dTheta = J_r * dgamma.

#ifndef SCREWPLAN_KINEMATICS_HPP_
#define SCREWPLAN_KINEMATICS_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "screwplan/dualquat.hpp"
#include "screwplan/error.hpp"
#include "screwplan/geometry.hpp"

namespace screwplan {

using JointVector = Eigen::VectorXd;
using Matrix6X = Eigen::Matrix<double, 6, Eigen::Dynamic>;
using Matrix67 = Eigen::Matrix<double, 6, 7>;

enum class JointType { revolute, prismatic };

struct Joint {
  JointType type = JointType::revolute;
  Vec3 axis = Vec3::UnitZ();
  Vec3 origin = Vec3::Zero();
  double lower = -M_PI;
  double upper = M_PI;
  bool operator==(const Joint&) const = default;
};

struct KinematicChain {
  std::vector<Joint> joints;
  std::vector<LinkGeometry> links;
  PoseVector base;
  PoseVector ee_offset;
  /// Links without collision geometry, e.g. the carriage of a gantry.
  std::vector<int> passive_links;

  int dof() const { return static_cast<int>(joints.size()); }

  bool collides(int link) const {
    return std::find(passive_links.begin(), passive_links.end(), link) ==
           passive_links.end();
  }

  void validate() const {
    if (links.size() != joints.size()) {
      throw InvalidInput("chain: number of links (" +
                         std::to_string(links.size()) +
                         ") differs from number of joints (" +
                         std::to_string(joints.size()) + ")");
    }
    for (std::size_t k = 0; k < joints.size(); ++k) {
      const Joint& j = joints[k];
      if (std::abs(j.axis.norm() - 1.0) > 1e-6) {
        throw InvalidInput("chain: axis of joint " + std::to_string(k) +
                           " is not unit length");
      }
      if (!(j.lower <= j.upper)) {
        throw InvalidInput("chain: joint " + std::to_string(k) +
                           " has lower limit above upper limit");
      }
      if (!(links[k].radius >= 0.0)) {
        throw InvalidInput("chain: link " + std::to_string(k) +
                           " has negative radius");
      }
    }
    for (int k : passive_links) {
      if (k < 0 || k >= dof()) {
        throw InvalidInput("chain: passive link index " + std::to_string(k) +
                           " out of range");
      }
    }
  }

  bool operator==(const KinematicChain&) const = default;
};

inline void check_dimension(const KinematicChain& chain,
                            const JointVector& theta) {
  if (theta.size() != chain.dof()) {
    throw InvalidInput("joint vector has " + std::to_string(theta.size()) +
                       " entries, chain has " + std::to_string(chain.dof()) +
                       " joints");
  }
}

inline Eigen::Isometry3d to_isometry(const PoseVector& p) {
  Eigen::Isometry3d T = Eigen::Isometry3d::Identity();
  T.linear() = p.Q.rotation_matrix();
  T.translation() = p.p;
  return T;
}

inline PoseVector to_pose(const Eigen::Isometry3d& T) {
  return {T.translation(),
          UnitQuaternion::from_rotation_matrix(T.linear()).canonical()};
}

/// World-frame quantities of one configuration.
struct ChainState {
  std::vector<Eigen::Isometry3d> link_frames;  // one per link
  std::vector<Vec3> joint_axes;                // world axis of each joint
  std::vector<Vec3> joint_origins;             // world point on each axis
  Eigen::Isometry3d ee = Eigen::Isometry3d::Identity();
};

inline ChainState chain_state(const KinematicChain& chain,
                              const JointVector& theta) {
  check_dimension(chain, theta);
  ChainState s;
  const int n = chain.dof();
  s.link_frames.reserve(n);
  s.joint_axes.reserve(n);
  s.joint_origins.reserve(n);
  Eigen::Isometry3d T = to_isometry(chain.base);
  for (int k = 0; k < n; ++k) {
    const Joint& j = chain.joints[k];
    T.translate(j.origin);
    s.joint_axes.push_back(T.linear() * j.axis);
    s.joint_origins.push_back(T.translation());
    if (j.type == JointType::revolute) {
      T.rotate(Eigen::AngleAxisd(theta(k), j.axis));
    } else {
      T.translate(theta(k) * j.axis);
    }
    s.link_frames.push_back(T);
  }
  s.ee = T * to_isometry(chain.ee_offset);
  return s;
}

inline PoseVector forward_kinematics(const KinematicChain& chain,
                                     const JointVector& theta) {
  return to_pose(chain_state(chain, theta).ee);
}

/// One pose per link; a zero-DoF chain returns the base pose alone.
inline std::vector<PoseVector> link_frames(const KinematicChain& chain,
                                           const JointVector& theta) {
  const ChainState s = chain_state(chain, theta);
  std::vector<PoseVector> out;
  if (s.link_frames.empty()) {
    out.push_back(chain.base);
    return out;
  }
  for (const auto& T : s.link_frames) out.push_back(to_pose(T));
  return out;
}

/// Columns 0..last_joint are the joint twists evaluated at `point`; the
/// remaining columns are zero.
inline Matrix6X point_jacobian(const ChainState& s, const KinematicChain& chain,
                               int last_joint, const Vec3& point) {
  const int n = chain.dof();
  Matrix6X J = Matrix6X::Zero(6, n);
  for (int k = 0; k <= last_joint && k < n; ++k) {
    const Vec3& z = s.joint_axes[k];
    if (chain.joints[k].type == JointType::revolute) {
      J.block<3, 1>(0, k) = z.cross(point - s.joint_origins[k]);
      J.block<3, 1>(3, k) = z;
    } else {
      J.block<3, 1>(0, k) = z;
    }
  }
  return J;
}

inline Matrix6X manipulator_jacobian(const KinematicChain& chain,
                                     const JointVector& theta) {
  const ChainState s = chain_state(chain, theta);
  return point_jacobian(s, chain, chain.dof() - 1, s.ee.translation());
}

/// Jacobian of a witness point rigidly attached to link `link_index`,
/// zero-padded to 6 x n.
inline Matrix6X contact_jacobian(const KinematicChain& chain,
                                 const JointVector& theta, int link_index,
                                 const Vec3& witness) {
  if (link_index < 0 || link_index >= chain.dof()) {
    throw InvalidInput("contact_jacobian: link index " +
                       std::to_string(link_index) + " out of range");
  }
  return point_jacobian(chain_state(chain, theta), chain, link_index, witness);
}

/// Maps dgamma = [dp; dQ] to V = [v; w] with w = 2 * vec(dQ (x) Q*).
inline Matrix67 representation_jacobian(const UnitQuaternion& Q) {
  const double w = Q.w(), x = Q.x(), y = Q.y(), z = Q.z();
  Matrix67 Jr = Matrix67::Zero();
  Jr.block<3, 3>(0, 0).setIdentity();
  Eigen::Matrix<double, 3, 4> E;
  E << -x, w, -z, y,  //
      -y, z, w, -x,   //
      -z, -y, x, w;
  Jr.block<3, 4>(3, 3) = 2.0 * E;
  return Jr;
}

inline constexpr double kPinvTruncation = 1e-10;

/// Damped Moore-Penrose inverse: sigma / (sigma^2 + lambda^2) on each
/// singular value. With lambda = 0, singular values below 1e-10 are dropped.
inline Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& A, double lambda) {
  if (A.size() == 0) return Eigen::MatrixXd::Zero(A.cols(), A.rows());
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::VectorXd inv(sv.size());
  const double l2 = lambda * lambda;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double s = sv(i);
    if (lambda == 0.0) {
      inv(i) = s > kPinvTruncation ? 1.0 / s : 0.0;
    } else {
      inv(i) = s / (s * s + l2);
    }
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// B = J^T (J J^T + lambda^2 I)^-1 J_r. Throws SingularityError when lambda
/// is zero and J J^T is not invertible.
inline Eigen::MatrixXd b_matrix(const Eigen::MatrixXd& J,
                                const Eigen::MatrixXd& Jr, double lambda) {
  if (J.rows() != Jr.rows()) {
    throw InvalidInput("b_matrix: J and J_r row counts differ");
  }
  const Eigen::MatrixXd JJt = J * J.transpose();
  const Eigen::MatrixXd A =
      JJt + lambda * lambda *
                Eigen::MatrixXd::Identity(J.rows(), J.rows());
  if (lambda == 0.0) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() < J.rows() || sv(sv.size() - 1) < kPinvTruncation) {
      throw SingularityError(
          "b_matrix: J J^T is singular and no damping was given");
    }
  }
  return J.transpose() * A.ldlt().solve(Jr);
}

/// Joint-space projector I - J^+ J onto the null space of J.
inline Eigen::MatrixXd nullspace_projector(const Eigen::MatrixXd& J,
                                           double lambda) {
  const Eigen::Index n = J.cols();
  return Eigen::MatrixXd::Identity(n, n) - pseudoinverse(J, lambda) * J;
}

struct ClampResult {
  JointVector theta;
  std::vector<int> clamped;  // 0-based joint indices
};

/// Componentwise clamp to [lower, upper]; boundaries are inclusive.
inline ClampResult joint_limit_clamp(const JointVector& theta,
                                     const KinematicChain& chain) {
  check_dimension(chain, theta);
  ClampResult out{theta, {}};
  for (int k = 0; k < chain.dof(); ++k) {
    const Joint& j = chain.joints[k];
    if (theta(k) > j.upper) {
      out.theta(k) = j.upper;
      out.clamped.push_back(k);
    } else if (theta(k) < j.lower) {
      out.theta(k) = j.lower;
      out.clamped.push_back(k);
    }
  }
  return out;
}

/// Task-space error [p_t - p; rotation vector of Q_t Q*] used by the IK.
inline Eigen::Matrix<double, 6, 1> pose_error(const PoseVector& current,
                                              const PoseVector& target) {
  Eigen::Matrix<double, 6, 1> e;
  e.head<3>() = target.p - current.p;
  Quaternion r = target.Q.value() * conj(current.Q.value());
  if (r.w < 0.0) r = -r;
  const double s = r.vec().norm();
  const double angle = 2.0 * std::atan2(s, r.w);
  e.tail<3>() = s > 1e-300 ? Vec3(r.vec() * (angle / s)) : Vec3::Zero();
  return e;
}

struct IkResult {
  JointVector theta;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

/// Damped-least-squares IK from a seed. Plumbing for scenario files that
/// give a start pose without a start configuration.
inline IkResult ik_solve(const KinematicChain& chain, const PoseVector& target,
                         const JointVector& seed, int max_iters = 1000,
                         double lambda = 0.05, double tol = 1e-10) {
  IkResult out{seed, false, 0, 0.0};
  for (int it = 0; it < max_iters; ++it) {
    const ChainState s = chain_state(chain, out.theta);
    const Eigen::Matrix<double, 6, 1> e = pose_error(to_pose(s.ee), target);
    out.residual = e.norm();
    out.iterations = it;
    if (out.residual < tol) {
      out.converged = true;
      return out;
    }
    const Matrix6X J =
        point_jacobian(s, chain, chain.dof() - 1, s.ee.translation());
    const Eigen::MatrixXd A =
        J * J.transpose() + lambda * lambda * Eigen::MatrixXd::Identity(6, 6);
    out.theta += J.transpose() * A.ldlt().solve(e);
    out.theta = joint_limit_clamp(out.theta, chain).theta;
  }
  return out;
}

}  // namespace screwplan

#endif  // SCREWPLAN_KINEMATICS_HPP_
