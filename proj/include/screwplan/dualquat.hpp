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

/// \file dualquat.hpp
/// \brief Quaternions, unit dual quaternions and screw linear interpolation.
///
/// A rigid transform (R, t) is encoded as the unit dual quaternion
/// r + eps * (1/2) t (x) r, where r is the unit quaternion of R and t is the
/// pure quaternion (0, t). Two dual quaternions that differ only in sign
/// encode the same transform.

#ifndef SCREWPLAN_DUALQUAT_HPP_
#define SCREWPLAN_DUALQUAT_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "screwplan/error.hpp"

namespace screwplan {

using Vec3 = Eigen::Vector3d;
using Vec7 = Eigen::Matrix<double, 7, 1>;

/// Plain (not necessarily unit) quaternion, Hamilton convention.
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Quaternion from_parts(double w, const Vec3& v) {
    return {w, v.x(), v.y(), v.z()};
  }
  static Quaternion pure(const Vec3& v) { return from_parts(0.0, v); }
  static Quaternion zero() { return {0.0, 0.0, 0.0, 0.0}; }

  Vec3 vec() const { return {x, y, z}; }
  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  bool operator==(const Quaternion&) const = default;
};

inline Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}
inline Quaternion operator+(const Quaternion& a, const Quaternion& b) {
  return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
}
inline Quaternion operator-(const Quaternion& a, const Quaternion& b) {
  return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
}
inline Quaternion operator-(const Quaternion& a) {
  return {-a.w, -a.x, -a.y, -a.z};
}
inline Quaternion operator*(double s, const Quaternion& a) {
  return {s * a.w, s * a.x, s * a.y, s * a.z};
}
inline Quaternion conj(const Quaternion& a) { return {a.w, -a.x, -a.y, -a.z}; }
inline double dot(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Quaternion with unit norm. Construction normalizes; `checked` first
/// rejects inputs that are too far from unit norm to be a rounding artifact.
class UnitQuaternion {
 public:
  UnitQuaternion() = default;

  static UnitQuaternion checked(const Quaternion& q, double tol = 1e-6) {
    const double n = q.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > tol) {
      std::ostringstream msg;
      msg << "quaternion norm " << n << " deviates from 1 by more than "
          << tol;
      throw InvalidInput(msg.str());
    }
    // Inputs that are unit to rounding are kept bit-exact.
    if (std::abs(n - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) {
      return UnitQuaternion(q);
    }
    return UnitQuaternion((1.0 / n) * q);
  }

  static UnitQuaternion normalized(const Quaternion& q) {
    const double n = q.norm();
    if (!(n > 1e-300) || !std::isfinite(n)) {
      throw InvalidInput("cannot normalize a zero or non-finite quaternion");
    }
    return UnitQuaternion((1.0 / n) * q);
  }

  static UnitQuaternion from_axis_angle(const Vec3& axis, double angle) {
    const double n = axis.norm();
    if (!(n > 0.0)) throw InvalidInput("rotation axis has zero length");
    const Vec3 u = axis / n;
    return normalized(Quaternion::from_parts(std::cos(0.5 * angle),
                                             std::sin(0.5 * angle) * u));
  }

  static UnitQuaternion from_rotation_matrix(const Eigen::Matrix3d& R) {
    const Eigen::Quaterniond e(R);
    return normalized({e.w(), e.x(), e.y(), e.z()});
  }

  const Quaternion& value() const { return q_; }
  double w() const { return q_.w; }
  double x() const { return q_.x; }
  double y() const { return q_.y; }
  double z() const { return q_.z; }

  /// Same rotation with w >= 0.
  UnitQuaternion canonical() const {
    return q_.w < 0.0 ? UnitQuaternion(-q_) : *this;
  }

  Eigen::Matrix3d rotation_matrix() const {
    return Eigen::Quaterniond(q_.w, q_.x, q_.y, q_.z).toRotationMatrix();
  }

  Vec3 rotate(const Vec3& v) const {
    return (q_ * Quaternion::pure(v) * conj(q_)).vec();
  }

  bool operator==(const UnitQuaternion&) const = default;

 private:
  explicit UnitQuaternion(const Quaternion& q) : q_(q) {}
  Quaternion q_;
};

/// The 7-vector pose gamma = [p; Q] with Q stored (w, x, y, z).
struct PoseVector {
  Vec3 p = Vec3::Zero();
  UnitQuaternion Q;

  Vec7 gamma() const {
    Vec7 g;
    g << p, Q.w(), Q.x(), Q.y(), Q.z();
    return g;
  }

  static PoseVector from_gamma(const Vec7& g, double tol = 1e-6) {
    return {g.head<3>(), UnitQuaternion::checked({g(3), g(4), g(5), g(6)}, tol)};
  }

  bool operator==(const PoseVector&) const = default;
};

/// Screw-axis decomposition of a rigid displacement: a rotation by `theta`
/// about the line {direction, moment} combined with a translation `d` along
/// it. For pure translations `moment` is zero and `direction` is the
/// translation direction.
struct ScrewParameters {
  Vec3 direction = Vec3::UnitZ();
  Vec3 moment = Vec3::Zero();
  double theta = 0.0;
  double d = 0.0;
};

class UnitDualQuaternion {
 public:
  UnitDualQuaternion() : real_{}, dual_(Quaternion::zero()) {}

  /// Validates the unit and orthogonality conditions to `tol`, then projects
  /// the result exactly onto the unit dual quaternions.
  static UnitDualQuaternion from_parts(const Quaternion& real,
                                       const Quaternion& dual,
                                       double tol = 1e-6) {
    const double n = real.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > tol) {
      throw InvalidInput("dual quaternion real part is not unit norm");
    }
    if (!std::isfinite(dual.norm()) || std::abs(dot(real, dual)) > tol) {
      throw InvalidInput(
          "dual quaternion real and dual parts are not orthogonal");
    }
    return renormalized(real, dual);
  }

  static UnitDualQuaternion translation(const Vec3& t) {
    return renormalized(Quaternion{}, 0.5 * Quaternion::pure(t));
  }

  static UnitDualQuaternion rotation(const UnitQuaternion& r) {
    return renormalized(r.value(), Quaternion::zero());
  }

  const Quaternion& real() const { return real_; }
  const Quaternion& dual() const { return dual_; }

  UnitDualQuaternion operator-() const {
    UnitDualQuaternion out;
    out.real_ = -real_;
    out.dual_ = -dual_;
    return out;
  }

  /// r <- r/|r|, d <- d/|r| minus its component along r.
  static UnitDualQuaternion renormalized(const Quaternion& r,
                                         const Quaternion& d) {
    const double n = r.norm();
    UnitDualQuaternion out;
    out.real_ = (1.0 / n) * r;
    const Quaternion dn = (1.0 / n) * d;
    out.dual_ = dn - dot(out.real_, dn) * out.real_;
    return out;
  }

 private:
  Quaternion real_;
  Quaternion dual_;
};

// ---------------------------------------------------------------------------
// Conversions.

inline UnitDualQuaternion pose_to_dq(const PoseVector& pose) {
  const Quaternion& r = pose.Q.value();
  return UnitDualQuaternion::renormalized(r,
                                          0.5 * (Quaternion::pure(pose.p) * r));
}

/// Raw 7-vector overload; rejects orientations that are not unit norm.
inline UnitDualQuaternion pose_to_dq(const Vec7& gamma) {
  return pose_to_dq(PoseVector::from_gamma(gamma));
}

inline PoseVector dq_to_pose(const UnitDualQuaternion& dq) {
  const Vec3 p = 2.0 * (dq.dual() * conj(dq.real())).vec();
  return {p, UnitQuaternion::normalized(dq.real()).canonical()};
}

// ---------------------------------------------------------------------------
// Algebra.

inline UnitDualQuaternion dq_multiply(const UnitDualQuaternion& a,
                                      const UnitDualQuaternion& b) {
  return UnitDualQuaternion::renormalized(
      a.real() * b.real(), a.real() * b.dual() + a.dual() * b.real());
}

inline UnitDualQuaternion operator*(const UnitDualQuaternion& a,
                                    const UnitDualQuaternion& b) {
  return dq_multiply(a, b);
}

inline UnitDualQuaternion dq_conjugate(const UnitDualQuaternion& a) {
  return UnitDualQuaternion::renormalized(conj(a.real()), conj(a.dual()));
}

/// True when a and b encode the same rigid transform (either sign).
inline bool same_transform(const UnitDualQuaternion& a,
                           const UnitDualQuaternion& b, double tol) {
  auto close = [tol](const Quaternion& u, const Quaternion& v) {
    return (u - v).norm() <= tol;
  };
  return (close(a.real(), b.real()) && close(a.dual(), b.dual())) ||
         (close(a.real(), -b.real()) && close(a.dual(), -b.dual()));
}

inline constexpr double kScrewAngleEps = 1e-10;
inline constexpr double kScrewIdentityEps = 1e-12;

/// theta is returned in [0, pi]; the sign of dq is canonicalized first.
inline ScrewParameters screw_parameters(const UnitDualQuaternion& dq) {
  Quaternion r = dq.real();
  Quaternion d = dq.dual();
  if (r.w < 0.0) {
    r = -r;
    d = -d;
  }
  const double s = r.vec().norm();  // sin(theta/2)
  const double theta = 2.0 * std::atan2(s, r.w);
  ScrewParameters out;
  if (theta < kScrewAngleEps) {
    const Vec3 t = 2.0 * (d * conj(r)).vec();
    const double tn = t.norm();
    if (tn < kScrewIdentityEps) return out;
    out.direction = t / tn;
    out.d = tn;
    return out;
  }
  const Vec3 l = r.vec() / s;
  out.direction = l;
  out.theta = theta;
  out.d = -2.0 * d.w / s;
  out.moment = (d.vec() - 0.5 * out.d * r.w * l) / s;
  return out;
}

inline UnitDualQuaternion dq_from_screw(const ScrewParameters& sp) {
  const double c = std::cos(0.5 * sp.theta);
  const double s = std::sin(0.5 * sp.theta);
  const Quaternion real = Quaternion::from_parts(c, s * sp.direction);
  const Quaternion dual = Quaternion::from_parts(
      -0.5 * sp.d * s, s * sp.moment + 0.5 * sp.d * c * sp.direction);
  return UnitDualQuaternion::renormalized(real, dual);
}

/// Scales the screw displacement (theta, d) by tau about the same axis.
inline UnitDualQuaternion dq_power(const UnitDualQuaternion& dq, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw InvalidInput("dq_power: tau must lie in [0, 1]");
  }
  ScrewParameters sp = screw_parameters(dq);
  sp.theta *= tau;
  sp.d *= tau;
  return dq_from_screw(sp);
}

/// Screw linear interpolation C(tau) = a (x) (a* (x) b)^tau along the short
/// screw: b is negated first when the real parts point into opposite
/// hemispheres.
inline UnitDualQuaternion sclerp(const UnitDualQuaternion& a,
                                 const UnitDualQuaternion& b, double tau) {
  const UnitDualQuaternion bb = dot(a.real(), b.real()) < 0.0 ? -b : b;
  return a * dq_power(dq_conjugate(a) * bb, tau);
}

// ---------------------------------------------------------------------------
// Split pose metric used by the planner's termination tests.

inline double position_distance(const PoseVector& a, const PoseVector& b) {
  return (a.p - b.p).norm();
}

/// Geodesic angle between two orientations, in [0, pi].
inline double orientation_distance(const UnitQuaternion& a,
                                   const UnitQuaternion& b) {
  const Quaternion r = conj(a.value()) * b.value();
  return 2.0 * std::atan2(r.vec().norm(), std::abs(r.w));
}

inline double orientation_distance(const PoseVector& a, const PoseVector& b) {
  return orientation_distance(a.Q, b.Q);
}

}  // namespace screwplan

#endif  // SCREWPLAN_DUALQUAT_HPP_
