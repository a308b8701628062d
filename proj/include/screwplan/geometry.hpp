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

/// \file geometry.hpp
/// \brief Obstacle shapes, link capsules and signed distance queries.
///
/// Links are capsules (a segment swept by a radius). Obstacles are spheres,
/// walls (a segment with a thickness, i.e. a capsule of radius
/// thickness / 2), capsules and axis-aligned boxes. Planar scenes live in the
/// z = 0 plane.

#ifndef SCREWPLAN_GEOMETRY_HPP_
#define SCREWPLAN_GEOMETRY_HPP_

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <variant>

#include "screwplan/dualquat.hpp"
#include "screwplan/error.hpp"

namespace screwplan {

struct Sphere {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  bool operator==(const Sphere&) const = default;
};

struct Wall {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  double thickness = 0.0;
  bool operator==(const Wall&) const = default;
};

struct Capsule {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  double radius = 0.0;
  bool operator==(const Capsule&) const = default;
};

struct Box {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
  bool operator==(const Box&) const = default;
};

using Shape = std::variant<Sphere, Wall, Capsule, Box>;

struct Obstacle {
  std::string id;
  Shape shape;
  bool operator==(const Obstacle&) const = default;
};

/// Link shape in the link's local frame. A point robot is a single capsule
/// with a == b and radius 0.
using LinkGeometry = Capsule;

inline void validate(const Obstacle& o) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere> || std::is_same_v<T, Capsule>) {
          if (!(s.radius >= 0.0)) {
            throw InvalidInput("obstacle '" + o.id + "': negative radius");
          }
        } else if constexpr (std::is_same_v<T, Wall>) {
          if (!(s.thickness >= 0.0)) {
            throw InvalidInput("obstacle '" + o.id + "': negative thickness");
          }
        } else {
          if (!(s.min.array() <= s.max.array()).all()) {
            throw InvalidInput("obstacle '" + o.id + "': box min > max");
          }
        }
      },
      o.shape);
}

/// Result of a distance query between shape A (the link) and shape B.
/// `normal` points from B toward A; `point_a` and `point_b` are the witness
/// points on the two surfaces, so psi = normal . (point_a - point_b).
struct Proximity {
  double psi = 0.0;
  Vec3 normal = Vec3::UnitX();
  Vec3 point_a = Vec3::Zero();
  Vec3 point_b = Vec3::Zero();
};

namespace detail {

inline Vec3 closest_on_segment(const Vec3& a, const Vec3& b, const Vec3& p) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

/// Closest points between segments [p1, q1] and [p2, q2].
inline std::pair<Vec3, Vec3> closest_segment_segment(const Vec3& p1,
                                                     const Vec3& q1,
                                                     const Vec3& p2,
                                                     const Vec3& q2) {
  constexpr double kTiny = 1e-18;
  const Vec3 d1 = q1 - p1;
  const Vec3 d2 = q2 - p2;
  const Vec3 r = p1 - p2;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0;
  double t = 0.0;
  if (a <= kTiny && e <= kTiny) return {p1, p2};
  if (a <= kTiny) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= kTiny) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > kTiny * a * e ? std::clamp((b * f - c * e) / denom, 0.0, 1.0)
                                : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return {p1 + s * d1, p2 + t * d2};
}

/// Unit vector perpendicular to `v` (or +z if v is zero).
inline Vec3 any_perpendicular(const Vec3& v) {
  if (v.norm() < 1e-15) return Vec3::UnitZ();
  Vec3 c = v.cross(Vec3::UnitZ());
  if (c.norm() < 1e-9 * v.norm()) c = v.cross(Vec3::UnitX());
  return c.normalized();
}

/// Proximity between two "core" points with radii ra, rb. `fallback` is the
/// normal used when the cores coincide.
inline Proximity from_cores(const Vec3& ca, double ra, const Vec3& cb,
                            double rb, const Vec3& fallback) {
  const Vec3 diff = ca - cb;
  const double dist = diff.norm();
  Proximity out;
  out.normal = dist > 1e-15 ? Vec3(diff / dist) : fallback;
  out.psi = dist - ra - rb;
  out.point_a = ca - ra * out.normal;
  out.point_b = cb + rb * out.normal;
  return out;
}

struct BoxPointQuery {
  double sd;
  Vec3 surface;
  Vec3 normal;
};

inline BoxPointQuery box_point(const Box& box, const Vec3& p) {
  const Vec3 below = box.min - p;
  const Vec3 above = p - box.max;
  const Vec3 d = below.cwiseMax(above);
  if ((d.array() > 0.0).any()) {
    const Vec3 clamped = p.cwiseMax(box.min).cwiseMin(box.max);
    const Vec3 diff = p - clamped;
    const double n = diff.norm();
    return {n, clamped, diff / n};
  }
  int axis = 0;
  const double depth = d.maxCoeff(&axis);
  Vec3 normal = Vec3::Zero();
  Vec3 surface = p;
  if (above(axis) >= below(axis)) {
    normal(axis) = 1.0;
    surface(axis) = box.max(axis);
  } else {
    normal(axis) = -1.0;
    surface(axis) = box.min(axis);
  }
  return {depth, surface, normal};
}

}  // namespace detail

/// Signed distance between two capsules. Symmetric: swapping the arguments
/// flips the normal and keeps psi.
inline Proximity signed_distance(const Capsule& a, const Capsule& b) {
  const auto [ca, cb] = detail::closest_segment_segment(a.a, a.b, b.a, b.b);
  Vec3 fallback = (a.b - a.a).cross(b.b - b.a);
  fallback = fallback.norm() > 1e-15 ? Vec3(fallback.normalized())
                                     : detail::any_perpendicular(a.b - a.a);
  return detail::from_cores(ca, a.radius, cb, b.radius, fallback);
}

inline Proximity signed_distance(const Capsule& a, const Sphere& s) {
  const Vec3 ca = detail::closest_on_segment(a.a, a.b, s.center);
  return detail::from_cores(ca, a.radius, s.center, s.radius,
                            detail::any_perpendicular(a.b - a.a));
}

inline Proximity signed_distance(const Capsule& a, const Wall& w) {
  return signed_distance(a, Capsule{w.a, w.b, 0.5 * w.thickness});
}

/// Capsule versus box. The signed distance of a convex set is convex, so its
/// restriction to the capsule's core segment is minimized by golden-section
/// search.
inline Proximity signed_distance(const Capsule& a, const Box& box) {
  auto sd_at = [&](double t) {
    return detail::box_point(box, a.a + t * (a.b - a.a)).sd;
  };
  double lo = 0.0;
  double hi = 1.0;
  if ((a.b - a.a).squaredNorm() > 0.0) {
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = sd_at(x1);
    double f2 = sd_at(x2);
    for (int it = 0; it < 90 && hi - lo > 1e-15; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = sd_at(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = sd_at(x2);
      }
    }
  }
  double t = 0.5 * (lo + hi);
  for (double end : {0.0, 1.0}) {
    if (sd_at(end) < sd_at(t)) t = end;
  }
  const Vec3 core = a.a + t * (a.b - a.a);
  const detail::BoxPointQuery bq = detail::box_point(box, core);
  Proximity out;
  out.normal = bq.normal;
  out.psi = bq.sd - a.radius;
  out.point_a = core - a.radius * bq.normal;
  out.point_b = bq.surface;
  return out;
}

inline Proximity signed_distance(const Capsule& a, const Shape& obstacle) {
  return std::visit([&](const auto& s) { return signed_distance(a, s); },
                    obstacle);
}

/// Places a link-local capsule with a world frame given as a pose.
inline Capsule place(const LinkGeometry& g, const PoseVector& frame) {
  return {frame.p + frame.Q.rotate(g.a), frame.p + frame.Q.rotate(g.b),
          g.radius};
}

}  // namespace screwplan

#endif  // SCREWPLAN_GEOMETRY_HPP_
