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

/// \file svg.hpp
/// \brief Plain SVG plots of planned paths: a top view of the scene (x-y
/// plane) and line charts of the velocity time series.

#ifndef SCREWPLAN_SVG_HPP_
#define SCREWPLAN_SVG_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "screwplan/scenario.hpp"

namespace screwplan {

/// What the plots need from a path; buildable from a PathResult or from
/// the CSV files a run writes.
struct Trace {
  std::vector<JointVector> joints;
  std::vector<PoseVector> poses;
  std::vector<PoseVector> commanded;  // may be empty
  std::vector<double> sum_vc;         // per waypoint
};

inline Trace trace_of(const PathResult& p) {
  Trace t{p.joint_path, p.pose_path, p.commanded_path, {}};
  for (const Eigen::VectorXd& v : p.vc) t.sum_vc.push_back(v.size() ? v.sum() : 0.0);
  return t;
}

namespace detail {

inline double half_width(const Wall& w) { return 0.5 * w.thickness; }
inline double half_width(const Capsule& c) { return c.radius; }

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Frame {
  double x0, y0, x1, y1;  // world bounds
  double width = 640.0, height = 640.0, margin = 24.0;

  void include(double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  double scale() const {
    const double sx = (width - 2 * margin) / std::max(x1 - x0, 1e-9);
    const double sy = (height - 2 * margin) / std::max(y1 - y0, 1e-9);
    return std::min(sx, sy);
  }
  double px(double x) const { return margin + (x - x0) * scale(); }
  double py(double y) const { return height - margin - (y - y0) * scale(); }
};

inline bool is_planar(const Scenario& s, const Trace& t) {
  auto flat = [](const Vec3& v) { return std::abs(v.z()) < 1e-9; };
  for (const PoseVector& p : t.poses) {
    if (!flat(p.p)) return false;
  }
  for (const Obstacle& o : s.obstacles) {
    bool ok = true;
    std::visit(
        [&](const auto& sh) {
          using T = std::decay_t<decltype(sh)>;
          if constexpr (std::is_same_v<T, Sphere>) {
            ok = flat(sh.center);
          } else if constexpr (std::is_same_v<T, Box>) {
            ok = sh.min.z() <= 0.0 && sh.max.z() >= 0.0;
          } else {
            ok = flat(sh.a) && flat(sh.b);
          }
        },
        o.shape);
    if (!ok) return false;
  }
  return true;
}

}  // namespace detail

/// Top view: obstacles, start and goal markers, the end-effector path and,
/// for chains, an arm skeleton every `skeleton_every` waypoints (0: none).
/// Non-planar scenes are projected onto the x-y plane and say so.
inline std::string path_svg(const Scenario& s, const Trace& t,
                            const PoseVector& goal, int skeleton_every = 0) {
  detail::Frame f{std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
  for (const PoseVector& p : t.poses) f.include(p.p.x(), p.p.y());
  f.include(goal.p.x(), goal.p.y());
  for (const Obstacle& o : s.obstacles) {
    std::visit(
        [&](const auto& sh) {
          using T = std::decay_t<decltype(sh)>;
          if constexpr (std::is_same_v<T, Sphere>) {
            f.include(sh.center.x() - sh.radius, sh.center.y() - sh.radius);
            f.include(sh.center.x() + sh.radius, sh.center.y() + sh.radius);
          } else if constexpr (std::is_same_v<T, Box>) {
            f.include(sh.min.x(), sh.min.y());
            f.include(sh.max.x(), sh.max.y());
          } else {
            const double r = detail::half_width(sh);
            for (const Vec3& v : {sh.a, sh.b}) {
              f.include(v.x() - r, v.y() - r);
              f.include(v.x() + r, v.y() + r);
            }
          }
        },
        o.shape);
  }
  std::vector<std::vector<Vec3>> skeletons;
  if (!s.point_robot && skeleton_every > 0) {
    for (std::size_t i = 0; i < t.joints.size(); ++i) {
      if (i % static_cast<std::size_t>(skeleton_every) != 0 && i + 1 != t.joints.size()) {
        continue;
      }
      const ChainState st = chain_state(s.chain, t.joints[i]);
      std::vector<Vec3> pts;
      for (const Vec3& o : st.joint_origins) pts.push_back(o);
      pts.push_back(st.ee.translation());
      for (const Vec3& p : pts) f.include(p.x(), p.y());
      skeletons.push_back(std::move(pts));
    }
  }
  if (!std::isfinite(f.x0)) f = {-1.0, -1.0, 1.0, 1.0};
  const double pad = 0.05 * std::max({f.x1 - f.x0, f.y1 - f.y0, 1e-3});
  f.x0 -= pad;
  f.y0 -= pad;
  f.x1 += pad;
  f.y1 += pad;
  const double k = f.scale();
  using detail::num;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width
     << "\" height=\"" << f.height << "\" viewBox=\"0 0 " << f.width << " "
     << f.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<title>" << s.name << "</title>\n";
  if (!detail::is_planar(s, t)) {
    os << "<text x=\"8\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\" "
          "fill=\"#b00\">warning: 3D scene projected onto the x-y plane</text>\n";
  }
  os << "<g fill=\"#9aa5b1\" stroke=\"#52606d\" stroke-width=\"1\">\n";
  for (const Obstacle& o : s.obstacles) {
    std::visit(
        [&](const auto& sh) {
          using T = std::decay_t<decltype(sh)>;
          if constexpr (std::is_same_v<T, Sphere>) {
            os << "<circle cx=\"" << num(f.px(sh.center.x())) << "\" cy=\""
               << num(f.py(sh.center.y())) << "\" r=\"" << num(sh.radius * k)
               << "\"><title>" << o.id << "</title></circle>\n";
          } else if constexpr (std::is_same_v<T, Box>) {
            os << "<rect x=\"" << num(f.px(sh.min.x())) << "\" y=\""
               << num(f.py(sh.max.y())) << "\" width=\""
               << num((sh.max.x() - sh.min.x()) * k) << "\" height=\""
               << num((sh.max.y() - sh.min.y()) * k) << "\"><title>" << o.id
               << "</title></rect>\n";
          } else {
            const double r = detail::half_width(sh);
            os << "<line x1=\"" << num(f.px(sh.a.x())) << "\" y1=\""
               << num(f.py(sh.a.y())) << "\" x2=\"" << num(f.px(sh.b.x()))
               << "\" y2=\"" << num(f.py(sh.b.y()))
               << "\" stroke=\"#9aa5b1\" stroke-linecap=\"round\" stroke-width=\""
               << num(std::max(2 * r * k, 1.0)) << "\"><title>" << o.id
               << "</title></line>\n";
          }
        },
        o.shape);
  }
  os << "</g>\n";
  for (const auto& sk : skeletons) {
    os << "<polyline fill=\"none\" stroke=\"#3e4c59\" stroke-opacity=\"0.45\" "
          "stroke-width=\"2\" points=\"";
    for (const Vec3& p : sk) os << num(f.px(p.x())) << "," << num(f.py(p.y())) << " ";
    os << "\"/>\n";
  }
  if (!t.poses.empty()) {
    os << "<polyline fill=\"none\" stroke=\"#d64545\" stroke-width=\"2\" "
          "stroke-dasharray=\"6 3\" points=\"";
    for (const PoseVector& p : t.poses) {
      os << num(f.px(p.p.x())) << "," << num(f.py(p.p.y())) << " ";
    }
    os << "\"/>\n";
    const Vec3& a = t.poses.front().p;
    os << "<circle cx=\"" << num(f.px(a.x())) << "\" cy=\"" << num(f.py(a.y()))
       << "\" r=\"5\" fill=\"#2186eb\"><title>start</title></circle>\n";
  }
  os << "<circle cx=\"" << num(f.px(goal.p.x())) << "\" cy=\"" << num(f.py(goal.p.y()))
     << "\" r=\"5\" fill=\"#3ebd93\"><title>goal</title></circle>\n";
  os << "</svg>\n";
  return os.str();
}

struct Series {
  std::string name;
  std::vector<double> values;
};

/// Line chart of one or more series against the step index.
inline std::string series_svg(const std::string& title, const std::string& y_label,
                              const std::vector<Series>& series) {
  const double W = 640, H = 280, L = 64, R = 16, T = 28, B = 36;
  std::size_t n = 0;
  double lo = 0.0, hi = 0.0;
  for (const Series& s : series) {
    n = std::max(n, s.values.size());
    for (double v : s.values) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi - lo < 1e-12) {
    hi += 1.0;
    lo -= 1.0;
  }
  const double xs = (W - L - R) / std::max<double>(1.0, static_cast<double>(n) - 1.0);
  auto px = [&](std::size_t i) { return L + static_cast<double>(i) * xs; };
  auto py = [&](double v) { return T + (hi - v) / (hi - lo) * (H - T - B); };
  using detail::num;
  static const char* const kColors[] = {"#d64545", "#2186eb", "#3ebd93", "#f0b429"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
     << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << L << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">"
     << title << "</text>\n";
  os << "<g stroke=\"#7b8794\" stroke-width=\"1\">\n"
     << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\""
     << H - B << "\"/>\n"
     << "<line x1=\"" << L << "\" y1=\"" << num(py(0.0)) << "\" x2=\"" << W - R
     << "\" y2=\"" << num(py(0.0)) << "\" stroke-dasharray=\"2 2\"/>\n</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#3e4c59\">\n"
     << "<text x=\"4\" y=\"" << num(py(hi) + 4) << "\">" << num(hi) << "</text>\n"
     << "<text x=\"4\" y=\"" << num(py(lo) + 4) << "\">" << num(lo) << "</text>\n"
     << "<text x=\"" << L << "\" y=\"" << H - 12 << "\">step</text>\n"
     << "<text x=\"4\" y=\"" << T - 4 << "\">" << y_label << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    os << "<text x=\"" << W - R - 90 << "\" y=\"" << T + 12 * (k + 1) << "\" fill=\""
       << kColors[k % 4] << "\">" << series[k].name << "</text>\n";
  }
  os << "</g>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    os << "<polyline fill=\"none\" stroke=\"" << kColors[k % 4]
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[k].values.size(); ++i) {
      const double v = std::isfinite(series[k].values[i]) ? series[k].values[i] : 0.0;
      os << num(px(i)) << "," << num(py(v)) << " ";
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// Commanded task-space velocity per step, (commanded_i - pose_{i-1}) / h,
/// one series per axis (z omitted for planar traces).
inline std::vector<Series> input_velocity_series(const Trace& t, double h,
                                                 bool planar) {
  std::vector<Series> out = {{"v_x", {}}, {"v_y", {}}};
  if (!planar) out.push_back({"v_z", {}});
  for (std::size_t i = 1; i < t.commanded.size() && i < t.poses.size(); ++i) {
    const Vec3 v = (t.commanded[i].p - t.poses[i - 1].p) / h;
    for (std::size_t k = 0; k < out.size(); ++k) out[k].values.push_back(v(k));
  }
  return out;
}

inline std::vector<Series> compensating_velocity_series(const Trace& t) {
  Series s{"sum v_c", {}};
  for (std::size_t i = 1; i < t.sum_vc.size(); ++i) s.values.push_back(t.sum_vc[i]);
  return {s};
}

}  // namespace screwplan

#endif  // SCREWPLAN_SVG_HPP_
