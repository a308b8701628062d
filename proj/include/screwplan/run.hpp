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

/// \file run.hpp
/// \brief Executes the queries of a scenario and persists the results:
/// one joint-path CSV per query, a run record (run.json) and SVG plots.
///
/// Path CSV columns, in this order:
///   iteration, theta_1 .. theta_n, x, y, z, qw, qx, qy, qz,
///   min_psi, n_active_contacts, sum_vc
/// Row k is waypoint k (row 0 is the start), so a path of N iterations has
/// N + 1 rows. Reals are printed with 17 significant digits and parse back
/// exactly.

#ifndef SCREWPLAN_RUN_HPP_
#define SCREWPLAN_RUN_HPP_

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "screwplan/scenario.hpp"
#include "screwplan/svg.hpp"

namespace screwplan {

/// Audit tolerance on psi >= eps of every waypoint and interpolate.
inline constexpr double kClearanceTol = 1e-4;
inline constexpr int kClearanceSubsteps = 4;

struct RunOptions {
  double clearance_tol = kClearanceTol;
  bool write_plots = true;
  int skeleton_every = 0;  // 0: about ten snapshots per path
  StepObserver observer;
};

struct QueryRecord {
  std::string name;
  PathResult path;
  std::vector<SegmentReport> segments;
  ClearanceReport clearance;
  PoseVector goal;  // final goal of the query
  double seconds = 0.0;
  std::string error;  // input problem that prevented planning
  bool success = false;

  bool constraints_ok() const {
    for (const SegmentReport& s : segments) {
      if (!s.constraint_ok) return false;
    }
    return true;
  }
};

struct RunRecord {
  std::string scenario_name;
  std::string scenario_source;
  std::uint64_t scenario_hash = 0;
  PlannerConfig config;
  std::vector<QueryRecord> queries;
  double seconds = 0.0;

  bool all_succeeded() const {
    for (const QueryRecord& q : queries) {
      if (!q.success) return false;
    }
    return !queries.empty();
  }
};

/// Start configuration of a chain query: theta_start or, failing that,
/// damped-least-squares IK from the zero configuration (clamped to limits).
inline JointVector resolve_start(const Scenario& s, const Query& q) {
  if (s.point_robot) return JointVector(q.x_start);
  if (q.theta_start) return *q.theta_start;
  const JointVector seed =
      joint_limit_clamp(JointVector::Zero(s.chain.dof()), s.chain).theta;
  const IkResult ik = ik_solve(s.chain, *q.start, seed);
  if (!ik.converged) {
    throw InvalidInput("query '" + q.name + "': IK for the start pose did not converge (residual " +
                       std::to_string(ik.residual) + ")");
  }
  return ik.theta;
}

/// Plans one query and audits it; never writes files.
inline QueryRecord run_query(const Scenario& s, const Query& q,
                             const RunOptions& opt = {}) {
  QueryRecord rec;
  rec.name = q.name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (s.point_robot) {
      rec.goal = {Vec3(q.x_goal.x(), q.x_goal.y(), 0.0), UnitQuaternion()};
      rec.path = point_robot_plan(q.x_start, q.x_goal, s.obstacles, s.config,
                                  s.k_p, opt.observer);
    } else {
      rec.goal = q.segments.back().goal;
      const JointVector theta = resolve_start(s, q);
      SequenceResult seq = plan_task_sequence(q.segments, theta, s.chain, s.obstacles,
                                              s.config, s.rrt, opt.observer);
      rec.path = std::move(seq.path);
      rec.segments = std::move(seq.segments);
    }
    rec.clearance = validate_clearance(s.chain, rec.path.joint_path, s.obstacles,
                                       s.config.eps, opt.clearance_tol,
                                       kClearanceSubsteps);
  } catch (const InvalidInput& e) {
    rec.error = e.what();
    rec.path.status = PlanStatus::failed;
    rec.path.message = e.what();
    rec.clearance.pass = false;
  }
  rec.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rec.success = rec.error.empty() && rec.path.status == PlanStatus::reached &&
                rec.clearance.pass && rec.constraints_ok();
  return rec;
}

// ---------------------------------------------------------------------------
// CSV.

namespace detail {

inline void put(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace detail

inline std::string path_csv_header(int dof) {
  std::string h = "iteration";
  for (int k = 1; k <= dof; ++k) h += ",theta_" + std::to_string(k);
  return h + ",x,y,z,qw,qx,qy,qz,min_psi,n_active_contacts,sum_vc";
}

/// `min_psi` holds the exact clearance per waypoint (e.g. from
/// ClearanceReport::min_psi); missing entries print as inf.
inline std::string path_csv(const PathResult& p, std::span<const double> min_psi) {
  const int dof = p.joint_path.empty() ? 0 : static_cast<int>(p.joint_path[0].size());
  std::string out = path_csv_header(dof) + "\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += std::to_string(i);
    for (int k = 0; k < dof; ++k) {
      out += ',';
      detail::put(out, p.joint_path[i](k));
    }
    const Vec7 g = p.pose_path[i].gamma();
    for (int k = 0; k < 7; ++k) {
      out += ',';
      detail::put(out, g(k));
    }
    out += ',';
    detail::put(out, i < min_psi.size() ? min_psi[i]
                                        : std::numeric_limits<double>::infinity());
    out += ',' + std::to_string(p.contacts[i].size()) + ',';
    detail::put(out, p.vc[i].size() ? p.vc[i].sum() : 0.0);
    out += '\n';
  }
  return out;
}

/// Commanded (screw-interpolated) targets per waypoint.
inline std::string commanded_csv(const PathResult& p) {
  std::string out = "iteration,x,y,z,qw,qx,qy,qz\n";
  for (std::size_t i = 0; i < p.commanded_path.size(); ++i) {
    out += std::to_string(i);
    const Vec7 g = p.commanded_path[i].gamma();
    for (int k = 0; k < 7; ++k) {
      out += ',';
      detail::put(out, g(k));
    }
    out += '\n';
  }
  return out;
}

struct PathTable {
  std::vector<JointVector> joints;
  std::vector<PoseVector> poses;
  std::vector<double> min_psi;
  std::vector<int> n_active_contacts;
  std::vector<double> sum_vc;
};

/// Parses a path CSV written by path_csv. Throws InvalidInput naming the
/// offending line.
inline PathTable parse_path_csv(const std::string& text,
                                const std::string& source = "<csv>") {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput(source + ": empty file");
  const std::vector<std::string> header = detail::split_csv_line(line);
  const int dof = static_cast<int>(header.size()) - 11;
  if (dof < 0 || line != path_csv_header(dof)) {
    throw InvalidInput(source + ":1: unexpected header");
  }
  PathTable t;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> c = detail::split_csv_line(line);
    if (c.size() != header.size()) {
      throw InvalidInput(source + ":" + std::to_string(lineno) + ": expected " +
                         std::to_string(header.size()) + " columns, got " +
                         std::to_string(c.size()));
    }
    try {
      if (std::stoul(c[0]) != t.joints.size()) {
        throw InvalidInput(source + ":" + std::to_string(lineno) +
                           ": iteration out of sequence");
      }
      JointVector th(dof);
      for (int k = 0; k < dof; ++k) th(k) = std::stod(c[1 + k]);
      Vec7 g;
      for (int k = 0; k < 7; ++k) g(k) = std::stod(c[1 + dof + k]);
      t.joints.push_back(th);
      t.poses.push_back(PoseVector::from_gamma(g));
      t.min_psi.push_back(std::stod(c[8 + dof]));
      t.n_active_contacts.push_back(std::stoi(c[9 + dof]));
      t.sum_vc.push_back(std::stod(c[10 + dof]));
    } catch (const std::logic_error&) {
      throw InvalidInput(source + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return t;
}

inline std::vector<PoseVector> parse_commanded_csv(const std::string& text,
                                                   const std::string& source = "<csv>") {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line != "iteration,x,y,z,qw,qx,qy,qz") {
    throw InvalidInput(source + ":1: unexpected header");
  }
  std::vector<PoseVector> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> c = detail::split_csv_line(line);
    if (c.size() != 8) throw InvalidInput(source + ":" + std::to_string(lineno) + ": expected 8 columns");
    Vec7 g;
    try {
      for (int k = 0; k < 7; ++k) g(k) = std::stod(c[1 + k]);
    } catch (const std::logic_error&) {
      throw InvalidInput(source + ":" + std::to_string(lineno) + ": malformed number");
    }
    out.push_back(PoseVector::from_gamma(g));
  }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InvalidInput(p.string() + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error(p.string() + ": write failed");
}

// ---------------------------------------------------------------------------
// Run record.

inline nlohmann::json to_json(const PlannerConfig& c) {
  nlohmann::json j = {{"tau", c.tau},
                      {"h", c.h},
                      {"eps", c.eps},
                      {"d_active", c.activation_radius()},
                      {"pos_tol", c.pos_tol},
                      {"ori_tol", c.ori_tol},
                      {"stall_tol", c.stall_tol},
                      {"stall_window", c.stall_window},
                      {"max_iters", c.max_iters},
                      {"lambda", c.lambda},
                      {"mode", mode_name(c.mode)},
                      {"task", c.task == TaskMode::full ? "full" : "position"},
                      {"refine_iters", c.refine_iters},
                      {"clearance_corrections", c.clearance_corrections},
                      {"nullspace_min_gain", c.nullspace_min_gain}};
  return j;
}

/// JSON has no infinities; unbounded clearances are written as null.
inline nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline nlohmann::json to_json(const QueryRecord& q, double tol) {
  nlohmann::json j;
  j["name"] = q.name;
  j["status"] = to_string(q.path.status);
  j["success"] = q.success;
  j["iterations"] = q.path.iterations;
  j["waypoints"] = q.path.size();
  j["final_position_distance"] = q.path.final_pos_distance;
  j["final_orientation_distance"] = q.path.final_ori_distance;
  j["joint_limit_flags"] = q.path.joint_limit_flags;
  j["seconds"] = q.seconds;
  if (!q.path.message.empty()) j["message"] = q.path.message;
  if (!q.error.empty()) j["error"] = q.error;
  nlohmann::json c;
  c["pass"] = q.clearance.pass;
  c["tolerance"] = tol;
  c["substeps"] = kClearanceSubsteps;
  c["min_psi"] = finite_or_null(q.clearance.overall_min);
  c["worst_violation"] = q.clearance.worst_violation;
  c["first_violation"] = q.clearance.first_violation
                             ? nlohmann::json(*q.clearance.first_violation)
                             : nlohmann::json(nullptr);
  j["clearance"] = c;
  nlohmann::json segs = nlohmann::json::array();
  for (const SegmentReport& s : q.segments) {
    nlohmann::json e = {{"constraint", to_string(s.constraint)},
                        {"planner", to_string(s.planner)},
                        {"mode", mode_name(s.mode)},
                        {"status", to_string(s.status)},
                        {"first", s.first},
                        {"last", s.last},
                        {"commanded_deviation", s.commanded_deviation},
                        {"executed_deviation", s.executed_deviation},
                        {"constraint_ok", s.constraint_ok}};
    if (s.rrt) {
      e["rrt"] = {{"nodes", s.rrt->nodes},
                  {"samples", s.rrt->samples},
                  {"extensions", s.rrt->extensions},
                  {"success", s.rrt->success}};
    }
    segs.push_back(e);
  }
  j["segments"] = segs;
  j["csv"] = q.name + ".csv";
  j["commanded_csv"] = q.name + "_commanded.csv";
  return j;
}

inline nlohmann::json to_json(const RunRecord& r, double tol = kClearanceTol) {
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(r.scenario_hash));
  nlohmann::json j;
  j["scenario"] = {{"name", r.scenario_name},
                   {"source", r.scenario_source},
                   {"hash", hash}};
  j["config"] = to_json(r.config);
  j["seconds"] = r.seconds;
  j["success"] = r.all_succeeded();
  j["queries"] = nlohmann::json::array();
  for (const QueryRecord& q : r.queries) j["queries"].push_back(to_json(q, tol));
  return j;
}

/// Renders the path and velocity plots of one query into `dir`.
inline void write_plots(const Scenario& s, const std::string& name, const Trace& t,
                        const PoseVector& goal, const std::filesystem::path& dir,
                        int skeleton_every) {
  if (skeleton_every <= 0) {
    skeleton_every = std::max<int>(1, static_cast<int>(t.joints.size() / 10));
  }
  write_text_file(dir / (name + ".svg"), path_svg(s, t, goal, skeleton_every));
  const bool planar = detail::is_planar(s, t);
  write_text_file(dir / (name + "_input_velocity.svg"),
                  series_svg(name + ": input task-space velocity", "velocity",
                             input_velocity_series(t, s.config.h, planar)));
  write_text_file(dir / (name + "_compensating_velocity.svg"),
                  series_svg(name + ": compensating velocity", "sum v_c",
                             compensating_velocity_series(t)));
}

/// Runs every query in order, writing `<query>.csv`, `<query>_commanded.csv`,
/// plots and `run.json` into `out_dir` (created if needed), plus a canonical
/// copy of the scenario as `scenario.scn`. A failing query is recorded and
/// the run continues.
inline RunRecord run(const Scenario& s, const std::filesystem::path& out_dir,
                     const RunOptions& opt = {}, const std::string& source = "") {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string canonical = write_scenario(s);
  RunRecord rec;
  rec.scenario_name = s.name;
  rec.scenario_source = source;
  rec.scenario_hash = fnv1a64(canonical);
  rec.config = s.config;
  const auto t0 = std::chrono::steady_clock::now();
  for (const Query& q : s.queries) {
    QueryRecord qr = run_query(s, q, opt);
    write_text_file(out_dir / (q.name + ".csv"), path_csv(qr.path, qr.clearance.min_psi));
    write_text_file(out_dir / (q.name + "_commanded.csv"), commanded_csv(qr.path));
    if (opt.write_plots) {
      write_plots(s, q.name, trace_of(qr.path), qr.goal, out_dir, opt.skeleton_every);
    }
    rec.queries.push_back(std::move(qr));
  }
  rec.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_text_file(out_dir / "scenario.scn", canonical);
  write_text_file(out_dir / "run.json", to_json(rec, opt.clearance_tol).dump(2) + "\n");
  return rec;
}

}  // namespace screwplan

#endif  // SCREWPLAN_RUN_HPP_
