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

// Command-line front end: plan, validate, plot, bench.
//
// Exit codes: 0 every query reached its goal with a clean audit, 2 some
// query stalled, failed or failed its audit, 3 bad input.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "screwplan/run.hpp"

namespace fs = std::filesystem;
using namespace screwplan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPlanFailure = 2;
constexpr int kExitInput = 3;

enum class LogLevel { off, step, lcp };

LogLevel log_level() {
  const char* v = std::getenv("SCREWPLAN_LOG");
  if (v == nullptr) return LogLevel::off;
  const std::string s(v);
  if (s == "step") return LogLevel::step;
  if (s == "lcp") return LogLevel::lcp;
  if (s != "off" && !s.empty()) {
    std::cerr << "warning: SCREWPLAN_LOG='" << s << "' not one of off|step|lcp; using off\n";
  }
  return LogLevel::off;
}

StepObserver make_logger(LogLevel level) {
  if (level == LogLevel::off) return {};
  return [level](int iter, const PoseVector& target, const StepResult& step) {
    const double vc = step.vc.size() ? step.vc.sum() : 0.0;
    std::fprintf(stderr,
                 "step %d target=(%.6g %.6g %.6g) contacts=%zu sum_vc=%.6g%s%s\n",
                 iter, target.p.x(), target.p.y(), target.p.z(), step.contacts.size(),
                 vc, step.diag.sequential_fallback ? " sequential" : "",
                 step.diag.nullspace_fallback ? " nullspace-fallback" : "");
    for (std::size_t i = 0; i < step.contacts.size(); ++i) {
      const ContactInfo& c = step.contacts[i];
      const Eigen::MatrixXd& M = step.diag.problem.M;
      std::fprintf(stderr, "  contact link=%d obstacle=%s psi=%.6g",
                   c.link_index + 1, c.obstacle_id.c_str(), c.psi);
      if (static_cast<Eigen::Index>(i) < M.rows()) {
        std::fprintf(stderr, " m_ii=%.6g", M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
      }
      std::fprintf(stderr, "\n");
    }
    if (level != LogLevel::lcp || !step.diag.had_lcp) return;
    const Eigen::IOFormat fmt(Eigen::StreamPrecision, Eigen::DontAlignCols, " ", "; ",
                              "", "", "[", "]");
    std::ostringstream os;
    os << "  lcp status=" << to_string(step.diag.lcp_status) << " pivots=" << step.diag.solution.pivots
       << " M=" << step.diag.problem.M.format(fmt)
       << " q=" << step.diag.problem.q.transpose().format(fmt)
       << " z=" << step.diag.solution.z.transpose().format(fmt)
       << " corrections=" << step.diag.correction_passes
       << " refine=" << step.diag.refine_steps << "\n";
    std::cerr << os.str();
  };
}

// CLI flags that override scenario settings; unset flags leave it alone.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::optional<double> tau, h, eps;

  void apply(Scenario& s) const {
    if (seed) s.rrt.seed = *seed;
    if (!mode.empty()) {
      const auto m = parse_mode(mode);
      if (!m) throw InvalidInput("--mode: expected eq6, eq8, joint-space or null-space");
      s.config.mode = *m;
      // The flag wins over per-segment choices as well.
      for (Query& q : s.queries) {
        for (Segment& seg : q.segments) seg.mode = *m;
      }
    }
    if (tau) s.config.tau = *tau;
    if (h) s.config.h = *h;
    if (eps) s.config.eps = *eps;
    s.config.validate();
  }
};

void print_summary(const RunRecord& r) {
  for (const QueryRecord& q : r.queries) {
    std::printf("%-20s %-16s iterations=%-6d min_psi=%-12.6g clearance=%s%s %.3fs\n",
                q.name.c_str(), to_string(q.path.status), q.path.iterations,
                q.clearance.overall_min, q.clearance.pass ? "pass" : "FAIL",
                q.constraints_ok() ? "" : " constraints=FAIL", q.seconds);
    if (!q.error.empty()) std::printf("  error: %s\n", q.error.c_str());
  }
}

int cmd_plan(const std::string& path, const std::string& out, const Overrides& ov) {
  Scenario s = load_scenario(path);
  ov.apply(s);
  const fs::path dir =
      out.empty() ? fs::path("runs") / fs::path(path).stem() : fs::path(out);
  RunOptions opt;
  opt.observer = make_logger(log_level());
  const RunRecord r = run(s, dir, opt, path);
  print_summary(r);
  std::printf("wrote %s\n", (dir / "run.json").string().c_str());
  bool input_error = false;
  for (const QueryRecord& q : r.queries) input_error = input_error || !q.error.empty();
  if (input_error) return kExitInput;
  return r.all_succeeded() ? kExitOk : kExitPlanFailure;
}

int cmd_validate(const std::string& csv, const std::string& scn, double tol) {
  const Scenario s = load_scenario(scn);
  const PathTable t = parse_path_csv(read_text_file(csv), csv);
  if (!t.joints.empty() && t.joints[0].size() != s.chain.dof()) {
    throw InvalidInput(csv + ": " + std::to_string(t.joints[0].size()) +
                       " joint columns but the scenario chain has " +
                       std::to_string(s.chain.dof()) + " joints");
  }
  const ClearanceReport rep = validate_clearance(s.chain, t.joints, s.obstacles,
                                                 s.config.eps, tol, kClearanceSubsteps);
  double pose_err = 0.0;
  for (std::size_t i = 0; i < t.joints.size(); ++i) {
    const PoseVector fk = s.point_robot
                              ? PoseVector{Vec3(t.joints[i](0), t.joints[i](1), 0.0), {}}
                              : forward_kinematics(s.chain, t.joints[i]);
    pose_err = std::max(pose_err, position_distance(fk, t.poses[i]));
  }
  std::printf("waypoints=%zu min_psi=%.9g worst_violation=%.3g tolerance=%g fk_mismatch=%.3g\n",
              t.joints.size(), rep.overall_min, rep.worst_violation, tol, pose_err);
  const bool ok = rep.pass && pose_err <= 1e-9;
  if (!rep.pass) {
    std::printf("clearance FAIL at step %zu\n", *rep.first_violation);
  }
  if (pose_err > 1e-9) std::printf("pose columns do not match FK of the joint columns\n");
  std::printf("%s\n", ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitPlanFailure;
}

int cmd_plot(const std::string& run_dir, int skeleton_every) {
  const fs::path dir(run_dir);
  const nlohmann::json rec = nlohmann::json::parse(read_text_file(dir / "run.json"));
  const Scenario s = load_scenario((dir / "scenario.scn").string());
  for (const auto& q : rec.at("queries")) {
    const std::string name = q.at("name").get<std::string>();
    const PathTable t = parse_path_csv(read_text_file(dir / (name + ".csv")), name + ".csv");
    Trace tr{t.joints, t.poses,
             parse_commanded_csv(read_text_file(dir / (name + "_commanded.csv"))),
             t.sum_vc};
    PoseVector goal = tr.poses.empty() ? PoseVector{} : tr.poses.back();
    for (const Query& sq : s.queries) {
      if (sq.name != name) continue;
      goal = s.point_robot ? PoseVector{Vec3(sq.x_goal.x(), sq.x_goal.y(), 0.0), {}}
                           : sq.segments.back().goal;
    }
    write_plots(s, name, tr, goal, dir, skeleton_every);
    std::printf("wrote %s\n", (dir / (name + ".svg")).string().c_str());
  }
  return kExitOk;
}

int cmd_bench(const std::string& path, int repeat, const Overrides& ov) {
  Scenario s = load_scenario(path);
  ov.apply(s);
  if (repeat < 1) throw InvalidInput("--repeat must be at least 1");
  std::vector<std::vector<QueryRecord>> results(static_cast<std::size_t>(repeat));
  const unsigned workers = std::max(1u, std::min<unsigned>(
                                            std::thread::hardware_concurrency(),
                                            static_cast<unsigned>(repeat)));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t r = w; r < results.size(); r += workers) {
        for (const Query& q : s.queries) results[r].push_back(run_query(s, q));
      }
    });
  }
  for (std::thread& t : pool) t.join();
  int code = kExitOk;
  for (std::size_t k = 0; k < s.queries.size(); ++k) {
    std::vector<double> secs;
    bool identical = true;
    const std::string ref = path_csv(results[0][k].path, results[0][k].clearance.min_psi);
    for (const auto& rep : results) {
      secs.push_back(rep[k].seconds);
      identical = identical && path_csv(rep[k].path, rep[k].clearance.min_psi) == ref;
    }
    std::sort(secs.begin(), secs.end());
    const QueryRecord& q = results[0][k];
    std::printf("%-20s %-16s repeats=%d min=%.4fs median=%.4fs max=%.4fs deterministic=%s\n",
                q.name.c_str(), to_string(q.path.status), repeat, secs.front(),
                secs[secs.size() / 2], secs.back(), identical ? "yes" : "NO");
    if (!q.success || !identical) code = kExitPlanFailure;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Screw-interpolation motion planner with complementarity-based obstacle avoidance"};
  app.require_subcommand(1);
  // `--h` is the time step, so help is long-form only.
  app.set_help_flag("--help", "print this help and exit");

  Overrides ov;
  std::string scenario, out, csv;
  double tol = kClearanceTol;
  int skeleton_every = 0;
  int repeat = 1;

  auto add_overrides = [&](CLI::App* c) {
    c->add_option("--seed", ov.seed, "RRT seed");
    c->add_option("--mode", ov.mode,
                  "projection mode: joint-space or null-space (aliases eq6, eq8)");
    c->add_option("--tau", ov.tau, "interpolation parameter per step");
    c->add_option("--h", ov.h, "time step");
    c->add_option("--eps", ov.eps, "safety margin");
  };

  CLI::App* plan = app.add_subcommand("plan", "plan every query of a scenario");
  plan->add_option("scenario", scenario, "scenario file")->required();
  plan->add_option("--out", out, "output directory (default runs/<scenario>)");
  add_overrides(plan);

  CLI::App* validate = app.add_subcommand("validate", "audit a path CSV against a scenario");
  validate->add_option("csv", csv, "path CSV written by plan")->required();
  validate->add_option("scenario", scenario, "scenario file")->required();
  validate->add_option("--tol", tol, "clearance tolerance");

  std::string run_dir;
  CLI::App* plot = app.add_subcommand("plot", "re-render the SVG plots of a run directory");
  plot->add_option("run", run_dir, "run directory written by plan")->required();
  plot->add_option("--skeleton-every", skeleton_every, "arm snapshot period in waypoints");

  CLI::App* bench = app.add_subcommand("bench", "time repeated runs of a scenario");
  bench->add_option("scenario", scenario, "scenario file")->required();
  bench->add_option("--repeat", repeat, "number of repetitions")->required();
  add_overrides(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*plan) return cmd_plan(scenario, out, ov);
    if (*validate) return cmd_validate(csv, scenario, tol);
    if (*plot) return cmd_plot(run_dir, skeleton_every);
    if (*bench) return cmd_bench(scenario, repeat, ov);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: run record: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
