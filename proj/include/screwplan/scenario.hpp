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

/// \file scenario.hpp
/// \brief Scenario files: a YAML document with schema
/// `screwplan-scenario/1` describing a robot, its obstacles, planner
/// settings and one or more queries. See docs/scenario-format.md.

#ifndef SCREWPLAN_SCENARIO_HPP_
#define SCREWPLAN_SCENARIO_HPP_

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "screwplan/sequence.hpp"

namespace screwplan {

inline constexpr const char* kScenarioSchema = "screwplan-scenario/1";

/// A malformed or semantically invalid scenario. The message starts with
/// `file:line:column:` when a location is known, followed by the field path.
class ScenarioError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

struct Query {
  std::string name;
  // Point robot.
  Vec2 x_start = Vec2::Zero();
  Vec2 x_goal = Vec2::Zero();
  // Serial chain. theta_start, when absent, is solved by IK from `start`.
  std::optional<JointVector> theta_start;
  std::optional<PoseVector> start;
  std::vector<Segment> segments;

  friend bool operator==(const Query& a, const Query& b) {
    auto same_theta = [](const std::optional<JointVector>& u,
                         const std::optional<JointVector>& v) {
      if (u.has_value() != v.has_value()) return false;
      if (!u) return true;
      return u->size() == v->size() && *u == *v;
    };
    return a.name == b.name && a.x_start == b.x_start && a.x_goal == b.x_goal &&
           same_theta(a.theta_start, b.theta_start) && a.start == b.start &&
           a.segments == b.segments;
  }
};

struct Scenario {
  std::string name;
  bool point_robot = false;
  KinematicChain chain;  // point_robot_chain() for point robots
  std::vector<Obstacle> obstacles;
  PlannerConfig config;
  double k_p = 1.0;
  RrtConfig rrt;
  std::vector<Query> queries;

  bool operator==(const Scenario& o) const {
    return name == o.name && point_robot == o.point_robot && chain == o.chain &&
           obstacles == o.obstacles && config == o.config && k_p == o.k_p &&
           rrt.goal_bias == o.rrt.goal_bias && rrt.max_nodes == o.rrt.max_nodes &&
           rrt.seed == o.rrt.seed && rrt.extend_iters == o.rrt.extend_iters &&
           rrt.w_ori == o.rrt.w_ori && rrt.workspace == o.rrt.workspace &&
           queries == o.queries;
  }
};

inline const char* mode_name(ProjectionMode m) {
  return m == ProjectionMode::joint_space ? "joint-space" : "null-space";
}

/// Accepts `joint-space`/`null-space` and the short aliases `eq6`/`eq8`.
inline std::optional<ProjectionMode> parse_mode(const std::string& s) {
  if (s == "joint-space" || s == "eq6") return ProjectionMode::joint_space;
  if (s == "null-space" || s == "eq8") return ProjectionMode::null_space;
  return std::nullopt;
}

namespace detail {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& field,
                         const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    const YAML::Mark m = at.Mark();
    if (!m.is_null()) os << ":" << m.line + 1 << ":" << m.column + 1;
    os << ": " << field << ": " << msg;
    throw ScenarioError(os.str());
  }

  void keys(const YAML::Node& n, const std::string& field,
            std::initializer_list<const char*> allowed) const {
    if (!n.IsMap()) fail(n, field, "expected a mapping");
    for (const auto& kv : n) {
      const std::string k = kv.first.as<std::string>();
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) fail(kv.first, field + "." + k, "unknown key");
    }
  }

  YAML::Node need(const YAML::Node& parent, const std::string& field,
                  const char* key) const {
    const YAML::Node n = parent[key];
    if (!n) fail(parent, join(field, key), "missing required field");
    return n;
  }

  double number(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, field, "expected a number");
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      fail(n, field, "expected a number, got '" + n.Scalar() + "'");
    }
  }

  double number(const YAML::Node& parent, const std::string& field,
                const char* key, double fallback) const {
    const YAML::Node n = parent[key];
    return n ? number(n, join(field, key)) : fallback;
  }

  int integer(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, field, "expected an integer");
    try {
      return n.as<int>();
    } catch (const YAML::Exception&) {
      fail(n, field, "expected an integer, got '" + n.Scalar() + "'");
    }
  }

  std::string text(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, field, "expected a string");
    return n.Scalar();
  }

  Eigen::VectorXd vector(const YAML::Node& n, const std::string& field,
                         int expected = -1) const {
    if (!n.IsSequence()) fail(n, field, "expected a list of numbers");
    if (expected >= 0 && static_cast<int>(n.size()) != expected) {
      fail(n, field,
           "expected " + std::to_string(expected) + " numbers, got " +
               std::to_string(n.size()));
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(n.size()));
    for (std::size_t i = 0; i < n.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) =
          number(n[i], field + "[" + std::to_string(i) + "]");
    }
    return v;
  }

  Vec3 vec3(const YAML::Node& n, const std::string& field) const {
    return vector(n, field, 3);
  }

  UnitQuaternion quaternion(const YAML::Node& n, const std::string& field) const {
    const Eigen::VectorXd v = vector(n, field, 4);
    try {
      return UnitQuaternion::checked({v(0), v(1), v(2), v(3)});
    } catch (const InvalidInput& e) {
      fail(n, field, e.what());
    }
  }

  PoseVector pose(const YAML::Node& n, const std::string& field) const {
    keys(n, field, {"p", "q"});
    PoseVector out;
    out.p = vec3(need(n, field, "p"), field + ".p");
    if (n["q"]) out.Q = quaternion(n["q"], field + ".q");
    return out;
  }

  static std::string join(const std::string& field, const char* key) {
    return field.empty() ? std::string(key) : field + "." + key;
  }

 private:
  std::string source_;
};

inline Obstacle read_obstacle(const Reader& r, const YAML::Node& n,
                              const std::string& f) {
  Obstacle o;
  o.id = r.text(r.need(n, f, "id"), f + ".id");
  const std::string type = r.text(r.need(n, f, "type"), f + ".type");
  if (type == "sphere" || type == "circle") {
    r.keys(n, f, {"id", "type", "center", "radius"});
    o.shape = Sphere{r.vec3(r.need(n, f, "center"), f + ".center"),
                     r.number(r.need(n, f, "radius"), f + ".radius")};
  } else if (type == "wall") {
    r.keys(n, f, {"id", "type", "a", "b", "thickness"});
    o.shape = Wall{r.vec3(r.need(n, f, "a"), f + ".a"),
                   r.vec3(r.need(n, f, "b"), f + ".b"),
                   r.number(r.need(n, f, "thickness"), f + ".thickness")};
  } else if (type == "capsule") {
    r.keys(n, f, {"id", "type", "a", "b", "radius"});
    o.shape = Capsule{r.vec3(r.need(n, f, "a"), f + ".a"),
                      r.vec3(r.need(n, f, "b"), f + ".b"),
                      r.number(r.need(n, f, "radius"), f + ".radius")};
  } else if (type == "box") {
    r.keys(n, f, {"id", "type", "min", "max"});
    o.shape = Box{r.vec3(r.need(n, f, "min"), f + ".min"),
                  r.vec3(r.need(n, f, "max"), f + ".max")};
  } else {
    r.fail(n["type"], f + ".type",
           "unknown obstacle type '" + type +
               "' (expected sphere, circle, wall, capsule or box)");
  }
  try {
    validate(o);
  } catch (const InvalidInput& e) {
    r.fail(n, f, e.what());
  }
  return o;
}

inline KinematicChain read_chain(const Reader& r, const YAML::Node& n,
                                 const std::string& f) {
  KinematicChain c;
  const YAML::Node joints = r.need(n, f, "joints");
  const YAML::Node links = r.need(n, f, "links");
  if (!joints.IsSequence()) r.fail(joints, f + ".joints", "expected a list");
  if (!links.IsSequence()) r.fail(links, f + ".links", "expected a list");
  for (std::size_t k = 0; k < joints.size(); ++k) {
    const std::string jf = f + ".joints[" + std::to_string(k) + "]";
    const YAML::Node j = joints[k];
    r.keys(j, jf, {"type", "axis", "origin", "limits"});
    Joint joint;
    const std::string type = r.text(r.need(j, jf, "type"), jf + ".type");
    if (type == "revolute") {
      joint.type = JointType::revolute;
    } else if (type == "prismatic") {
      joint.type = JointType::prismatic;
    } else {
      r.fail(j["type"], jf + ".type",
             "expected revolute or prismatic, got '" + type + "'");
    }
    joint.axis = r.vec3(r.need(j, jf, "axis"), jf + ".axis");
    if (std::abs(joint.axis.norm() - 1.0) > 1e-6) {
      r.fail(j["axis"], jf + ".axis", "axis must be a unit vector");
    }
    if (j["origin"]) joint.origin = r.vec3(j["origin"], jf + ".origin");
    if (j["limits"]) {
      const Eigen::VectorXd lim = r.vector(j["limits"], jf + ".limits", 2);
      joint.lower = lim(0);
      joint.upper = lim(1);
      if (!(joint.lower <= joint.upper)) {
        r.fail(j["limits"], jf + ".limits", "lower limit exceeds upper limit");
      }
    }
    c.joints.push_back(joint);
  }
  for (std::size_t k = 0; k < links.size(); ++k) {
    const std::string lf = f + ".links[" + std::to_string(k) + "]";
    const YAML::Node l = links[k];
    r.keys(l, lf, {"a", "b", "radius", "passive"});
    LinkGeometry g;
    g.a = r.vec3(r.need(l, lf, "a"), lf + ".a");
    g.b = r.vec3(r.need(l, lf, "b"), lf + ".b");
    g.radius = r.number(l, lf, "radius", 0.0);
    if (!(g.radius >= 0.0)) r.fail(l, lf + ".radius", "negative radius");
    if (l["passive"]) {
      try {
        if (l["passive"].as<bool>()) c.passive_links.push_back(static_cast<int>(k));
      } catch (const YAML::Exception&) {
        r.fail(l["passive"], lf + ".passive", "expected true or false");
      }
    }
    c.links.push_back(g);
  }
  if (links.size() != joints.size()) {
    r.fail(links, f + ".links",
           std::to_string(links.size()) + " links for " +
               std::to_string(joints.size()) + " joints");
  }
  if (n["base"]) c.base = r.pose(n["base"], f + ".base");
  if (n["ee_offset"]) c.ee_offset = r.pose(n["ee_offset"], f + ".ee_offset");
  return c;
}

inline void read_config(const Reader& r, const YAML::Node& n,
                        const std::string& f, Scenario& s) {
  r.keys(n, f,
         {"tau", "h", "eps", "d_active", "pos_tol", "ori_tol", "stall_tol",
          "stall_window", "max_iters", "lambda", "mode", "task", "refine_iters",
          "clearance_corrections", "nullspace_min_gain", "k_p"});
  PlannerConfig& c = s.config;
  c.tau = r.number(n, f, "tau", c.tau);
  c.h = r.number(n, f, "h", c.h);
  c.eps = r.number(n, f, "eps", c.eps);
  if (n["d_active"]) c.d_active = r.number(n["d_active"], f + ".d_active");
  c.pos_tol = r.number(n, f, "pos_tol", c.pos_tol);
  c.ori_tol = r.number(n, f, "ori_tol", c.ori_tol);
  c.stall_tol = r.number(n, f, "stall_tol", c.stall_tol);
  c.lambda = r.number(n, f, "lambda", c.lambda);
  c.nullspace_min_gain = r.number(n, f, "nullspace_min_gain", c.nullspace_min_gain);
  if (n["stall_window"]) c.stall_window = r.integer(n["stall_window"], f + ".stall_window");
  if (n["max_iters"]) c.max_iters = r.integer(n["max_iters"], f + ".max_iters");
  if (n["refine_iters"]) c.refine_iters = r.integer(n["refine_iters"], f + ".refine_iters");
  if (n["clearance_corrections"]) {
    c.clearance_corrections =
        r.integer(n["clearance_corrections"], f + ".clearance_corrections");
  }
  if (n["mode"]) {
    const auto m = parse_mode(r.text(n["mode"], f + ".mode"));
    if (!m) r.fail(n["mode"], f + ".mode", "expected joint-space or null-space");
    c.mode = *m;
  }
  if (n["task"]) {
    const std::string t = r.text(n["task"], f + ".task");
    if (t == "full") {
      c.task = TaskMode::full;
    } else if (t == "position") {
      c.task = TaskMode::position;
    } else {
      r.fail(n["task"], f + ".task", "expected full or position");
    }
  }
  s.k_p = r.number(n, f, "k_p", s.k_p);
  try {
    c.validate();
  } catch (const InvalidInput& e) {
    r.fail(n, f, e.what());
  }
  if (!(s.k_p > 0.0)) r.fail(n, f + ".k_p", "must be positive");
}

inline void read_rrt(const Reader& r, const YAML::Node& n, const std::string& f,
                     RrtConfig& c) {
  r.keys(n, f, {"goal_bias", "max_nodes", "seed", "extend_iters", "w_ori"});
  c.goal_bias = r.number(n, f, "goal_bias", c.goal_bias);
  c.w_ori = r.number(n, f, "w_ori", c.w_ori);
  if (n["max_nodes"]) c.max_nodes = r.integer(n["max_nodes"], f + ".max_nodes");
  if (n["extend_iters"]) c.extend_iters = r.integer(n["extend_iters"], f + ".extend_iters");
  if (n["seed"]) {
    try {
      c.seed = n["seed"].as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      r.fail(n["seed"], f + ".seed", "expected a non-negative integer");
    }
  }
}

inline ConstraintTag read_constraint(const Reader& r, const YAML::Node& n,
                                     const std::string& f) {
  const std::string t = r.text(n, f);
  if (t == "none") return ConstraintTag::none;
  if (t == "fixed-orientation") return ConstraintTag::fixed_orientation;
  if (t == "fixed-position") return ConstraintTag::fixed_position;
  r.fail(n, f, "expected none, fixed-orientation or fixed-position");
}

inline Segment read_segment(const Reader& r, const YAML::Node& n,
                            const std::string& f) {
  r.keys(n, f, {"goal", "constraint", "planner", "mode"});
  Segment s;
  s.goal = r.pose(r.need(n, f, "goal"), f + ".goal");
  if (n["constraint"]) s.constraint = read_constraint(r, n["constraint"], f + ".constraint");
  if (n["planner"]) {
    const std::string p = r.text(n["planner"], f + ".planner");
    if (p == "local") {
      s.planner = PlannerKind::local;
    } else if (p == "rrt") {
      s.planner = PlannerKind::rrt;
    } else {
      r.fail(n["planner"], f + ".planner", "expected local or rrt");
    }
  }
  if (n["mode"]) {
    s.mode = parse_mode(r.text(n["mode"], f + ".mode"));
    if (!s.mode) r.fail(n["mode"], f + ".mode", "expected joint-space or null-space");
  }
  return s;
}

inline Query read_query(const Reader& r, const YAML::Node& n,
                        const std::string& f, const Scenario& s) {
  Query q;
  q.name = r.text(r.need(n, f, "name"), f + ".name");
  for (char ch : q.name) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-')) {
      r.fail(n["name"], f + ".name", "use only letters, digits, '_' and '-'");
    }
  }
  if (s.point_robot) {
    r.keys(n, f, {"name", "start", "goal"});
    q.x_start = r.vector(r.need(n, f, "start"), f + ".start", 2);
    q.x_goal = r.vector(r.need(n, f, "goal"), f + ".goal", 2);
    return q;
  }
  r.keys(n, f, {"name", "theta_start", "start", "goal", "segments"});
  if (n["theta_start"]) {
    q.theta_start = r.vector(n["theta_start"], f + ".theta_start");
    if (q.theta_start->size() != s.chain.dof()) {
      r.fail(n["theta_start"], f + ".theta_start",
             "has " + std::to_string(q.theta_start->size()) +
                 " entries but the chain has " + std::to_string(s.chain.dof()) +
                 " joints");
    }
  }
  if (n["start"]) q.start = r.pose(n["start"], f + ".start");
  if (!q.theta_start && !q.start) {
    r.fail(n, f, "needs theta_start or a start pose");
  }
  if (n["goal"] && n["segments"]) {
    r.fail(n, f, "give either goal or segments, not both");
  }
  if (n["goal"]) {
    q.segments.push_back({r.pose(n["goal"], f + ".goal"), ConstraintTag::none,
                          PlannerKind::local, std::nullopt});
  } else {
    const YAML::Node segs = r.need(n, f, "segments");
    if (!segs.IsSequence() || segs.size() == 0) {
      r.fail(segs, f + ".segments", "expected a non-empty list");
    }
    for (std::size_t k = 0; k < segs.size(); ++k) {
      q.segments.push_back(
          read_segment(r, segs[k], f + ".segments[" + std::to_string(k) + "]"));
    }
  }
  return q;
}

}  // namespace detail

/// Parses and validates scenario text. `source` names the input in error
/// messages.
inline Scenario parse_scenario(const std::string& text,
                               const std::string& source = "<scenario>") {
  const detail::Reader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source << ":" << e.mark.line + 1 << ":" << e.mark.column + 1
       << ": syntax error: " << e.msg;
    throw ScenarioError(os.str());
  }
  if (!root || !root.IsMap()) r.fail(root, "<root>", "expected a mapping");
  r.keys(root, "",
         {"schema", "name", "robot", "obstacles", "config", "rrt", "workspace",
          "queries"});
  const std::string schema = r.text(r.need(root, "", "schema"), "schema");
  if (schema != kScenarioSchema) {
    r.fail(root["schema"], "schema",
           "unsupported schema '" + schema + "' (expected " + kScenarioSchema +
               ")");
  }
  Scenario s;
  s.name = root["name"] ? r.text(root["name"], "name") : std::string("unnamed");

  const YAML::Node robot = r.need(root, "", "robot");
  r.keys(robot, "robot", {"type", "joints", "links", "base", "ee_offset"});
  const std::string type = r.text(r.need(robot, "robot", "type"), "robot.type");
  if (type == "point") {
    s.point_robot = true;
    s.chain = point_robot_chain();
    s.config.task = TaskMode::position;
  } else if (type == "chain") {
    s.chain = detail::read_chain(r, robot, "robot");
  } else {
    r.fail(robot["type"], "robot.type", "expected point or chain, got '" + type + "'");
  }

  if (root["obstacles"]) {
    const YAML::Node obs = root["obstacles"];
    if (!obs.IsSequence()) r.fail(obs, "obstacles", "expected a list");
    for (std::size_t k = 0; k < obs.size(); ++k) {
      const std::string f = "obstacles[" + std::to_string(k) + "]";
      s.obstacles.push_back(detail::read_obstacle(r, obs[k], f));
      for (std::size_t j = 0; j + 1 < s.obstacles.size(); ++j) {
        if (s.obstacles[j].id == s.obstacles.back().id) {
          r.fail(obs[k], f + ".id", "duplicate obstacle id '" + s.obstacles[j].id + "'");
        }
      }
    }
  }
  if (root["config"]) detail::read_config(r, root["config"], "config", s);
  if (s.point_robot && s.config.task != TaskMode::position) {
    r.fail(root["config"], "config.task", "a point robot only supports task: position");
  }
  if (root["rrt"]) detail::read_rrt(r, root["rrt"], "rrt", s.rrt);
  if (root["workspace"]) {
    const YAML::Node w = root["workspace"];
    r.keys(w, "workspace", {"min", "max"});
    s.rrt.workspace.min = r.vec3(r.need(w, "workspace", "min"), "workspace.min");
    s.rrt.workspace.max = r.vec3(r.need(w, "workspace", "max"), "workspace.max");
  }
  try {
    s.rrt.validate();
  } catch (const InvalidInput& e) {
    r.fail(root["rrt"] ? root["rrt"] : root, "rrt", e.what());
  }

  const YAML::Node queries = r.need(root, "", "queries");
  if (!queries.IsSequence() || queries.size() == 0) {
    r.fail(queries, "queries", "at least one query is required");
  }
  for (std::size_t k = 0; k < queries.size(); ++k) {
    const std::string f = "queries[" + std::to_string(k) + "]";
    s.queries.push_back(detail::read_query(r, queries[k], f, s));
    for (std::size_t j = 0; j + 1 < s.queries.size(); ++j) {
      if (s.queries[j].name == s.queries.back().name) {
        r.fail(queries[k], f + ".name", "duplicate query name");
      }
    }
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

namespace detail {

template <typename V>
void emit_vector(YAML::Emitter& e, const V& v) {
  e << YAML::Flow << YAML::BeginSeq;
  for (Eigen::Index i = 0; i < v.size(); ++i) e << v(i);
  e << YAML::EndSeq;
}

inline void emit_pose(YAML::Emitter& e, const PoseVector& p) {
  e << YAML::Flow << YAML::BeginMap << YAML::Key << "p" << YAML::Value;
  emit_vector(e, p.p);
  e << YAML::Key << "q" << YAML::Value << YAML::Flow << YAML::BeginSeq << p.Q.w()
    << p.Q.x() << p.Q.y() << p.Q.z() << YAML::EndSeq << YAML::EndMap;
}

inline void emit_obstacle(YAML::Emitter& e, const Obstacle& o) {
  e << YAML::Flow << YAML::BeginMap << YAML::Key << "id" << YAML::Value << o.id;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          e << YAML::Key << "type" << YAML::Value << "sphere" << YAML::Key
            << "center" << YAML::Value;
          emit_vector(e, s.center);
          e << YAML::Key << "radius" << YAML::Value << s.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          e << YAML::Key << "type" << YAML::Value << "box" << YAML::Key << "min"
            << YAML::Value;
          emit_vector(e, s.min);
          e << YAML::Key << "max" << YAML::Value;
          emit_vector(e, s.max);
        } else {
          constexpr bool wall = std::is_same_v<T, Wall>;
          e << YAML::Key << "type" << YAML::Value << (wall ? "wall" : "capsule")
            << YAML::Key << "a" << YAML::Value;
          emit_vector(e, s.a);
          e << YAML::Key << "b" << YAML::Value;
          emit_vector(e, s.b);
          if constexpr (wall) {
            e << YAML::Key << "thickness" << YAML::Value << s.thickness;
          } else {
            e << YAML::Key << "radius" << YAML::Value << s.radius;
          }
        }
      },
      o.shape);
  e << YAML::EndMap;
}

}  // namespace detail

/// Serializes a scenario in canonical form; every double is written with 17
/// significant digits, so parse_scenario(write_scenario(s)) == s.
inline std::string write_scenario(const Scenario& s) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "schema" << YAML::Value << kScenarioSchema;
  e << YAML::Key << "name" << YAML::Value << s.name;
  e << YAML::Key << "robot" << YAML::Value << YAML::BeginMap;
  if (s.point_robot) {
    e << YAML::Key << "type" << YAML::Value << "point";
  } else {
    e << YAML::Key << "type" << YAML::Value << "chain";
    e << YAML::Key << "joints" << YAML::Value << YAML::BeginSeq;
    for (const Joint& j : s.chain.joints) {
      e << YAML::Flow << YAML::BeginMap << YAML::Key << "type" << YAML::Value
        << (j.type == JointType::revolute ? "revolute" : "prismatic")
        << YAML::Key << "axis" << YAML::Value;
      detail::emit_vector(e, j.axis);
      e << YAML::Key << "origin" << YAML::Value;
      detail::emit_vector(e, j.origin);
      e << YAML::Key << "limits" << YAML::Value << YAML::Flow << YAML::BeginSeq
        << j.lower << j.upper << YAML::EndSeq << YAML::EndMap;
    }
    e << YAML::EndSeq;
    e << YAML::Key << "links" << YAML::Value << YAML::BeginSeq;
    for (std::size_t k = 0; k < s.chain.links.size(); ++k) {
      const LinkGeometry& l = s.chain.links[k];
      e << YAML::Flow << YAML::BeginMap << YAML::Key << "a" << YAML::Value;
      detail::emit_vector(e, l.a);
      e << YAML::Key << "b" << YAML::Value;
      detail::emit_vector(e, l.b);
      e << YAML::Key << "radius" << YAML::Value << l.radius;
      if (!s.chain.collides(static_cast<int>(k))) {
        e << YAML::Key << "passive" << YAML::Value << true;
      }
      e << YAML::EndMap;
    }
    e << YAML::EndSeq;
    e << YAML::Key << "base" << YAML::Value;
    detail::emit_pose(e, s.chain.base);
    e << YAML::Key << "ee_offset" << YAML::Value;
    detail::emit_pose(e, s.chain.ee_offset);
  }
  e << YAML::EndMap;

  e << YAML::Key << "obstacles" << YAML::Value << YAML::BeginSeq;
  for (const Obstacle& o : s.obstacles) detail::emit_obstacle(e, o);
  e << YAML::EndSeq;

  const PlannerConfig& c = s.config;
  e << YAML::Key << "config" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "tau" << YAML::Value << c.tau;
  e << YAML::Key << "h" << YAML::Value << c.h;
  e << YAML::Key << "eps" << YAML::Value << c.eps;
  if (c.d_active) e << YAML::Key << "d_active" << YAML::Value << *c.d_active;
  e << YAML::Key << "pos_tol" << YAML::Value << c.pos_tol;
  e << YAML::Key << "ori_tol" << YAML::Value << c.ori_tol;
  e << YAML::Key << "stall_tol" << YAML::Value << c.stall_tol;
  e << YAML::Key << "stall_window" << YAML::Value << c.stall_window;
  e << YAML::Key << "max_iters" << YAML::Value << c.max_iters;
  e << YAML::Key << "lambda" << YAML::Value << c.lambda;
  e << YAML::Key << "mode" << YAML::Value << mode_name(c.mode);
  e << YAML::Key << "task" << YAML::Value
    << (c.task == TaskMode::full ? "full" : "position");
  e << YAML::Key << "refine_iters" << YAML::Value << c.refine_iters;
  e << YAML::Key << "clearance_corrections" << YAML::Value
    << c.clearance_corrections;
  e << YAML::Key << "nullspace_min_gain" << YAML::Value << c.nullspace_min_gain;
  e << YAML::Key << "k_p" << YAML::Value << s.k_p;
  e << YAML::EndMap;

  e << YAML::Key << "rrt" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "goal_bias" << YAML::Value << s.rrt.goal_bias;
  e << YAML::Key << "max_nodes" << YAML::Value << s.rrt.max_nodes;
  e << YAML::Key << "seed" << YAML::Value << s.rrt.seed;
  e << YAML::Key << "extend_iters" << YAML::Value << s.rrt.extend_iters;
  e << YAML::Key << "w_ori" << YAML::Value << s.rrt.w_ori;
  e << YAML::EndMap;
  e << YAML::Key << "workspace" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "min" << YAML::Value;
  detail::emit_vector(e, s.rrt.workspace.min);
  e << YAML::Key << "max" << YAML::Value;
  detail::emit_vector(e, s.rrt.workspace.max);
  e << YAML::EndMap;

  e << YAML::Key << "queries" << YAML::Value << YAML::BeginSeq;
  for (const Query& q : s.queries) {
    e << YAML::BeginMap << YAML::Key << "name" << YAML::Value << q.name;
    if (s.point_robot) {
      e << YAML::Key << "start" << YAML::Value;
      detail::emit_vector(e, q.x_start);
      e << YAML::Key << "goal" << YAML::Value;
      detail::emit_vector(e, q.x_goal);
    } else {
      if (q.theta_start) {
        e << YAML::Key << "theta_start" << YAML::Value;
        detail::emit_vector(e, *q.theta_start);
      }
      if (q.start) {
        e << YAML::Key << "start" << YAML::Value;
        detail::emit_pose(e, *q.start);
      }
      e << YAML::Key << "segments" << YAML::Value << YAML::BeginSeq;
      for (const Segment& seg : q.segments) {
        e << YAML::BeginMap << YAML::Key << "goal" << YAML::Value;
        detail::emit_pose(e, seg.goal);
        e << YAML::Key << "constraint" << YAML::Value << to_string(seg.constraint);
        e << YAML::Key << "planner" << YAML::Value << to_string(seg.planner);
        if (seg.mode) e << YAML::Key << "mode" << YAML::Value << mode_name(*seg.mode);
        e << YAML::EndMap;
      }
      e << YAML::EndSeq;
    }
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

/// 64-bit FNV-1a, used to fingerprint the canonical scenario text.
inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace screwplan

#endif  // SCREWPLAN_SCENARIO_HPP_
