#include "hycol/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hycol/errors.hpp"

namespace hycol {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing required field");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(path, "expected a finite number");
  return d;
}

double number_field(const json& obj, const std::string& key, const std::string& path) {
  return as_number(require(obj, key, path), path + "." + key);
}

double optional_number(const json& obj, const std::string& key, const std::string& path,
                       double fallback) {
  if (!obj.contains(key)) return fallback;
  return as_number(obj.at(key), path + "." + key);
}

int parse_robot_key(const std::string& key, const std::string& path) {
  std::size_t used = 0;
  int id = 0;
  try {
    id = std::stoi(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != key.size() || id <= 0) throw SchemaError(path + "." + key, "expected a robot id");
  return id;
}

WorkspaceRect parse_workspace(const json& w) {
  const std::string p = "workspace";
  return WorkspaceRect{number_field(w, "x_min", p), number_field(w, "x_max", p),
                       number_field(w, "y_min", p), number_field(w, "y_max", p)};
}

Body parse_body(const json& b, const std::string& p) {
  Body body;
  const json& id = require(b, "id", p);
  if (!id.is_number_integer() || id.get<long long>() <= 0)
    throw SchemaError(p + ".id", "expected a positive integer");
  body.id = static_cast<int>(id.get<long long>());
  const std::string path = "bodies[id=" + std::to_string(body.id) + "]";

  const json& kind = require(b, "kind", path);
  if (kind == "robot") {
    body.kind = BodyKind::Robot;
  } else if (kind == "obstacle") {
    body.kind = BodyKind::Obstacle;
  } else {
    throw SchemaError(path + ".kind", "expected \"robot\" or \"obstacle\"");
  }
  if (body.is_robot() && body.id > 2)
    throw SchemaError(path + ".id", "robot ids are 1 and 2");
  if (!body.is_robot() && body.id < 3)
    throw SchemaError(path + ".id", "obstacle ids start at 3");

  body.radius = number_field(b, "radius", path);
  if (!(body.radius > 0.0)) throw SchemaError(path + ".radius", "radius must be positive");

  if (b.contains("mass")) {
    const json& m = b.at("mass");
    if (m.is_string()) {
      if (m != "unbounded") throw SchemaError(path + ".mass", "expected a number or \"unbounded\"");
      body.mass = Mass::unbounded();
    } else {
      double kg = as_number(m, path + ".mass");
      if (!(kg > 0.0)) throw SchemaError(path + ".mass", "mass must be positive");
      body.mass = Mass::finite(kg);
    }
  } else {
    body.mass = body.is_robot() ? Mass::finite(1.0) : Mass::unbounded();
  }

  body.pose.x = number_field(b, "x", path);
  body.pose.y = number_field(b, "y", path);
  body.pose.theta = body.is_robot() ? optional_number(b, "theta", path, 0.0) : 0.0;
  return body;
}

ControllerParams parse_params(const json& j) {
  const std::string p = "params";
  ControllerParams params;
  params.rho = number_field(j, "rho", p);
  params.sigma1 = number_field(j, "sigma1", p);
  params.sigma2 = number_field(j, "sigma2", p);
  params.sigma3 = number_field(j, "sigma3", p);
  params.max_v = number_field(j, "mv", p);
  params.max_w = number_field(j, "mw", p);
  if (j.contains("delta")) {
    const json& d = j.at("delta");
    if (d.is_number()) {
      double value = as_number(d, p + ".delta");
      params.delta[1] = value;
      params.delta[2] = value;
    } else if (d.is_object()) {
      for (const auto& [key, value] : d.items())
        params.delta[parse_robot_key(key, p + ".delta")] = as_number(value, p + ".delta." + key);
    } else {
      throw SchemaError(p + ".delta", "expected a number or an object keyed by robot id");
    }
  }
  params.local_speed = optional_number(j, "v_local", p, 0.5 * params.max_v);
  return params;
}

SimSettings parse_sim(const json& j) {
  const std::string p = "sim";
  SimSettings sim;
  if (!j.is_object()) throw SchemaError(p, "expected an object");
  sim.dt = optional_number(j, "dt", p, sim.dt);
  sim.t_max = optional_number(j, "t_max", p, sim.t_max);
  sim.target_tolerance = optional_number(j, "target_tolerance", p, sim.target_tolerance);
  if (j.contains("jump_cap")) {
    const json& cap = j.at("jump_cap");
    if (cap.is_number_integer()) {
      sim.jump_cap = cap.get<std::int64_t>();
    } else if (cap.is_number_float() && std::floor(cap.get<double>()) == cap.get<double>() &&
               std::isfinite(cap.get<double>())) {
      sim.jump_cap = static_cast<std::int64_t>(cap.get<double>());
    } else {
      throw SchemaError(p + ".jump_cap", "expected an integer");
    }
  }
  return sim;
}

}  // namespace

std::vector<const Body*> Scenario::robots() const {
  std::vector<const Body*> out;
  for (const Body& b : bodies)
    if (b.is_robot()) out.push_back(&b);
  return out;
}

std::vector<const Body*> Scenario::obstacles() const {
  std::vector<const Body*> out;
  for (const Body& b : bodies)
    if (!b.is_robot()) out.push_back(&b);
  return out;
}

const Body* Scenario::find(int id) const {
  for (const Body& b : bodies)
    if (b.id == id) return &b;
  return nullptr;
}

Scenario load_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed scenario document: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("$", "expected a JSON object");

  Scenario s;
  s.workspace = parse_workspace(require(doc, "workspace", "$"));

  const json& bodies = require(doc, "bodies", "$");
  if (!bodies.is_array()) throw SchemaError("bodies", "expected an array");
  std::set<int> ids;
  for (std::size_t k = 0; k < bodies.size(); ++k) {
    Body b = parse_body(bodies[k], "bodies[" + std::to_string(k) + "]");
    if (!ids.insert(b.id).second)
      throw SchemaError("bodies[id=" + std::to_string(b.id) + "]", "duplicate body id");
    s.bodies.push_back(b);
  }
  std::sort(s.bodies.begin(), s.bodies.end(),
            [](const Body& a, const Body& b) { return a.id < b.id; });

  const json& targets = require(doc, "targets", "$");
  if (!targets.is_object()) throw SchemaError("targets", "expected an object keyed by robot id");
  for (const auto& [key, value] : targets.items()) {
    int id = parse_robot_key(key, "targets");
    const std::string p = "targets." + key;
    s.targets[id] = RobotState{number_field(value, "x", p), number_field(value, "y", p),
                               number_field(value, "theta", p)};
  }

  s.params = parse_params(require(doc, "params", "$"));
  if (doc.contains("sim")) s.sim = parse_sim(doc.at("sim"));
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["workspace"] = {{"x_min", s.workspace.x_min},
                      {"x_max", s.workspace.x_max},
                      {"y_min", s.workspace.y_min},
                      {"y_max", s.workspace.y_max}};
  json bodies = json::array();
  for (const Body& b : s.bodies) {
    json jb = {{"id", b.id},
               {"kind", b.is_robot() ? "robot" : "obstacle"},
               {"radius", b.radius},
               {"x", b.pose.x},
               {"y", b.pose.y}};
    if (b.mass.is_unbounded()) {
      jb["mass"] = "unbounded";
    } else {
      jb["mass"] = b.mass.kg();
    }
    if (b.is_robot()) jb["theta"] = b.pose.theta;
    bodies.push_back(std::move(jb));
  }
  doc["bodies"] = std::move(bodies);
  json targets = json::object();
  for (const auto& [id, t] : s.targets)
    targets[std::to_string(id)] = {{"x", t.x}, {"y", t.y}, {"theta", t.theta}};
  doc["targets"] = std::move(targets);
  json delta = json::object();
  for (const auto& [id, d] : s.params.delta) delta[std::to_string(id)] = d;
  doc["params"] = {{"rho", s.params.rho},       {"sigma1", s.params.sigma1},
                   {"sigma2", s.params.sigma2}, {"sigma3", s.params.sigma3},
                   {"mv", s.params.max_v},      {"mw", s.params.max_w},
                   {"delta", delta},            {"v_local", s.params.local_speed}};
  doc["sim"] = {{"dt", s.sim.dt},
                {"t_max", s.sim.t_max},
                {"target_tolerance", s.sim.target_tolerance},
                {"jump_cap", s.sim.jump_cap}};
  return doc.dump(2) + "\n";
}

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  auto flag = [&out](std::string path, std::string message) {
    out.push_back({std::move(path), std::move(message)});
  };

  const WorkspaceRect& w = s.workspace;
  if (!(w.x_min < w.x_max)) flag("workspace", "x_min must be below x_max");
  if (!(w.y_min < w.y_max)) flag("workspace", "y_min must be below y_max");

  const auto robots = s.robots();
  if (robots.empty() || robots.size() > 2) flag("bodies", "expected one or two robots");

  double heaviest_robot = 0.0;
  for (const Body* r : robots) {
    const std::string p = "bodies[id=" + std::to_string(r->id) + "]";
    if (r->mass.is_unbounded()) {
      flag(p + ".mass", "robots must have finite mass");
    } else {
      heaviest_robot = std::max(heaviest_robot, r->mass.kg());
    }
    if (!w.contains(r->position())) flag(p, "robot starts outside the workspace");
    if (!s.targets.contains(r->id)) flag("targets." + std::to_string(r->id), "missing target");
  }
  for (const auto& [id, t] : s.targets) {
    const Body* b = s.find(id);
    if (b == nullptr || !b->is_robot())
      flag("targets." + std::to_string(id), "target for a non-robot id");
    if (!std::isfinite(t.x) || !std::isfinite(t.y) || !std::isfinite(t.theta))
      flag("targets." + std::to_string(id), "target must be finite");
  }
  for (const Body* o : s.obstacles()) {
    if (!o->mass.is_unbounded() && o->mass.kg() < kObstacleMassRatio * heaviest_robot)
      flag("bodies[id=" + std::to_string(o->id) + "].mass",
           "obstacle mass must be unbounded or at least 100x the heaviest robot");
  }
  for (std::size_t a = 0; a < s.bodies.size(); ++a) {
    for (std::size_t b = a + 1; b < s.bodies.size(); ++b) {
      const Body& p = s.bodies[a];
      const Body& q = s.bodies[b];
      if (!(norm(p.position() - q.position()) > p.radius + q.radius))
        flag("bodies[id=" + std::to_string(p.id) + ",id=" + std::to_string(q.id) + "]",
             "bodies overlap initially");
    }
  }

  const ControllerParams& c = s.params;
  if (!(c.rho > 0.0)) flag("params.rho", "must be positive");
  if (!(c.sigma1 >= 1.0)) flag("params.sigma1", "must be at least 1");
  if (!(c.sigma2 > 0.0)) flag("params.sigma2", "must be positive");
  if (!(c.sigma3 > 0.0)) flag("params.sigma3", "must be positive");
  if (!(c.max_v > 0.0)) flag("params.mv", "must be positive");
  if (!(c.max_w > 0.0)) flag("params.mw", "must be positive");
  for (const auto& [id, d] : c.delta)
    if (!(d >= 0.0 && d < 1.0)) flag("params.delta." + std::to_string(id), "must lie in [0, 1)");
  if (!(c.local_speed > 0.0 && c.local_speed <= c.max_v))
    flag("params.v_local", "must lie in (0, mv]");

  if (!(s.sim.dt > 0.0)) flag("sim.dt", "must be positive");
  if (!(s.sim.t_max > 0.0)) flag("sim.t_max", "must be positive");
  if (!(s.sim.target_tolerance > 0.0)) flag("sim.target_tolerance", "must be positive");
  if (!(s.sim.jump_cap > 0)) flag("sim.jump_cap", "must be positive");
  return out;
}

}  // namespace hycol
