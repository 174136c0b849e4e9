#ifndef HYCOL_SCENARIO_HPP
#define HYCOL_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hycol/types.hpp"

namespace hycol {

struct WorkspaceRect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool contains(Vec2 p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  friend bool operator==(const WorkspaceRect&, const WorkspaceRect&) = default;
};

struct ControllerParams {
  double rho = 9.0;     // QP weight
  double sigma1 = 1.25; // gamma slope on the nonnegative half-line
  double sigma2 = 0.6;
  double sigma3 = 1.2;
  double max_v = 5.0;
  double max_w = 5.0;
  /// Collision energy-loss coefficient per robot id; robots without an entry use 0.
  std::map<int, double> delta;
  /// Constant linear speed of the post-collision local controller, in (0, max_v].
  double local_speed = 2.5;

  double delta_for(int robot_id) const {
    auto it = delta.find(robot_id);
    return it == delta.end() ? 0.0 : it->second;
  }
  friend bool operator==(const ControllerParams&, const ControllerParams&) = default;
};

struct SimSettings {
  double dt = 1e-3;
  double t_max = 60.0;
  double target_tolerance = 1e-2;
  std::int64_t jump_cap = 100000;
  friend bool operator==(const SimSettings&, const SimSettings&) = default;
};

struct Scenario {
  WorkspaceRect workspace;
  std::vector<Body> bodies;  // sorted by id
  std::map<int, RobotState> targets;
  ControllerParams params;
  SimSettings sim;

  std::vector<const Body*> robots() const;
  std::vector<const Body*> obstacles() const;
  const Body* find(int id) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct Violation {
  std::string path;
  std::string message;
};

/// Parses a scenario JSON document and applies defaults.
/// Throws ParseError on malformed text and SchemaError on schema mismatch.
Scenario load_scenario(std::string_view text);

/// Reads and parses a scenario file. I/O failures are reported as ParseError.
Scenario load_scenario_file(const std::string& path);

/// Emits a document that load_scenario maps back to an identical Scenario.
std::string serialize_scenario(const Scenario& s);

/// Ratio an obstacle's finite mass must exceed relative to the heaviest robot.
inline constexpr double kObstacleMassRatio = 100.0;

/// Physical-consistency checks; an empty result means the scenario may be simulated.
std::vector<Violation> validate_scenario(const Scenario& s);

}  // namespace hycol

#endif  // HYCOL_SCENARIO_HPP
