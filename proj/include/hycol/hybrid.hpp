#ifndef HYCOL_HYBRID_HPP
#define HYCOL_HYBRID_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hycol/redesign.hpp"
#include "hycol/scenario.hpp"
#include "hycol/types.hpp"

namespace hycol {

enum class Mode : int { Predefined = 0, Local = 1 };

/// PredefinedOnly keeps the collision physics but never imposes impulses or local phases.
enum class RunMode { PredefinedOnly, Redesigned };

const char* to_string(RunMode m);

struct RobotHybridState {
  int id = 0;
  RobotState xi;
  Mode q = Mode::Predefined;
  std::optional<LocalPhase> phase;  // engaged iff q == Local
};

struct HybridState {
  std::vector<RobotHybridState> robots;
  double t = 0.0;
  std::int64_t jumps = 0;
};

// ---- trace ----------------------------------------------------------------

struct SampleRecord {
  double t = 0.0;
  int robot = 0;
  RobotState xi;
  ControlInput u;
  Mode q = Mode::Predefined;
  double clearance = 0.0;  // smallest gap to any other body
};

struct CollisionSide {
  int id = 0;
  double theta_pre = 0.0;
  double speed_pre = 0.0;
  double theta_post = 0.0;
  double speed_post = 0.0;
  bool redesign = false;
};

struct CollisionRecord {
  double t = 0.0;
  int robot = 0;
  int other = 0;
  Vec2 contact_point;  // robot's centre at impact
  double w = 0.0;
  Mode q = Mode::Predefined;
  CollisionSide self;
  std::optional<CollisionSide> other_robot;
  /// Kinetic energy along the contact normal before / after; NaN when a mass is unbounded.
  double normal_energy_pre = 0.0;
  double normal_energy_post = 0.0;
};

struct ImpulseRecord {
  double t = 0.0;
  int robot = 0;
  int other = 0;
  Vec2 position;
  double theta_is = 0.0;
  double delta_theta = 0.0;
  double local_speed = 0.0;
  double duration = 0.0;
};

struct SwitchRecord {
  double t = 0.0;
  int robot = 0;
  int other = 0;  // body the local phase escaped from
  RobotState xi;
  Mode from = Mode::Predefined;
  Mode to = Mode::Predefined;
};

struct TargetRecord {
  double t = 0.0;
  int robot = 0;
  RobotState xi;
  bool reached = true;  // false marks leaving the target tolerance again
};

struct FaultRecord {
  double t = 0.0;
  bool fatal = true;
  std::string reason;
};

using TraceRecord =
    std::variant<SampleRecord, CollisionRecord, ImpulseRecord, SwitchRecord, TargetRecord, FaultRecord>;

struct Trace {
  std::vector<TraceRecord> records;
};

enum class SimStatus { Completed, TimedOut, Faulted };

const char* to_string(SimStatus s);

struct SimResult {
  Trace trace;
  SimStatus status = SimStatus::TimedOut;
  HybridState final_state;
};

// ---- flow and events --------------------------------------------------------

/// One classical RK4 step of the unicycle under a held input.
RobotState step_flow(const RobotState& xi, const ControlInput& u, double dt);

/// A body moving under a held input over one step. Obstacles carry u = 0.
struct MovingBody {
  int id = 0;
  RobotState xi;
  ControlInput u;
  double radius = 1.0;
  bool is_robot = false;
};

struct Event {
  double tau = 0.0;  // offset from the step start
  int i = 0;         // robot
  int j = 0;         // other body
  bool approaching = true;
  bool simultaneous = false;  // another pair crossed within the localisation tolerance
};

inline constexpr double kEventTimeTolerance = 1e-12;

/// Earliest contact crossing over [0, h] among robot/body pairs, localised by bisection
/// on the integrated flow. Pairs in `skip` (as (i, j)) are ignored.
/// Throws OverlapError if a pair starts the step interpenetrating beyond the contact tolerance.
std::optional<Event> detect_event(std::span<const MovingBody> bodies, double h,
                                  std::span<const std::pair<int, int>> skip = {});

// ---- executor ---------------------------------------------------------------

SimResult simulate(const Scenario& s, RunMode mode);

struct RobotMetrics {
  int id = 0;
  bool reached = false;
  std::optional<double> completion_time;
  int collisions = 0;
  int impulses = 0;
  std::optional<double> min_clearance;
};

struct Metrics {
  std::vector<RobotMetrics> robots;
  std::int64_t total_collisions = 0;
  std::int64_t total_jumps = 0;
  int warnings = 0;
  bool fault = false;
  std::string fault_reason;
  double final_time = 0.0;
};

/// Pure fold over a trace.
Metrics metrics(const Trace& tr);

}  // namespace hycol

#endif  // HYCOL_HYBRID_HPP
