#include "hycol/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hycol/collision.hpp"
#include "hycol/controller.hpp"
#include "hycol/errors.hpp"
#include "hycol/frames.hpp"

namespace hycol {

const char* to_string(RunMode m) {
  return m == RunMode::PredefinedOnly ? "predefined" : "redesigned";
}

const char* to_string(SimStatus s) {
  switch (s) {
    case SimStatus::Completed: return "completed";
    case SimStatus::TimedOut: return "timed_out";
    case SimStatus::Faulted: return "faulted";
  }
  return "unknown";
}

RobotState step_flow(const RobotState& xi, const ControlInput& u, double dt) {
  auto f = [&u](double theta) {
    return RobotState{u.v * std::cos(theta), u.v * std::sin(theta), u.w};
  };
  const RobotState k1 = f(xi.theta);
  const RobotState k2 = f(xi.theta + 0.5 * dt * k1.theta);
  const RobotState k3 = f(xi.theta + 0.5 * dt * k2.theta);
  const RobotState k4 = f(xi.theta + dt * k3.theta);
  return RobotState{
      xi.x + dt * ((k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x) / 6.0),
      xi.y + dt * ((k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y) / 6.0),
      xi.theta + dt * ((k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta) / 6.0)};
}

// ---- event detection --------------------------------------------------------

namespace {

RobotState pose_at(const MovingBody& b, double tau) {
  if (!b.is_robot || tau == 0.0) return b.xi;
  return step_flow(b.xi, b.u, tau);
}

double gap_at(const MovingBody& a, const MovingBody& b, double tau) {
  return norm(pose_at(a, tau).position() - pose_at(b, tau).position()) - (a.radius + b.radius);
}

bool approaching_at(const MovingBody& a, const MovingBody& b, double tau) {
  const RobotState pa = pose_at(a, tau);
  const RobotState pb = pose_at(b, tau);
  const LocalFrame f = build_local_frame(pa.position(), pb.position());
  const double va = a.u.v * std::sin(pa.theta - f.phi);
  const double vb = b.is_robot ? b.u.v * std::sin(pb.theta - f.phi) : 0.0;
  return va > vb;
}

bool skipped(std::span<const std::pair<int, int>> skip, int i, int j) {
  return std::find(skip.begin(), skip.end(), std::pair<int, int>{i, j}) != skip.end();
}

std::optional<double> pair_crossing(const MovingBody& a, const MovingBody& b, double h) {
  const double g0 = gap_at(a, b, 0.0);
  if (g0 < -kContactTolerance)
    throw OverlapError("bodies " + std::to_string(a.id) + " and " + std::to_string(b.id) +
                       " interpenetrate by " + std::to_string(-g0) + " m");
  if (g0 < 0.0) {
    // Touching within tolerance: only an approaching pair is an event.
    if (approaching_at(a, b, 0.0)) return 0.0;
    return std::nullopt;
  }
  double lo = 0.0;
  double hi = -1.0;
  for (double tau : {0.5 * h, h}) {
    if (gap_at(a, b, tau) < 0.0) {
      hi = tau;
      break;
    }
    lo = tau;
  }
  if (hi < 0.0) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > kEventTimeTolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gap_at(a, b, mid) < 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

}  // namespace

std::optional<Event> detect_event(std::span<const MovingBody> bodies, double h,
                                  std::span<const std::pair<int, int>> skip) {
  std::vector<Event> found;
  for (const MovingBody& a : bodies) {
    if (!a.is_robot) continue;
    for (const MovingBody& b : bodies) {
      if (b.id == a.id || (b.is_robot && b.id < a.id)) continue;
      if (skipped(skip, a.id, b.id)) continue;
      if (auto tau = pair_crossing(a, b, h)) {
        found.push_back(Event{*tau, a.id, b.id, approaching_at(a, b, *tau), false});
      }
    }
  }
  if (found.empty()) return std::nullopt;
  double earliest = std::numeric_limits<double>::infinity();
  for (const Event& e : found) earliest = std::min(earliest, e.tau);
  std::optional<Event> best;
  int tied = 0;
  for (const Event& e : found) {
    if (e.tau - earliest > kEventTimeTolerance) continue;
    ++tied;
    if (!best || std::pair{e.i, e.j} < std::pair{best->i, best->j}) best = e;
  }
  best->simultaneous = tied > 1;
  return best;
}

// ---- executor ---------------------------------------------------------------

namespace {

struct RobotInfo {
  int id;
  double radius;
  Mass mass;
  RobotState target;
  double delta;
};

class Executor {
 public:
  Executor(const Scenario& s, RunMode mode) : scenario_(s), mode_(mode) {
    for (const Body* r : s.robots()) {
      infos_.push_back({r->id, r->radius, r->mass, s.targets.at(r->id), s.params.delta_for(r->id)});
      state_.robots.push_back({r->id, r->pose, Mode::Predefined, std::nullopt});
      at_target_.push_back(false);
    }
    for (const Body* o : s.obstacles()) obstacles_.push_back(*o);
  }

  SimResult run();

 private:
  std::vector<Body> snapshot() const;
  std::vector<BodyPosition> positions() const;
  std::vector<ControlInput> controls() const;
  double clearance(std::size_t k) const;
  void record_samples(const std::vector<ControlInput>& u);
  bool update_targets();
  void advance(const std::vector<ControlInput>& u, double h);
  void handle_collision(const Event& ev, const std::vector<ControlInput>& u);
  void expire_phases();
  EscapeChoice escape_for(std::size_t k, Vec2 other_center, double other_radius) const;
  void enter_local(std::size_t k, const EscapeChoice& choice, int other_id, bool other_is_robot,
                   double other_radius, double theta_plus);
  std::size_t index_of(int robot_id) const;
  void fault(std::string reason) {
    trace_.records.push_back(FaultRecord{state_.t, true, std::move(reason)});
    status_ = SimStatus::Faulted;
  }
  bool cap_reached() {
    if (state_.jumps < scenario_.sim.jump_cap) return false;
    fault("non-convergent: jump cap of " + std::to_string(scenario_.sim.jump_cap) + " reached");
    return true;
  }

  const Scenario& scenario_;
  RunMode mode_;
  std::vector<RobotInfo> infos_;
  std::vector<Body> obstacles_;
  HybridState state_;
  std::vector<bool> at_target_;
  Trace trace_;
  SimStatus status_ = SimStatus::TimedOut;
};

std::size_t Executor::index_of(int robot_id) const {
  for (std::size_t k = 0; k < infos_.size(); ++k)
    if (infos_[k].id == robot_id) return k;
  throw Error("unknown robot id " + std::to_string(robot_id));
}

std::vector<Body> Executor::snapshot() const {
  std::vector<Body> bodies;
  for (std::size_t k = 0; k < infos_.size(); ++k)
    bodies.push_back(Body{infos_[k].id, BodyKind::Robot, infos_[k].radius, infos_[k].mass,
                          state_.robots[k].xi});
  bodies.insert(bodies.end(), obstacles_.begin(), obstacles_.end());
  return bodies;
}

std::vector<BodyPosition> Executor::positions() const {
  std::vector<BodyPosition> out;
  for (std::size_t k = 0; k < infos_.size(); ++k)
    out.push_back({infos_[k].id, state_.robots[k].xi.position(), infos_[k].radius});
  for (const Body& o : obstacles_) out.push_back({o.id, o.position(), o.radius});
  return out;
}

std::vector<ControlInput> Executor::controls() const {
  const std::vector<Body> bodies = snapshot();
  std::vector<ControlInput> u;
  for (std::size_t k = 0; k < infos_.size(); ++k) {
    const RobotHybridState& r = state_.robots[k];
    if (r.q == Mode::Local) {
      u.push_back(local_control(*r.phase));
    } else {
      u.push_back(predefined_control(r.id, r.xi, infos_[k].target, bodies, scenario_.params).u);
    }
  }
  return u;
}

double Executor::clearance(std::size_t k) const {
  double best = std::numeric_limits<double>::infinity();
  const Vec2 p = state_.robots[k].xi.position();
  for (const BodyPosition& b : positions()) {
    if (b.id == infos_[k].id) continue;
    best = std::min(best, norm(p - b.position) - infos_[k].radius - b.radius);
  }
  return best;
}

void Executor::record_samples(const std::vector<ControlInput>& u) {
  for (std::size_t k = 0; k < infos_.size(); ++k) {
    const RobotHybridState& r = state_.robots[k];
    trace_.records.push_back(SampleRecord{state_.t, r.id, r.xi, u[k], r.q, clearance(k)});
  }
}

bool Executor::update_targets() {
  bool all = true;
  for (std::size_t k = 0; k < infos_.size(); ++k) {
    const RobotHybridState& r = state_.robots[k];
    const RobotState& d = infos_[k].target;
    const double err =
        std::sqrt((r.xi.x - d.x) * (r.xi.x - d.x) + (r.xi.y - d.y) * (r.xi.y - d.y) +
                  (r.xi.theta - d.theta) * (r.xi.theta - d.theta));
    const bool inside = err <= scenario_.sim.target_tolerance && r.q == Mode::Predefined;
    if (inside != at_target_[k]) {
      trace_.records.push_back(TargetRecord{state_.t, r.id, r.xi, inside});
      at_target_[k] = inside;
    }
    all = all && inside;
  }
  return all;
}

void Executor::advance(const std::vector<ControlInput>& u, double h) {
  if (h <= 0.0) return;
  for (std::size_t k = 0; k < infos_.size(); ++k)
    state_.robots[k].xi = step_flow(state_.robots[k].xi, u[k], h);
}

EscapeChoice Executor::escape_for(std::size_t k, Vec2 other_center, double other_radius) const {
  const Vec2 p = state_.robots[k].xi.position();
  const double reach = infos_[k].radius + other_radius;
  const TangentRays rays = tangent_rays(other_center, p, reach);
  const Vec2 target{infos_[k].target.x, infos_[k].target.y};
  try {
    return select_escape_heading(rays, target);
  } catch (const GeometryError&) {
    // Struck while sitting on its target position: fall back to the first ray.
    EscapeChoice c;
    c.heading1 = rays.heading1;
    c.heading2 = rays.heading2;
    c.phi_ray1 = c.phi_ray2 = 0.5 * kPi;
    c.ray = 1;
    c.theta_is = rays.heading1;
    c.phi_sel = c.phi_ray1;
    return c;
  }
}

void Executor::enter_local(std::size_t k, const EscapeChoice& choice, int other_id,
                           bool other_is_robot, double other_radius, double theta_plus) {
  RobotHybridState& r = state_.robots[k];
  const RobotState inc = impulse(choice.theta_is, theta_plus);
  r.xi.theta = choice.theta_is;
  LocalPhase phase(other_id, r.xi.position(), choice.theta_is, scenario_.params.local_speed,
                   scenario_.params.max_v, separation_distance(other_is_robot, other_radius),
                   state_.t);
  trace_.records.push_back(ImpulseRecord{state_.t, r.id, other_id, r.xi.position(), choice.theta_is,
                                         inc.theta, phase.local_speed(), phase.duration()});
  const Mode before = r.q;
  r.phase = phase;
  r.q = Mode::Local;
  if (before != Mode::Local)
    trace_.records.push_back(SwitchRecord{state_.t, r.id, other_id, r.xi, before, Mode::Local});
}

void Executor::handle_collision(const Event& ev, const std::vector<ControlInput>& u) {
  const std::size_t ki = index_of(ev.i);
  const RobotHybridState& ri = state_.robots[ki];
  ContactBody bi{ri.id, ri.xi.position(), infos_[ki].radius, infos_[ki].mass, u[ki].v, ri.xi.theta, true};
  ContactBody bj;
  std::optional<std::size_t> kj;
  double delta_j = 0.0;
  for (std::size_t k = 0; k < infos_.size(); ++k)
    if (infos_[k].id == ev.j) kj = k;
  if (kj) {
    const RobotHybridState& rj = state_.robots[*kj];
    bj = ContactBody{rj.id, rj.xi.position(), infos_[*kj].radius, infos_[*kj].mass, u[*kj].v,
                     rj.xi.theta, true};
    delta_j = infos_[*kj].delta;
  } else {
    const auto it = std::find_if(obstacles_.begin(), obstacles_.end(),
                                 [&](const Body& o) { return o.id == ev.j; });
    bj = ContactBody{it->id, it->position(), it->radius, it->mass, 0.0, 0.0, false};
  }

  const ContactQuery q = make_contact_query(bi, bj);
  const CollisionOutcome out = resolve_collision(q, infos_[ki].delta, delta_j);

  CollisionRecord rec;
  rec.t = state_.t;
  rec.robot = ev.i;
  rec.other = ev.j;
  rec.contact_point = bi.position;
  rec.w = u[ki].w;
  rec.q = ri.q;
  rec.self = {out.i.id, out.i.theta_pre, out.i.speed_pre, out.i.theta_plus, out.i.speed_plus,
              out.i.redesign_needed};
  if (out.j)
    rec.other_robot = CollisionSide{out.j->id, out.j->theta_pre, out.j->speed_pre,
                                    out.j->theta_plus, out.j->speed_plus, out.j->redesign_needed};
  if (!bi.mass.is_unbounded() && !bj.mass.is_unbounded() && bj.is_robot) {
    const double mi = bi.mass.kg();
    const double mj = bj.mass.kg();
    rec.normal_energy_pre = 0.5 * mi * out.i.normal_pre * out.i.normal_pre +
                            0.5 * mj * out.j->normal_pre * out.j->normal_pre;
    rec.normal_energy_post =
        0.5 * mi * out.i.lambda * out.i.lambda + 0.5 * mj * out.j->lambda * out.j->lambda;
  } else {
    // Static partner: only the robot's normal energy is tracked.
    rec.normal_energy_pre = 0.5 * out.i.normal_pre * out.i.normal_pre;
    rec.normal_energy_post = 0.5 * out.i.lambda * out.i.lambda;
  }
  if (ev.simultaneous)
    trace_.records.push_back(
        FaultRecord{state_.t, false, "simultaneous collision events; earliest pair resolved first"});
  trace_.records.push_back(rec);
  ++state_.jumps;

  if (mode_ == RunMode::PredefinedOnly) {
    if (out.i.redesign_needed) state_.robots[ki].xi.theta = out.i.theta_plus;
    if (out.j && out.j->redesign_needed) state_.robots[*kj].xi.theta = out.j->theta_plus;
    return;
  }

  const bool redesign_i = out.i.redesign_needed;
  const bool redesign_j = out.j && out.j->redesign_needed;
  std::optional<EscapeChoice> ci;
  std::optional<EscapeChoice> cj;
  if (redesign_i) ci = escape_for(ki, bj.position, bj.radius);
  if (redesign_j) cj = escape_for(*kj, bi.position, bi.radius);
  if (ci && cj) {
    const Deconflicted d = deconflict_headings(*ci, *cj);
    ci = d.first;
    cj = d.second;
  }
  if (ci) enter_local(ki, *ci, bj.id, bj.is_robot, bj.radius, out.i.theta_plus);
  if (cj) enter_local(*kj, *cj, bi.id, true, bi.radius, out.j->theta_plus);
}

void Executor::expire_phases() {
  for (std::size_t k = 0; k < infos_.size(); ++k) {
    RobotHybridState& r = state_.robots[k];
    if (r.q != Mode::Local || state_.t < r.phase->end_time()) continue;
    const std::vector<BodyPosition> bodies = positions();
    const bool ready =
        r.phase->extensions() == 0
            ? reactivation_check(r.id, r.xi.position(), infos_[k].radius, bodies, *r.phase)
            : separated_from_all(r.id, r.xi.position(), infos_[k].radius, bodies);
    if (ready) {
      trace_.records.push_back(
          SwitchRecord{state_.t, r.id, r.phase->collided_id(), r.xi, Mode::Local, Mode::Predefined});
      r.phase.reset();
      r.q = Mode::Predefined;
      ++state_.jumps;
    } else if (!r.phase->extend()) {
      throw NonSeparableError("robot " + std::to_string(r.id) +
                              " could not separate within 10x the local phase duration");
    }
  }
}

SimResult Executor::run() {
  const double dt = scenario_.sim.dt;
  const auto n_steps = static_cast<std::int64_t>(std::ceil(scenario_.sim.t_max / dt - 1e-9));
  std::int64_t step = 0;
  bool sample_pending = true;

  try {
    while (true) {
      const std::vector<ControlInput> u = controls();
      if (sample_pending) {
        record_samples(u);
        sample_pending = false;
        if (update_targets()) {
          status_ = SimStatus::Completed;
          break;
        }
        if (step >= n_steps) {
          status_ = SimStatus::TimedOut;
          break;
        }
      }

      const double t_grid = static_cast<double>(step + 1) * dt;
      double t_end = t_grid;
      for (const RobotHybridState& r : state_.robots)
        if (r.q == Mode::Local) t_end = std::min(t_end, r.phase->end_time());
      const double h = std::max(0.0, t_end - state_.t);

      std::vector<MovingBody> moving;
      for (std::size_t k = 0; k < infos_.size(); ++k)
        moving.push_back({infos_[k].id, state_.robots[k].xi, u[k], infos_[k].radius, true});
      for (const Body& o : obstacles_) moving.push_back({o.id, o.pose, {}, o.radius, false});

      std::vector<std::pair<int, int>> skip;
      std::optional<Event> ev;
      while ((ev = detect_event(moving, h, skip)) && !ev->approaching)
        skip.emplace_back(ev->i, ev->j);  // grazing crossing with no normal approach

      if (ev) {
        advance(u, ev->tau);
        state_.t += ev->tau;
        handle_collision(*ev, u);
        if (cap_reached()) break;
        continue;
      }

      advance(u, h);
      state_.t = t_end;
      expire_phases();
      if (cap_reached()) break;
      if (t_end == t_grid) {
        ++step;
        state_.t = t_grid;
        sample_pending = true;
      }
    }
  } catch (const Error& e) {
    fault(e.what());
  }

  SimResult result;
  result.trace = std::move(trace_);
  result.status = status_;
  result.final_state = state_;
  return result;
}

}  // namespace

SimResult simulate(const Scenario& s, RunMode mode) {
  Executor ex(s, mode);
  return ex.run();
}

// ---- metrics ----------------------------------------------------------------

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Metrics metrics(const Trace& tr) {
  Metrics m;
  std::map<int, RobotMetrics> per;
  auto robot = [&per](int id) -> RobotMetrics& {
    RobotMetrics& r = per[id];
    r.id = id;
    return r;
  };
  for (const TraceRecord& rec : tr.records) {
    std::visit(overloaded{
                   [&](const SampleRecord& s) {
                     RobotMetrics& r = robot(s.robot);
                     if (!r.min_clearance || s.clearance < *r.min_clearance)
                       r.min_clearance = s.clearance;
                     m.final_time = std::max(m.final_time, s.t);
                   },
                   [&](const CollisionRecord& c) {
                     ++robot(c.robot).collisions;
                     if (c.other_robot) ++robot(c.other).collisions;
                     ++m.total_collisions;
                     ++m.total_jumps;
                   },
                   [&](const ImpulseRecord& i) { ++robot(i.robot).impulses; },
                   [&](const SwitchRecord& s) {
                     if (s.from == Mode::Local && s.to == Mode::Predefined) ++m.total_jumps;
                   },
                   [&](const TargetRecord& t) {
                     RobotMetrics& r = robot(t.robot);
                     r.reached = t.reached;
                     if (t.reached) {
                       r.completion_time = t.t;
                     } else {
                       r.completion_time.reset();
                     }
                   },
                   [&](const FaultRecord& f) {
                     if (f.fatal) {
                       m.fault = true;
                       m.fault_reason = f.reason;
                     } else {
                       ++m.warnings;
                     }
                     m.final_time = std::max(m.final_time, f.t);
                   },
               },
               rec);
  }
  for (auto& [id, r] : per) m.robots.push_back(r);
  return m;
}

}  // namespace hycol
