#include "hycol/trace_io.hpp"

#include <cstdio>
#include <variant>

namespace hycol {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string num(double v) { return format_number(v); }
std::string q_str(Mode q) { return q == Mode::Local ? "1" : "0"; }

struct Row {
  double t = 0.0;
  std::string type;
  std::string robot;
  std::string other;
  std::string x, y, theta, v, w, q;
  std::string extra;
};

void emit(const Row& r, std::ostream& out) {
  out << num(r.t) << ',' << r.type << ',' << r.robot << ',' << r.other << ',' << r.x << ','
      << r.y << ',' << r.theta << ',' << r.v << ',' << r.w << ',' << r.q << ',' << r.extra << '\n';
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n') c = ' ';
  return s;
}

Row to_row(const SampleRecord& s) {
  return {s.t, "sample", std::to_string(s.robot), "", num(s.xi.x), num(s.xi.y), num(s.xi.theta),
          num(s.u.v), num(s.u.w), q_str(s.q), "clearance=" + num(s.clearance)};
}

Row to_row(const CollisionRecord& c) {
  std::string extra = "theta_post=" + num(c.self.theta_post) + ";v_post=" + num(c.self.speed_post) +
                      ";redesign=" + (c.self.redesign ? "1" : "0");
  if (c.other_robot) {
    const CollisionSide& o = *c.other_robot;
    extra += ";other_theta_pre=" + num(o.theta_pre) + ";other_v_pre=" + num(o.speed_pre) +
             ";other_theta_post=" + num(o.theta_post) + ";other_v_post=" + num(o.speed_post) +
             ";other_redesign=" + (o.redesign ? "1" : "0");
  }
  extra += ";normal_energy_pre=" + num(c.normal_energy_pre) +
           ";normal_energy_post=" + num(c.normal_energy_post);
  return {c.t, "collision", std::to_string(c.robot), std::to_string(c.other),
          num(c.contact_point.x), num(c.contact_point.y), num(c.self.theta_pre),
          num(c.self.speed_pre), num(c.w), q_str(c.q), extra};
}

Row to_row(const ImpulseRecord& i) {
  return {i.t, "impulse", std::to_string(i.robot), std::to_string(i.other), num(i.position.x),
          num(i.position.y), num(i.theta_is), num(i.local_speed), num(0.0), "1",
          "delta_theta=" + num(i.delta_theta) + ";duration=" + num(i.duration)};
}

Row to_row(const SwitchRecord& s) {
  return {s.t, "switch", std::to_string(s.robot), std::to_string(s.other), num(s.xi.x),
          num(s.xi.y), num(s.xi.theta), "", "", q_str(s.to),
          "from=" + q_str(s.from) + ";to=" + q_str(s.to)};
}

Row to_row(const TargetRecord& t) {
  return {t.t, t.reached ? "target_reached" : "target_left", std::to_string(t.robot), "",
          num(t.xi.x), num(t.xi.y), num(t.xi.theta), "", "", "", ""};
}

Row to_row(const FaultRecord& f) {
  return {f.t, "fault", "", "", "", "", "", "", "", "",
          std::string("severity=") + (f.fatal ? "fatal" : "warning") + ";reason=" + sanitize(f.reason)};
}

}  // namespace

void write_trace_csv(const Trace& tr, std::ostream& out) {
  out << kTraceHeader << '\n';
  for (const TraceRecord& rec : tr.records)
    std::visit([&out](const auto& r) { emit(to_row(r), out); }, rec);
}

void write_plot_csv(const Trace& tr, int robot_id, std::ostream& out) {
  out << "t,x,y,theta,v,w\n";
  for (const TraceRecord& rec : tr.records) {
    const auto* s = std::get_if<SampleRecord>(&rec);
    if (s == nullptr || s->robot != robot_id) continue;
    out << num(s->t) << ',' << num(s->xi.x) << ',' << num(s->xi.y) << ',' << num(s->xi.theta)
        << ',' << num(s->u.v) << ',' << num(s->u.w) << '\n';
  }
}

nlohmann::json metrics_to_json(const Metrics& m) {
  nlohmann::json robots = nlohmann::json::array();
  for (const RobotMetrics& r : m.robots) {
    nlohmann::json jr = {{"id", r.id},
                         {"reached", r.reached},
                         {"collisions", r.collisions},
                         {"impulses", r.impulses}};
    jr["completion_time"] = r.completion_time ? nlohmann::json(*r.completion_time) : nlohmann::json();
    jr["min_clearance"] = r.min_clearance ? nlohmann::json(*r.min_clearance) : nlohmann::json();
    robots.push_back(std::move(jr));
  }
  return {{"robots", robots},
          {"total_collisions", m.total_collisions},
          {"total_jumps", m.total_jumps},
          {"warnings", m.warnings},
          {"fault", m.fault},
          {"fault_reason", m.fault_reason},
          {"final_time", m.final_time}};
}

}  // namespace hycol
