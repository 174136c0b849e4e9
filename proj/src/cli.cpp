#include "hycol/cli.hpp"

#include <filesystem>
#include <fstream>
#include <future>

#include "hycol/errors.hpp"
#include "hycol/scenario.hpp"
#include "hycol/trace_io.hpp"

namespace hycol::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Loads, overrides and validates; prints a one-line diagnostic per problem.
std::optional<Scenario> prepare(const RunConfig& cfg, std::ostream& diag) {
  Scenario s;
  try {
    s = load_scenario_file(cfg.scenario_path);
  } catch (const Error& e) {
    diag << "error: " << e.what() << '\n';
    return std::nullopt;
  }
  if (cfg.dt) {
    if (!(*cfg.dt > 0.0)) {
      diag << "error: --dt must be positive\n";
      return std::nullopt;
    }
    s.sim.dt = *cfg.dt;
  }
  if (cfg.t_max) {
    if (!(*cfg.t_max > 0.0)) {
      diag << "error: --t-max must be positive\n";
      return std::nullopt;
    }
    s.sim.t_max = *cfg.t_max;
  }
  const auto violations = validate_scenario(s);
  for (const Violation& v : violations) diag << "invalid: " << v.path << ": " << v.message << '\n';
  if (!violations.empty()) return std::nullopt;
  return s;
}

json summary(const SimResult& r, RunMode mode) {
  json j = metrics_to_json(metrics(r.trace));
  j["mode"] = to_string(mode);
  j["status"] = to_string(r.status);
  return j;
}

bool write_file(const fs::path& path, const std::string& content, std::ostream& diag) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) {
    diag << "error: cannot write " << path.string() << '\n';
    return false;
  }
  return true;
}

bool make_out_dir(const std::string& dir, std::ostream& diag) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    diag << "error: cannot create output directory " << dir << ": " << ec.message() << '\n';
    return false;
  }
  return true;
}

}  // namespace

int cmd_run(const RunConfig& cfg, std::ostream& diag) {
  const std::optional<Scenario> s = prepare(cfg, diag);
  if (!s) return kExitInvalid;
  if (!make_out_dir(cfg.out_dir, diag)) return kExitInvalid;

  const SimResult result = simulate(*s, cfg.mode);
  const fs::path out(cfg.out_dir);
  bool ok = true;
  if (cfg.emit_trace) {
    std::ostringstream csv;
    write_trace_csv(result.trace, csv);
    ok = write_file(out / "trace.csv", csv.str(), diag) && ok;
  }
  if (cfg.emit_metrics) ok = write_file(out / "metrics.json", summary(result, cfg.mode).dump(2) + "\n", diag) && ok;
  if (cfg.emit_plot) {
    for (const Body* r : s->robots()) {
      std::ostringstream csv;
      write_plot_csv(result.trace, r->id, csv);
      ok = write_file(out / ("plot_robot" + std::to_string(r->id) + ".csv"), csv.str(), diag) && ok;
    }
  }
  if (!ok) return kExitInvalid;
  if (result.status == SimStatus::Faulted) {
    diag << "fault: " << metrics(result.trace).fault_reason << '\n';
    return kExitFault;
  }
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& diag) {
  const std::optional<Scenario> s = prepare(cfg, diag);
  if (!s) return kExitInvalid;
  if (!make_out_dir(cfg.out_dir, diag)) return kExitInvalid;

  auto baseline_future =
      std::async(std::launch::async, [&s] { return simulate(*s, RunMode::PredefinedOnly); });
  const SimResult redesigned = simulate(*s, RunMode::Redesigned);
  const SimResult baseline = baseline_future.get();

  const Metrics mb = metrics(baseline.trace);
  const Metrics mr = metrics(redesigned.trace);
  json robots = json::array();
  for (const RobotMetrics& r : mr.robots) {
    const RobotMetrics* b = nullptr;
    for (const RobotMetrics& cand : mb.robots)
      if (cand.id == r.id) b = &cand;
    json jr = {{"id", r.id},
               {"collisions", r.collisions - (b ? b->collisions : 0)},
               {"reached_predefined", b ? b->reached : false},
               {"reached_redesigned", r.reached}};
    jr["completion_time"] = (b && b->completion_time && r.completion_time)
                                ? json(*r.completion_time - *b->completion_time)
                                : json();
    robots.push_back(std::move(jr));
  }
  json doc = {{"predefined", summary(baseline, RunMode::PredefinedOnly)},
              {"redesigned", summary(redesigned, RunMode::Redesigned)},
              {"delta",
               {{"total_collisions", mr.total_collisions - mb.total_collisions},
                {"robots", robots}}}};
  if (!write_file(fs::path(cfg.out_dir) / "compare.json", doc.dump(2) + "\n", diag))
    return kExitInvalid;
  if (redesigned.status == SimStatus::Faulted) {
    diag << "fault: " << mr.fault_reason << '\n';
    return kExitFault;
  }
  return kExitOk;
}

}  // namespace hycol::cli
