#ifndef HYCOL_CLI_HPP
#define HYCOL_CLI_HPP

#include <optional>
#include <ostream>
#include <string>

#include "hycol/hybrid.hpp"

namespace hycol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitFault = 3;

struct RunConfig {
  std::string scenario_path;
  RunMode mode = RunMode::Redesigned;
  std::optional<double> dt;
  std::optional<double> t_max;
  std::string out_dir = ".";
  bool emit_trace = true;
  bool emit_metrics = true;
  bool emit_plot = true;
};

/// Writes trace.csv, metrics.json and plot_robot<i>.csv into cfg.out_dir.
/// Returns 0 on completion, 2 on input/validation errors, 3 on a simulation fault.
int cmd_run(const RunConfig& cfg, std::ostream& diag);

/// Runs both modes and writes compare.json. Exit status follows the redesigned run.
int cmd_compare(const RunConfig& cfg, std::ostream& diag);

}  // namespace hycol::cli

#endif  // HYCOL_CLI_HPP
