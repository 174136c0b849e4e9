#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hycol/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Two-robot hybrid simulator with allowable collisions"};
  app.require_subcommand(1);

  hycol::cli::RunConfig run_cfg;
  std::string mode = "redesigned";
  double dt = 0.0;
  double t_max = 0.0;
  bool no_trace = false;

  auto* run = app.add_subcommand("run", "Simulate one scenario in a single mode");
  run->add_option("--scenario", run_cfg.scenario_path, "Scenario JSON file")->required();
  run->add_option("--mode", mode, "predefined | redesigned")
      ->check(CLI::IsMember({"predefined", "redesigned"}));
  auto* dt_opt = run->add_option("--dt", dt, "Integration step override [s]");
  auto* tmax_opt = run->add_option("--t-max", t_max, "Horizon override [s]");
  run->add_option("--out", run_cfg.out_dir, "Output directory")->required();
  run->add_flag("--no-trace", no_trace, "Skip trace.csv");

  hycol::cli::RunConfig cmp_cfg;
  auto* compare = app.add_subcommand("compare", "Run both modes and write compare.json");
  compare->add_option("--scenario", cmp_cfg.scenario_path, "Scenario JSON file")->required();
  compare->add_option("--out", cmp_cfg.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hycol::cli::kExitInvalid;
  }

  if (*run) {
    run_cfg.mode = mode == "predefined" ? hycol::RunMode::PredefinedOnly : hycol::RunMode::Redesigned;
    if (*dt_opt) run_cfg.dt = dt;
    if (*tmax_opt) run_cfg.t_max = t_max;
    run_cfg.emit_trace = !no_trace;
    return hycol::cli::cmd_run(run_cfg, std::cerr);
  }
  return hycol::cli::cmd_compare(cmp_cfg, std::cerr);
}
