// Command-line front end: run / resume / bench / check-gradients.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pfc/run_config.hpp"
#include "pfc/runner.hpp"

namespace {

void add_common(CLI::App* cmd, pfc::CommandOptions& o) {
  cmd->add_option("-c,--config", o.config, "JSON run configuration");
  cmd->add_option("-p,--preset", o.preset, "preset name (see `pfc presets`)");
  cmd->add_option("-o,--output", o.output, "output directory");
  cmd->add_option("-s,--seed", o.seed, "random seed");
  cmd->add_option("-t,--threads", o.threads, "FFT threads")->check(CLI::PositiveNumber);
  cmd->add_option("-m,--method", o.method, "solver: aabpg2 aabpg4 newton sis ssis1 ssis2 hybrid");
  cmd->add_option("--max-iterations", o.max_iterations, "outer iteration cap")->check(CLI::NonNegativeNumber);
  cmd->add_option("--progress", o.progress, "log every N iterations")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase field crystal stationary-state solver"};
  app.require_subcommand(1);
  pfc::CommandOptions o;

  auto* run = app.add_subcommand("run", "solve from the configured initial field");
  add_common(run, o);
  run->add_flag("--export-physical", o.export_physical, "also write the field sampled on the physical grid");

  auto* resume = app.add_subcommand("resume", "continue from the final snapshot of an earlier run");
  add_common(resume, o);
  resume->add_option("--snapshot", o.snapshot, "snapshot to start from (default <output>/final.pfcf)");
  resume->add_flag("--export-physical", o.export_physical, "also write the field sampled on the physical grid");

  auto* bench = app.add_subcommand("bench", "time several methods on the same problem");
  add_common(bench, o);
  bench->add_option("--methods", o.bench_methods, "methods to compare; n-<m> is the hybrid of <m>")->delimiter(',');

  auto* check = app.add_subcommand("check-gradients", "finite-difference check at the initial field");
  add_common(check, o);
  check->add_option("--directions", o.fd_directions, "random directions")->check(CLI::PositiveNumber);

  auto* presets = app.add_subcommand("presets", "list bundled presets");

  CLI11_PARSE(app, argc, argv);

  if (*run) return pfc::run_command(o, std::cerr);
  if (*resume) return pfc::resume_command(o, std::cerr);
  if (*bench) return pfc::bench_command(o, std::cerr);
  if (*check) return pfc::check_gradients_command(o, std::cerr);
  if (*presets) {
    for (const auto& name : pfc::preset_names()) std::cout << name << "\n";
    return 0;
  }
  return pfc::kExitUsage;
}
