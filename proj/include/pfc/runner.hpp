#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfc/report.hpp"
#include "pfc/run_config.hpp"

namespace pfc {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitSolver = 3,
  kExitNotConverged = 4,
};

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> output;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> method;           // overrides solver.method
  std::optional<std::filesystem::path> snapshot;  // resume source
  std::optional<int> max_iterations;
  bool export_physical = false;
  std::vector<std::string> bench_methods;
  int fd_directions = 10;
  int progress = 0;  // log every this many iterations; 0 is silent
};

/// Config with command-line overrides applied.
RunConfig resolve_config(const CommandOptions& options);

/// Runs the configured solver from `x0`.
SolverReport solve(const RunConfig& config, const PfcProblem& problem, FourierField x0,
                   const StepObserver& observe = {});

nlohmann::json summary_json(const RunConfig& config, const SolverReport& report);

/// Writes trace.tsv, final.pfcf, summary.json and config.json into `dir`, replacing earlier
/// files only once every artifact has been written.
void write_artifacts(const std::filesystem::path& dir, const RunConfig& config, const SolverReport& report,
                     const PfcProblem& problem, bool export_physical);

struct DerivativeCheck {
  double gradient_error = 0.0;  // worst relative error over directions
  double hessian_error = 0.0;
};

/// Central-difference check of the gradient and Hessian-vector product along random Hermitian,
/// mass-zero directions.
DerivativeCheck check_derivatives(const PfcProblem& problem, const FourierField& x, int directions,
                                  std::uint64_t seed, double step = 1e-5);

int run_command(const CommandOptions& options, std::ostream& log);
int resume_command(const CommandOptions& options, std::ostream& log);
int bench_command(const CommandOptions& options, std::ostream& log);
int check_gradients_command(const CommandOptions& options, std::ostream& log);

}  // namespace pfc
