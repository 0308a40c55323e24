#include "pfc/runner.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <random>

#include "pfc/errors.hpp"
#include "pfc/snapshot.hpp"
#include "pfc/spectral_transform.hpp"

namespace pfc {

namespace fs = std::filesystem;
using nlohmann::json;

RunConfig resolve_config(const CommandOptions& options) {
  json doc = options.config ? config_file_json(*options.config) : json::object();
  if (options.preset) doc["preset"] = *options.preset;
  if (doc.empty()) throw ConfigError("give --config or --preset");
  if (options.output) doc["output"] = options.output->string();
  if (options.seed) doc["seed"] = *options.seed;
  if (options.threads) doc["threads"] = *options.threads;
  if (options.method) doc["solver"]["method"] = *options.method;
  if (options.max_iterations) doc["solver"]["max_iterations"] = *options.max_iterations;
  return parse_run_config(doc);
}

SolverReport solve(const RunConfig& config, const PfcProblem& problem, FourierField x0, const StepObserver& observe) {
  const SolverSpec& s = config.solver;
  switch (s.kind) {
    case SolverKind::Aabpg2:
    case SolverKind::Aabpg4: return aabpg_run(problem, std::move(x0), s.aabpg, observe);
    case SolverKind::Newton: return newton_pcg_run(problem, std::move(x0), s.newton, observe);
    case SolverKind::Sis:
    case SolverKind::Ssis1:
    case SolverKind::Ssis2: return baseline_run(problem, std::move(x0), s.baseline, observe);
    case SolverKind::Hybrid: return hybrid_run(problem, std::move(x0), s.hybrid, observe);
  }
  throw ConfigError("unknown solver");
}

json summary_json(const RunConfig& config, const SolverReport& report) {
  json j;
  j["method"] = report.method;
  j["preset"] = config.preset;
  j["modes"] = config.lattice.modes;
  j["energy"] = report.energy.total;
  j["energy_interaction"] = report.energy.interaction;
  j["energy_bulk"] = report.energy.bulk;
  j["gradient_norm"] = report.gradient_norm;
  j["iterations"] = report.iterations;
  j["seconds"] = report.seconds;
  j["termination"] = to_string(report.termination);
  if (!report.message.empty()) j["message"] = report.message;
  if (report.switch_row) j["switch_iteration"] = report.trace[*report.switch_row].iteration;
  return j;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw SnapshotError("cannot write " + path.string());
  os << text;
  if (!os) throw SnapshotError("failed writing " + path.string());
}

void write_physical(const fs::path& path, const Eigen::ArrayXd& samples) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw SnapshotError("cannot write " + path.string());
  os.write(reinterpret_cast<const char*>(samples.data()), static_cast<std::streamsize>(samples.size() * sizeof(double)));
}

FourierField random_direction(const IndexGrid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  FourierField v(grid.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  v = project_mass_zero(hermitian_symmetrize(grid, v));
  return v / v.norm();
}

}  // namespace

void write_artifacts(const fs::path& dir, const RunConfig& config, const SolverReport& report,
                     const PfcProblem& problem, bool export_physical) {
  fs::create_directories(dir);
  const fs::path stage = dir / ".staging";
  fs::remove_all(stage);
  fs::create_directories(stage);

  std::ostringstream trace;
  write_trace(trace, report);
  write_text(stage / "trace.tsv", trace.str());
  write_snapshot(stage / "final.pfcf", config.lattice, report.solution);
  json summary = summary_json(config, report);
  if (export_physical) {
    const Eigen::ArrayXd samples = problem.physical(report.solution);
    write_physical(stage / "physical.f64", samples);
    summary["physical_grid"] = problem.transform().grid_shape();
  }
  write_text(stage / "summary.json", summary.dump(2) + "\n");
  write_text(stage / "config.json", config.source.dump(2) + "\n");

  for (const char* name : {"trace.tsv", "final.pfcf", "summary.json", "config.json", "physical.f64"}) {
    if (fs::exists(stage / name)) fs::rename(stage / name, dir / name);
  }
  fs::remove_all(stage);
}

DerivativeCheck check_derivatives(const PfcProblem& problem, const FourierField& x, int directions,
                                  std::uint64_t seed, double step) {
  std::mt19937_64 rng(seed);
  DerivativeCheck out;
  const FourierField g = project_mass_zero(problem.gradient(x));
  const HessianOperator hessian = problem.hessian_at(x);
  const double h = step * std::max(1.0, x.norm());
  for (int k = 0; k < directions; ++k) {
    const FourierField v = random_direction(problem.grid(), rng);
    const double fd = (problem.energy(x + h * v).total - problem.energy(x - h * v).total) / (2.0 * h);
    const double an = inner(g, v);
    out.gradient_error = std::max(out.gradient_error, std::abs(fd - an) / std::max(std::abs(an), 1e-300));

    const FourierField fd_h = (problem.gradient(x + h * v) - problem.gradient(x - h * v)) / (2.0 * h);
    const FourierField an_h = hessian.apply(v);
    out.hessian_error = std::max(out.hessian_error, (fd_h - an_h).norm() / std::max(an_h.norm(), 1e-300));
  }
  return out;
}

namespace {

struct Prepared {
  RunConfig config;
  std::unique_ptr<PfcProblem> problem;
  FourierField x0;
};

Prepared prepare(RunConfig config) {
  set_fft_threads(config.threads);
  auto grid = std::make_shared<const IndexGrid>(config.lattice);
  Prepared p;
  p.x0 = build_initial(config, *grid);
  p.problem = std::make_unique<PfcProblem>(grid, config.model, config.padding);
  p.config = std::move(config);
  return p;
}

int exit_for(const SolverReport& report) { return report.converged() ? kExitOk : kExitNotConverged; }

void print_summary(std::ostream& log, const SolverReport& report) {
  log << std::setprecision(15) << report.method << ": E = " << report.energy.total
      << ", |g| = " << std::setprecision(3) << report.gradient_norm << ", " << report.iterations << " iterations, "
      << std::setprecision(4) << report.seconds << " s, " << to_string(report.termination) << "\n";
}

StepObserver progress_logger(std::ostream& log, int every) {
  if (every <= 0) return {};
  return [&log, every](const IterativeMethod&, const TraceRow& row) {
    if (row.iteration % every != 0) return;
    log << std::setprecision(15) << "  " << row.iteration << ' ' << row.phase << " E = " << row.energy
        << ", |g| = " << std::setprecision(3) << row.gradient_norm << ", " << std::setprecision(4) << row.seconds
        << " s" << std::endl;
  };
}

template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SnapshotError& e) {
    log << "snapshot error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
}

int run_prepared(Prepared p, const CommandOptions& options, std::ostream& log) {
  const SolverReport report = solve(p.config, *p.problem, std::move(p.x0), progress_logger(log, options.progress));
  write_artifacts(p.config.output, p.config, report, *p.problem, options.export_physical);
  print_summary(log, report);
  log << "artifacts in " << p.config.output.string() << "\n";
  return exit_for(report);
}

}  // namespace

int run_command(const CommandOptions& options, std::ostream& log) {
  return guarded(log, [&] { return run_prepared(prepare(resolve_config(options)), options, log); });
}

int resume_command(const CommandOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    if (!options.output && !options.config) throw ConfigError("resume needs --output or --config");
    CommandOptions opts = options;
    if (!opts.config && !opts.preset) opts.config = *options.output / "config.json";
    json doc = opts.config ? config_file_json(*opts.config) : json::object();
    if (opts.preset) doc["preset"] = *opts.preset;
    const fs::path out = options.output ? *options.output : fs::path(doc.value("output", std::string("out")));
    const fs::path snap = options.snapshot ? *options.snapshot : out / "final.pfcf";
    if (!fs::exists(snap)) throw ConfigError("no snapshot to resume from at " + snap.string());
    json initial = {{"type", "snapshot"}, {"path", fs::absolute(snap).string()}};
    // Null members delete the preset's seed or noise settings under the merge patch.
    if (doc.contains("preset")) initial.update({{"file", nullptr}, {"entries", nullptr}, {"scale", nullptr}});
    doc["initial"] = initial;
    doc["output"] = out.string();
    if (options.seed) doc["seed"] = *options.seed;
    if (options.threads) doc["threads"] = *options.threads;
    if (options.method) doc["solver"]["method"] = *options.method;
    if (options.max_iterations) doc["solver"]["max_iterations"] = *options.max_iterations;
    return run_prepared(prepare(parse_run_config(doc)), options, log);
  });
}

int bench_command(const CommandOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    Prepared p = prepare(resolve_config(options));
    std::vector<std::string> methods = options.bench_methods;
    if (methods.empty()) methods = {"sis", "n-sis", "aabpg2", "n-aabpg2", "aabpg4"};

    struct Row {
      std::string name;
      SolverReport report;
    };
    std::vector<Row> rows;
    for (const std::string& m : methods) {
      RunConfig c = p.config;
      if (m.rfind("n-", 0) == 0) {
        json doc = c.source;
        doc["solver"]["method"] = "hybrid";
        doc["solver"]["hybrid"]["first"] = m.substr(2);
        c = parse_run_config(doc);
      } else {
        json doc = c.source;
        doc["solver"]["method"] = m;
        c = parse_run_config(doc);
      }
      SolverReport r = solve(c, *p.problem, p.x0, progress_logger(log, options.progress));
      print_summary(log, r);
      rows.push_back({m, std::move(r)});
    }

    std::ostringstream table;
    table << "method\titerations\tseconds\tenergy\tgradient_norm\ttermination\tratio\n" << std::setprecision(17);
    for (const Row& row : rows) {
      std::string ratio = "-";
      if (row.name.rfind("n-", 0) == 0) {
        for (const Row& plain : rows) {
          if (plain.name != row.name.substr(2)) continue;
          try {
            std::ostringstream ss;
            ss << std::setprecision(6) << acceleration_ratio(plain.report, row.report);
            ratio = ss.str();
          } catch (const ConfigError&) {
            ratio = "n/a";
          }
        }
      }
      table << row.name << '\t' << row.report.iterations << '\t' << row.report.seconds << '\t'
            << row.report.energy.total << '\t' << row.report.gradient_norm << '\t'
            << to_string(row.report.termination) << '\t' << ratio << '\n';
    }
    fs::create_directories(p.config.output);
    write_text(p.config.output / "bench.tsv", table.str());
    log << table.str();
    return kExitOk;
  });
}

int check_gradients_command(const CommandOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    Prepared p = prepare(resolve_config(options));
    const DerivativeCheck c = check_derivatives(*p.problem, p.x0, options.fd_directions, p.config.seed);
    log << std::setprecision(3) << "gradient relative error " << c.gradient_error << "\n"
        << "hessian relative error " << c.hessian_error << "\n";
    return c.gradient_error < 1e-6 && c.hessian_error < 1e-6 ? kExitOk : kExitSolver;
  });
}

}  // namespace pfc
