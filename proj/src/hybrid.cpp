#include "pfc/hybrid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "pfc/errors.hpp"

namespace pfc {

void SwitchRule::validate() const {
  if (!(energy >= 0.0) || !(gradient >= 0.0)) throw ConfigError("switch thresholds must be non-negative");
}

bool SwitchRule::immediate() const { return std::isinf(energy) || std::isinf(gradient); }

bool should_switch(double energy_prev, double energy_curr, double gradient_change, const SwitchRule& rule) {
  return std::abs(energy_curr - energy_prev) < rule.energy || gradient_change < rule.gradient;
}

void HybridConfig::validate() const {
  rule.validate();
  newton.validate();
  if (first == FirstStage::Baseline)
    baseline.validate();
  else
    aabpg.validate();
  if (max_iterations < 0) throw ConfigError("max_iterations must be non-negative");
}

std::string hybrid_name(const HybridConfig& config) {
  switch (config.first) {
    case FirstStage::AabpgP2: return "n-aabpg2";
    case FirstStage::AabpgP4: return "n-aabpg4";
    case FirstStage::Baseline: return "n-" + to_string(config.baseline.scheme);
  }
  return "n-unknown";
}

namespace {

std::unique_ptr<IterativeMethod> make_first_stage(const PfcProblem& problem, FourierField x0,
                                                  const HybridConfig& config) {
  switch (config.first) {
    case FirstStage::AabpgP2:
    case FirstStage::AabpgP4: {
      AabpgConfig c = config.aabpg;
      if (config.first == FirstStage::AabpgP2) c.kernel = BregmanKernel::p2();
      else if (c.kernel.kind != BregmanKernel::Kind::P4) c.kernel = default_p4_kernel(problem.bulk().c4);
      return std::make_unique<AabpgMethod>(problem, std::move(x0), c);
    }
    case FirstStage::Baseline: return std::make_unique<BaselineMethod>(problem, std::move(x0), config.baseline);
  }
  throw ConfigError("unknown first-stage method");
}

}  // namespace

SolverReport hybrid_run(const PfcProblem& problem, FourierField x0, const HybridConfig& config,
                       const StepObserver& observe) {
  using clock = std::chrono::steady_clock;
  config.validate();
  SolverReport report;
  report.method = hybrid_name(config);

  double elapsed = 0.0;
  int k = 0;
  auto start = clock::now();
  std::unique_ptr<IterativeMethod> first = make_first_stage(problem, std::move(x0), config);
  elapsed += std::chrono::duration<double>(clock::now() - start).count();
  report.trace.push_back(initial_row(*first));

  bool converged = first->gradient_norm() < config.tolerance;
  bool switching = config.rule.immediate();
  double energy_prev = first->energy().total;
  FourierField gradient_prev = first->gradient();
  while (!converged && !switching && k < config.max_iterations) {
    start = clock::now();
    TraceRow row = first->step();
    bool rejected = first->last_step_rejected();
    if (!rejected) {
      const double energy_curr = first->energy().total;
      const double gradient_change = (first->gradient() - gradient_prev).norm();
      switching = should_switch(energy_prev, energy_curr, gradient_change, config.rule);
      energy_prev = energy_curr;
      gradient_prev = first->gradient();
    }
    elapsed += std::chrono::duration<double>(clock::now() - start).count();
    ++k;
    row.iteration = k;
    row.seconds = elapsed;
    if (observe) observe(*first, row);
    report.trace.push_back(std::move(row));
    converged = first->gradient_norm() < config.tolerance;
  }

  const IterativeMethod* last = first.get();
  std::unique_ptr<NewtonPcgMethod> newton;
  if (!converged && switching && k < config.max_iterations) {
    start = clock::now();
    newton = std::make_unique<NewtonPcgMethod>(problem, first->current(), config.newton);
    first.reset();
    elapsed += std::chrono::duration<double>(clock::now() - start).count();
    last = newton.get();
    report.switch_row = report.trace.size();
    while (!converged && k < config.max_iterations) {
      start = clock::now();
      TraceRow row = newton->step();
      elapsed += std::chrono::duration<double>(clock::now() - start).count();
      ++k;
      row.iteration = k;
      row.seconds = elapsed;
      if (observe) observe(*newton, row);
      report.trace.push_back(std::move(row));
      converged = newton->gradient_norm() < config.tolerance;
    }
  }

  report.termination = converged ? Termination::Converged : Termination::IterationLimit;
  report.iterations = k;
  report.seconds = elapsed;
  report.solution = last->current();
  report.energy = last->energy();
  report.gradient_norm = last->gradient_norm();
  return report;
}

double acceleration_ratio(const SolverReport& plain, const SolverReport& hybrid, double energy_rtol) {
  if (!plain.converged() || !hybrid.converged())
    throw ConfigError("acceleration ratio needs two converged reports");
  const double scale = std::max(1.0, std::max(std::abs(plain.energy.total), std::abs(hybrid.energy.total)));
  if (std::abs(plain.energy.total - hybrid.energy.total) > energy_rtol * scale)
    throw ConfigError("acceleration ratio needs reports that reach the same energy");
  if (hybrid.seconds <= 0.0) return plain.seconds <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return plain.seconds / hybrid.seconds;
}

}  // namespace pfc
