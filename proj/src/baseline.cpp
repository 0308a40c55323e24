#include "pfc/baseline.hpp"

#include "pfc/bregman.hpp"
#include "pfc/errors.hpp"

namespace pfc {

std::string to_string(BaselineScheme scheme) {
  switch (scheme) {
    case BaselineScheme::SIS: return "sis";
    case BaselineScheme::SSIS1: return "ssis1";
    case BaselineScheme::SSIS2: return "ssis2";
  }
  return "unknown";
}

BaselineScheme parse_baseline_scheme(const std::string& name) {
  if (name == "sis") return BaselineScheme::SIS;
  if (name == "ssis1") return BaselineScheme::SSIS1;
  if (name == "ssis2") return BaselineScheme::SSIS2;
  throw ConfigError("unknown baseline scheme '" + name + "'");
}

void BaselineConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("baseline step size must be positive");
  if (!(stabilization >= 0.0)) throw ConfigError("stabilization constant must be non-negative");
  if (max_iterations < 0) throw ConfigError("max_iterations must be non-negative");
}

namespace {

FourierField ssis1_from(const FourierField& x, const FourierField& bulk_grad, double alpha, double s,
                        const Eigen::ArrayXd& interaction) {
  if (s == 0.0) return prox_p2(x, bulk_grad, alpha, interaction);
  FourierField rhs = (1.0 + alpha * s) * x - alpha * project_mass_zero(bulk_grad);
  FourierField out = rhs.array() / (1.0 + alpha * interaction + alpha * s);
  out(0) = 0.0;
  return out;
}

FourierField ssis2_from(const FourierField& x, const FourierField& x_prev, const FourierField& bulk_grad_bar,
                        double alpha, double s, const Eigen::ArrayXd& interaction) {
  const FourierField xbar = 2.0 * x - x_prev;
  FourierField rhs = (4.0 * x - x_prev) / (2.0 * alpha) - project_mass_zero(bulk_grad_bar) + s * xbar;
  FourierField out = rhs.array() / (1.5 / alpha + interaction + s);
  out(0) = 0.0;
  return out;
}

}  // namespace

FourierField sis_step(const PfcProblem& problem, const FourierField& x, double alpha) {
  return prox_p2(problem, x, alpha);
}

FourierField ssis1_step(const PfcProblem& problem, const FourierField& x, double alpha, double s) {
  if (!(alpha > 0.0)) throw ConfigError("step size must be positive");
  return ssis1_from(x, problem.bulk_gradient(x), alpha, s, problem.interaction());
}

FourierField ssis2_step(const PfcProblem& problem, const FourierField& x, const FourierField& x_prev, double alpha,
                        double s) {
  if (!(alpha > 0.0)) throw ConfigError("step size must be positive");
  return ssis2_from(x, x_prev, problem.bulk_gradient(2.0 * x - x_prev), alpha, s, problem.interaction());
}

BaselineMethod::BaselineMethod(const PfcProblem& problem, FourierField x0, BaselineConfig config)
    : problem_(&problem), config_(config), x_(project_mass_zero(std::move(x0))) {
  config_.validate();
  if (x_.size() != problem.size()) throw ConfigError("initial field does not match the lattice");
  Eigen::ArrayXd samples;
  energy_ = problem.energy(x_, samples);
  bulk_grad_ = problem.bulk_gradient_from_samples(std::move(samples));
  gradient_ = bulk_grad_;
  gradient_.array() += problem.interaction() * x_.array();
  gradient_(0) = 0.0;
}

TraceRow BaselineMethod::step() {
  const Eigen::ArrayXd& d = problem_->interaction();
  FourierField next;
  switch (config_.scheme) {
    case BaselineScheme::SIS: next = prox_p2(x_, bulk_grad_, config_.alpha, d); break;
    case BaselineScheme::SSIS1: next = ssis1_from(x_, bulk_grad_, config_.alpha, config_.stabilization, d); break;
    case BaselineScheme::SSIS2:
      // The first step has no history and falls back to the one-level scheme.
      if (has_prev_)
        next = ssis2_from(x_, x_prev_, problem_->bulk_gradient(2.0 * x_ - x_prev_), config_.alpha,
                          config_.stabilization, d);
      else
        next = ssis1_from(x_, bulk_grad_, config_.alpha, config_.stabilization, d);
      break;
  }
  x_prev_ = std::move(x_);
  x_ = std::move(next);
  has_prev_ = true;

  Eigen::ArrayXd samples;
  energy_ = problem_->energy(x_, samples);
  bulk_grad_ = problem_->bulk_gradient_from_samples(std::move(samples));
  gradient_ = bulk_grad_;
  gradient_.array() += d * x_.array();
  gradient_(0) = 0.0;

  TraceRow row;
  row.phase = name();
  row.energy = energy_.total;
  row.gradient_norm = gradient_.norm();
  row.step = config_.alpha;
  return row;
}

SolverReport baseline_run(const PfcProblem& problem, FourierField x0, const BaselineConfig& config,
                         const StepObserver& observe) {
  BaselineMethod method(problem, std::move(x0), config);
  return drive(method, config.tolerance, config.max_iterations, observe);
}

}  // namespace pfc
