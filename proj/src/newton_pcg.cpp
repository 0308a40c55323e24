#include "pfc/newton_pcg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfc/errors.hpp"

namespace pfc {

ReducedVector reduce(const FourierField& x) {
  if (x.size() == 0) return {};
  return x.tail(x.size() - 1);
}

FourierField lift(const ReducedVector& u) {
  FourierField x(u.size() + 1);
  x(0) = 0.0;
  x.tail(u.size()) = u;
  return x;
}

void NewtonConfig::validate() const {
  if (!(c1 >= 1.0)) throw ConfigError("Newton requires c1 >= 1");
  if (!(c2 > 0.0)) throw ConfigError("Newton requires c2 > 0");
  if (!(mu_max > 0.0)) throw ConfigError("Newton requires mu_max > 0");
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("Newton requires 0 < tau < 1");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("Newton requires 0 < rho < 1");
  if (!(nu > 0.0 && nu < 1.0)) throw ConfigError("Newton requires 0 < nu < 1");
  if (lanczos_steps < 1) throw ConfigError("Newton requires at least one Lanczos step");
  if (pcg_max_iterations < 1) throw ConfigError("Newton requires a positive PCG iteration cap");
  if (max_iterations < 0) throw ConfigError("max_iterations must be non-negative");
}

ReducedVector reduced_hessian_vec(const HessianOperator& hessian, const ReducedVector& u, double mu) {
  ReducedVector out = reduce(hessian.apply(lift(u)));
  if (mu != 0.0) out += mu * u;
  return out;
}

double choose_mu(double lambda_estimate, double gradient_norm, const NewtonConfig& config) {
  const double lower = lambda_estimate - config.lanczos_slack * std::abs(lambda_estimate);
  return std::min(config.mu_max, config.c1 * std::max(0.0, -lower) + config.c2 * gradient_norm);
}

ReducedVector precondition_apply(const Eigen::ArrayXd& interaction, double delta, double mu, const ReducedVector& r) {
  return r.array() / (interaction.tail(r.size()) + (delta + mu));
}

bool preconditioner_valid(const Eigen::ArrayXd& interaction, double delta, double mu) {
  if (interaction.size() <= 1) return true;
  return (interaction.tail(interaction.size() - 1) + (delta + mu)).minCoeff() > 0.0;
}

LineSearchResult armijo_backtrack(const PfcProblem& problem, const FourierField& x, const Eigen::ArrayXd& samples_x,
                                  const FourierField& d, const FourierField& g, const NewtonConfig& config) {
  const double slope = inner(g, d);
  if (!(slope < 0.0)) throw SolverError("Newton direction is not a descent direction");
  LineSearchResult res;
  double t = 1.0;
  for (int n = 0; n <= config.max_backtracks; ++n) {
    res.x = x + t * d;
    res.energy = problem.energy(res.x, res.samples);
    if (problem.energy_difference(x, samples_x, res.x) <= config.nu * t * slope) {
      res.t = t;
      res.backtracks = n;
      return res;
    }
    t *= config.rho;
  }
  throw SolverError("Armijo line search failed after " + std::to_string(config.max_backtracks) +
                    " reductions (|d| = " + std::to_string(d.norm()) + ", <g,d> = " + std::to_string(slope) + ")");
}

NewtonPcgMethod::NewtonPcgMethod(const PfcProblem& problem, FourierField x0, NewtonConfig config)
    : problem_(&problem), config_(std::move(config)), x_(project_mass_zero(std::move(x0))), rng_(config_.lanczos_seed) {
  config_.validate();
  if (x_.size() != problem.size()) throw ConfigError("initial field does not match the lattice");
  Eigen::ArrayXd samples;
  energy_ = problem.energy(x_, samples);
  refresh(std::move(samples));
}

void NewtonPcgMethod::refresh(Eigen::ArrayXd samples) {
  samples_ = std::move(samples);
  gradient_ = problem_->bulk_gradient_from_samples(samples_);
  gradient_.array() += problem_->interaction() * x_.array();
  gradient_(0) = 0.0;
}

TraceRow NewtonPcgMethod::step() {
  const BulkPolynomial& bulk = problem_->bulk();
  const HessianOperator hessian(*problem_, samples_.unaryExpr([&bulk](double p) { return bulk.second(p); }));
  const Eigen::ArrayXd& interaction = problem_->interaction();

  const ReducedVector g = reduce(gradient_);
  const double gnorm = g.norm();

  // Hermitian random start so the Krylov space stays inside the real-field subspace.
  std::normal_distribution<double> normal;
  FourierField start(problem_->size());
  for (Eigen::Index i = 0; i < start.size(); ++i) start(i) = Complex(normal(rng_), normal(rng_));
  start = project_mass_zero(hermitian_symmetrize(problem_->grid(), start));

  const auto apply_j = [&](const ReducedVector& u) { return reduced_hessian_vec(hessian, u, 0.0); };
  double mu = choose_mu(apply_j, reduce(start), gnorm, config_);

  const double eta = config_.tau * std::min(1.0, gnorm);
  const double delta = config_.delta_factor * hessian.max_curvature();
  const ReducedVector b = -g;

  PcgResult<ReducedVector> sol;
  for (int attempt = 0;; ++attempt) {
    const auto apply_a = [&](const ReducedVector& u) { return reduced_hessian_vec(hessian, u, mu); };
    if (config_.precondition && preconditioner_valid(interaction, delta, mu)) {
      const auto m_inv = [&](const ReducedVector& r) { return precondition_apply(interaction, delta, mu, r); };
      sol = pcg(apply_a, b, m_inv, eta, config_.pcg_max_iterations);
    } else {
      const auto identity = [](const ReducedVector& r) { return r; };
      sol = pcg(apply_a, b, identity, eta, config_.pcg_max_iterations);
    }
    if (!sol.negative_curvature) break;
    if (attempt >= config_.mu_retries) break;
    // At least double, and enough to lift the curvature PCG just met above zero.
    mu = std::max(2.0 * std::max(mu, config_.c2 * gnorm), mu - sol.curvature + config_.c2 * gnorm);
  }

  // Retries exhausted: the partial PCG iterate is still a descent direction unless it is zero.
  if (sol.negative_curvature && sol.x.norm() == 0.0) sol.x = -g;
  const FourierField d = lift(sol.x);
  last_mu_ = mu;
  last_direction_norm_ = d.norm();
  last_slope_ = inner(gradient_, d);

  LineSearchResult ls = armijo_backtrack(*problem_, x_, samples_, d, gradient_, config_);
  x_ = std::move(ls.x);
  x_(0) = 0.0;
  energy_ = ls.energy;
  refresh(std::move(ls.samples));

  TraceRow row;
  row.phase = name();
  row.energy = energy_.total;
  row.gradient_norm = gradient_.norm();
  row.step = ls.t;
  row.mu = mu;
  row.inner_iterations = sol.iterations;
  row.backtracks = ls.backtracks;
  return row;
}

SolverReport newton_pcg_run(const PfcProblem& problem, FourierField x0, const NewtonConfig& config,
                           const StepObserver& observe) {
  NewtonPcgMethod method(problem, std::move(x0), config);
  return drive(method, config.tolerance, config.max_iterations, observe);
}

}  // namespace pfc
