#include "pfc/aabpg.hpp"

#include <algorithm>
#include <cmath>

#include "pfc/errors.hpp"

namespace pfc {

void AabpgConfig::validate() const {
  kernel.validate();
  if (!(alpha_min > 0.0 && alpha_min <= alpha_max)) throw ConfigError("AA-BPG requires 0 < alpha_min <= alpha_max");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("AA-BPG requires 0 < rho < 1");
  if (!(w_max >= 0.0)) throw ConfigError("AA-BPG requires w_max >= 0");
  if (!(alpha0 > 0.0)) throw ConfigError("AA-BPG requires alpha0 > 0");
  if (max_iterations < 0) throw ConfigError("max_iterations must be non-negative");
}

double AabpgConfig::resolved_c(Eigen::Index modes) const {
  return restart_c > 0.0 ? restart_c : 1e-9 * static_cast<double>(modes);
}

double AabpgConfig::resolved_eta(Eigen::Index modes) const {
  return linesearch_eta > 0.0 ? linesearch_eta : 1e-9 * static_cast<double>(modes);
}

double bb_step(const FourierField& s, const FourierField& v, double alpha_min, double alpha_max, BbVariant variant,
               int iteration) {
  const double ss = s.squaredNorm();
  const double sv = inner(s, v);
  if (ss == 0.0 || !(sv > 0.0)) return alpha_max;
  const bool use_long = variant == BbVariant::Long || (variant == BbVariant::Alternating && iteration % 2 == 1);
  const double alpha = use_long ? ss / sv : sv / v.squaredNorm();
  if (!std::isfinite(alpha)) return alpha_max;
  return std::clamp(alpha, alpha_min, alpha_max);
}

double NesterovWeight::advance() {
  const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_ * t_));
  w_ = std::min(w_max_, (t_ - 1.0) / t_next);
  t_ = t_next;
  return w_;
}

StepEstimate estimate_step(const PfcProblem& problem, const FourierField& y, const Eigen::ArrayXd& samples_y,
                           const FourierField& bulk_grad_y, double alpha_init, const AabpgConfig& config, double eta) {
  StepEstimate est;
  double alpha = std::min(alpha_init, config.alpha_max);
  while (true) {
    if (alpha < config.alpha_min) {
      alpha = config.alpha_min;
      est.clamped = true;
    }
    est.z = bregman_prox(config.kernel, y, bulk_grad_y, alpha, problem.interaction());
    est.z_energy = problem.energy(est.z, est.z_samples);
    est.alpha = alpha;
    if (est.clamped || -problem.energy_difference(y, samples_y, est.z) >= eta * (y - est.z).squaredNorm()) break;
    alpha *= config.rho;
    ++est.backtracks;
  }
  return est;
}

AabpgMethod::AabpgMethod(const PfcProblem& problem, FourierField x0, AabpgConfig config)
    : problem_(&problem),
      config_(std::move(config)),
      c_(config_.resolved_c(problem.size())),
      eta_(config_.resolved_eta(problem.size())),
      x_(project_mass_zero(std::move(x0))),
      weight_(config_.w_max) {
  config_.validate();
  if (x_.size() != problem.size()) throw ConfigError("initial field does not match the lattice");
  energy_ = problem.energy(x_, samples_);
  bulk_grad_ = problem.bulk_gradient_from_samples(samples_);
  refresh_gradient();
}

std::string AabpgMethod::name() const {
  return config_.kernel.kind == BregmanKernel::Kind::P2 ? "aabpg2" : "aabpg4";
}

void AabpgMethod::refresh_gradient() {
  gradient_ = bulk_grad_;
  gradient_.array() += problem_->interaction() * x_.array();
  gradient_(0) = 0.0;
}

TraceRow AabpgMethod::step() {
  ++k_;
  const double w = weight_.value();

  // Extrapolated point and its bulk gradient.
  FourierField y;
  Eigen::ArrayXd samples_y;
  FourierField bulk_grad_y;
  if (w > 0.0 && has_prev_) {
    y = x_ + w * (x_ - x_prev_);
    samples_y = problem_->physical(y);
    bulk_grad_y = problem_->bulk_gradient_from_samples(samples_y);
  } else {
    y = x_;
    samples_y = samples_;
    bulk_grad_y = bulk_grad_;
  }

  const double alpha_init =
      has_prev_ ? bb_step(x_ - x_prev_, bulk_grad_ - bulk_grad_prev_, config_.alpha_min, config_.alpha_max,
                          config_.bb, k_)
                : std::clamp(config_.alpha0, config_.alpha_min, config_.alpha_max);
  StepEstimate est = estimate_step(*problem_, y, samples_y, bulk_grad_y, alpha_init, config_, eta_);

  TraceRow row;
  row.phase = name();
  row.step = est.alpha;
  row.weight = w;
  row.backtracks = est.backtracks;

  if (-problem_->energy_difference(x_, samples_, est.z) >= c_ * (x_ - est.z).squaredNorm()) {
    x_prev_ = std::move(x_);
    bulk_grad_prev_ = std::move(bulk_grad_);
    x_ = std::move(est.z);
    energy_ = est.z_energy;
    samples_ = std::move(est.z_samples);
    bulk_grad_ = problem_->bulk_gradient_from_samples(samples_);
    refresh_gradient();
    has_prev_ = true;
    rejected_ = false;
    weight_.advance();
  } else {
    // Restart: keep x, drop the momentum. x_prev_ keeps the last accepted move for BB.
    rejected_ = true;
    row.restart = true;
    weight_.reset();
  }
  row.energy = energy_.total;
  row.gradient_norm = gradient_.norm();
  return row;
}

SolverReport aabpg_run(const PfcProblem& problem, FourierField x0, const AabpgConfig& config,
                      const StepObserver& observe) {
  AabpgMethod method(problem, std::move(x0), config);
  return drive(method, config.tolerance, config.max_iterations, observe);
}

}  // namespace pfc
