#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "pfc/model.hpp"
#include "pfc/report.hpp"

namespace pfc {

/// Amplitudes of every lattice index except h = 0.
using ReducedVector = Eigen::VectorXcd;

ReducedVector reduce(const FourierField& x);
FourierField lift(const ReducedVector& u);

struct NewtonConfig {
  double c1 = 1.0;
  double c2 = 0.1;
  double mu_max = 1e3;
  double tau = 0.01;  // PCG tolerance eta = tau * min(1, ||g||)
  double rho = 0.5;
  double nu = 1e-4;
  double delta_factor = 0.7;  // delta = delta_factor * max f''
  bool precondition = true;
  int lanczos_steps = 20;
  double lanczos_slack = 0.1;
  std::uint64_t lanczos_seed = 12345;
  int mu_retries = 5;
  int max_backtracks = 60;
  int pcg_max_iterations = 500;
  int max_iterations = 200;
  double tolerance = 1e-9;

  void validate() const;
};

/// Z^T (grad^2 E) Z u + mu u with the Hessian frozen in `hessian`.
ReducedVector reduced_hessian_vec(const HessianOperator& hessian, const ReducedVector& u, double mu);

namespace detail {
inline double vdot(const Eigen::VectorXd& x, const Eigen::VectorXd& y) { return x.dot(y); }
inline double vdot(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) { return x.dot(y).real(); }
}  // namespace detail

/// Smallest Ritz value of an m-step Lanczos run (no reorthogonalization) from `start`.
template <class Vec, class Op>
double lanczos_min_eigenvalue(const Op& apply, Vec start, int steps) {
  const double n0 = std::sqrt(detail::vdot(start, start));
  if (n0 == 0.0 || steps <= 0) return 0.0;
  Vec q = start / n0;
  Vec q_prev;
  std::vector<double> alpha;
  std::vector<double> beta;
  for (int j = 0; j < steps; ++j) {
    Vec w = apply(q);
    const double a = detail::vdot(q, w);
    alpha.push_back(a);
    w -= a * q;
    if (j > 0) w -= beta.back() * q_prev;
    const double b = std::sqrt(detail::vdot(w, w));
    if (j + 1 == steps || b <= 1e-12 * (std::abs(a) + 1.0)) break;
    beta.push_back(b);
    q_prev = std::move(q);
    q = w / b;
  }
  const Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    t(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

/// mu = min(mu_max, c1 max(0, -lambda) + c2 g), where lambda is the Lanczos estimate of the
/// smallest eigenvalue lowered by the configured slack.
double choose_mu(double lambda_estimate, double gradient_norm, const NewtonConfig& config);

template <class Vec, class Op>
double choose_mu(const Op& apply, Vec start, double gradient_norm, const NewtonConfig& config) {
  return choose_mu(lanczos_min_eigenvalue(apply, std::move(start), config.lanczos_steps), gradient_norm, config);
}

template <class Vec>
struct PcgResult {
  Vec x;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool negative_curvature = false;
  double curvature = 0.0;  // <p, Ap> / <p, p> of the direction that stopped the solve
};

/// Preconditioned CG for A x = b from x = 0, with residual r = A x - b and the preconditioner
/// given as its inverse action. Stops once ||r|| <= eta or after `cap` iterations. `observe`
/// is called as observe(i, x, r) after every iterate, including i = 0.
template <class Vec, class Op, class Precond, class Observer>
PcgResult<Vec> pcg(const Op& apply_a, const Vec& b, const Precond& apply_m_inv, double eta, int cap,
                   Observer&& observe) {
  PcgResult<Vec> res;
  res.x = Vec::Zero(b.size());
  Vec r = -b;
  Vec z = apply_m_inv(r);
  Vec p = -z;
  double rz = detail::vdot(r, z);
  double rnorm = std::sqrt(detail::vdot(r, r));
  observe(0, res.x, r);
  int i = 0;
  while (rnorm > eta && i < cap) {
    const Vec ap = apply_a(p);
    const double pap = detail::vdot(p, ap);
    if (!(pap > 0.0)) {
      res.negative_curvature = true;
      res.curvature = pap / detail::vdot(p, p);
      break;
    }
    const double a = rz / pap;
    res.x += a * p;
    r += a * ap;
    z = apply_m_inv(r);
    const double rz_next = detail::vdot(r, z);
    p = -z + (rz_next / rz) * p;
    rz = rz_next;
    rnorm = std::sqrt(detail::vdot(r, r));
    ++i;
    observe(i, res.x, r);
  }
  res.iterations = i;
  res.residual_norm = rnorm;
  res.converged = rnorm <= eta;
  return res;
}

template <class Vec, class Op, class Precond>
PcgResult<Vec> pcg(const Op& apply_a, const Vec& b, const Precond& apply_m_inv, double eta, int cap) {
  return pcg(apply_a, b, apply_m_inv, eta, cap, [](int, const Vec&, const Vec&) {});
}

/// Componentwise r / (D + delta + mu) over the reduced indices.
ReducedVector precondition_apply(const Eigen::ArrayXd& interaction, double delta, double mu, const ReducedVector& r);

/// True when D_h + delta + mu > 0 for every reduced index.
bool preconditioner_valid(const Eigen::ArrayXd& interaction, double delta, double mu);

struct LineSearchResult {
  double t = 1.0;
  int backtracks = 0;
  FourierField x;
  EnergyBreakdown energy;
  Eigen::ArrayXd samples;
};

/// Armijo backtracking t = rho^n for the smallest n with
/// E(x + t d) <= E(x) + nu t <g, d>, with the energy change taken from
/// PfcProblem::energy_difference. Throws SolverError after max_backtracks reductions or
/// when d is not a descent direction.
LineSearchResult armijo_backtrack(const PfcProblem& problem, const FourierField& x, const Eigen::ArrayXd& samples_x,
                                  const FourierField& d, const FourierField& g, const NewtonConfig& config);

/// Regularized Newton iteration on the mass-zero subspace.
class NewtonPcgMethod : public IterativeMethod {
 public:
  NewtonPcgMethod(const PfcProblem& problem, FourierField x0, NewtonConfig config);

  std::string name() const override { return "newton"; }
  TraceRow step() override;
  const FourierField& current() const override { return x_; }
  const FourierField& gradient() const override { return gradient_; }
  const EnergyBreakdown& energy() const override { return energy_; }

  /// Diagnostics from the last step.
  double last_mu() const { return last_mu_; }
  double last_direction_norm() const { return last_direction_norm_; }
  double last_directional_derivative() const { return last_slope_; }

 private:
  void refresh(Eigen::ArrayXd samples);

  const PfcProblem* problem_;
  NewtonConfig config_;
  FourierField x_;
  FourierField gradient_;
  EnergyBreakdown energy_;
  Eigen::ArrayXd samples_;
  std::mt19937_64 rng_;
  double last_mu_ = 0.0;
  double last_direction_norm_ = 0.0;
  double last_slope_ = 0.0;
};

SolverReport newton_pcg_run(const PfcProblem& problem, FourierField x0, const NewtonConfig& config,
                           const StepObserver& observe = {});

}  // namespace pfc
