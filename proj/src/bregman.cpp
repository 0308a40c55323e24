#include "pfc/bregman.hpp"

#include <cmath>
#include <limits>

#include "pfc/errors.hpp"
#include "pfc/model.hpp"

namespace pfc {

void BregmanKernel::validate() const {
  if (kind == Kind::P4 && !(a > 0.0 && b > 0.0)) throw ConfigError("P4 kernel requires a > 0 and b > 0");
}

double BregmanKernel::value(const FourierField& x) const {
  const double s = x.squaredNorm();
  if (kind == Kind::P2) return 0.5 * s;
  return 0.25 * a * s * s + 0.5 * b * s + 1.0;
}

FourierField BregmanKernel::gradient(const FourierField& x) const {
  if (kind == Kind::P2) return x;
  return (a * x.squaredNorm() + b) * x;
}

double bregman_divergence(const BregmanKernel& kernel, const FourierField& x, const FourierField& y) {
  if (kernel.kind == BregmanKernel::Kind::P2) return 0.5 * (x - y).squaredNorm();
  return kernel.value(x) - kernel.value(y) - inner(kernel.gradient(y), x - y);
}

FourierField prox_p2(const FourierField& psi, const FourierField& bulk_grad_psi, double alpha,
                     const Eigen::ArrayXd& interaction) {
  if (!(alpha > 0.0)) throw ConfigError("prox step size must be positive");
  FourierField out = (psi - alpha * project_mass_zero(bulk_grad_psi)).array() / (1.0 + alpha * interaction);
  out(0) = 0.0;
  return out;
}

FourierField prox_p2(const PfcProblem& problem, const FourierField& psi, double alpha) {
  return prox_p2(psi, problem.bulk_gradient(psi), alpha, problem.interaction());
}

namespace {

struct RadiusTerms {
  double r = 0.0;      // r(p)
  double slope = 0.0;  // r'(p)
};

RadiusTerms radius_terms(const Eigen::ArrayXd& beta2, const Eigen::ArrayXd& interaction, double alpha, double a,
                         double b, double p) {
  const Eigen::ArrayXd inv = 1.0 / (alpha * interaction + (a * p + b));
  const Eigen::ArrayXd t = beta2 * inv.square();
  return {t.sum(), -2.0 * a * (t * inv).sum()};
}

}  // namespace

double radius_residual(const FourierField& beta, const Eigen::ArrayXd& interaction, double alpha, double a,
                       double b, double p) {
  return radius_terms(beta.cwiseAbs2().array(), interaction, alpha, a, b, p).r - p;
}

RadiusSolve solve_radius_fixed_point(const FourierField& beta, const Eigen::ArrayXd& interaction, double alpha,
                                     double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw ConfigError("radius fixed point requires a > 0 and b > 0");
  if (!(alpha > 0.0)) throw ConfigError("prox step size must be positive");
  const Eigen::ArrayXd beta2 = beta.cwiseAbs2().array();

  // R(0) >= 0 and R is strictly decreasing and convex, so the root lies in [0, r(0)] and
  // Newton iterates started from the left stay left of it.
  double lo = 0.0;
  double hi = radius_terms(beta2, interaction, alpha, a, b, 0.0).r;
  if (hi == 0.0) return {0.0, 0};
  if (!std::isfinite(hi)) throw NumericalError("non-finite radius bracket");

  double p = lo;
  for (int it = 1; it <= 200; ++it) {
    const RadiusTerms t = radius_terms(beta2, interaction, alpha, a, b, p);
    const double residual = t.r - p;
    if (std::abs(residual) < 1e-13 * (1.0 + p)) return {p, it};
    if (residual > 0.0)
      lo = p;
    else
      hi = p;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + hi)) return {p, it};

    const double slope = t.slope - 1.0;
    double next = p - residual / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    p = next;
  }
  throw SolverError("radius fixed point did not converge in 200 iterations");
}

FourierField prox_p4(const FourierField& psi, const FourierField& bulk_grad_psi, double alpha,
                     const Eigen::ArrayXd& interaction, const BregmanKernel& kernel, double* radius) {
  if (kernel.kind != BregmanKernel::Kind::P4) throw ConfigError("prox_p4 requires a P4 kernel");
  kernel.validate();
  if (!(alpha > 0.0)) throw ConfigError("prox step size must be positive");
  FourierField beta = kernel.gradient(psi) - alpha * project_mass_zero(bulk_grad_psi);
  beta(0) = 0.0;
  const RadiusSolve solve = solve_radius_fixed_point(beta, interaction, alpha, kernel.a, kernel.b);
  if (radius) *radius = solve.radius;
  FourierField out = beta.array() / (alpha * interaction + (kernel.a * solve.radius + kernel.b));
  out(0) = 0.0;
  return out;
}

FourierField prox_p4(const PfcProblem& problem, const FourierField& psi, double alpha, const BregmanKernel& kernel) {
  return prox_p4(psi, problem.bulk_gradient(psi), alpha, problem.interaction(), kernel);
}

FourierField bregman_prox(const BregmanKernel& kernel, const FourierField& psi, const FourierField& bulk_grad_psi,
                          double alpha, const Eigen::ArrayXd& interaction) {
  if (kernel.kind == BregmanKernel::Kind::P2) return prox_p2(psi, bulk_grad_psi, alpha, interaction);
  return prox_p4(psi, bulk_grad_psi, alpha, interaction, kernel);
}

double prox_objective(const BregmanKernel& kernel, const FourierField& x, const FourierField& psi,
                      const FourierField& bulk_grad_psi, double alpha, const Eigen::ArrayXd& interaction) {
  const double g = 0.5 * (interaction * x.cwiseAbs2().array()).sum();
  return g + inner(bulk_grad_psi, x - psi) + bregman_divergence(kernel, x, psi) / alpha;
}

double prox_kkt_residual(const BregmanKernel& kernel, const FourierField& x, const FourierField& psi,
                         const FourierField& bulk_grad_psi, double alpha, const Eigen::ArrayXd& interaction) {
  FourierField stationarity = bulk_grad_psi + (kernel.gradient(x) - kernel.gradient(psi)) / alpha;
  stationarity.array() += interaction * x.array();
  return project_mass_zero(stationarity).norm() + std::abs(x(0));
}

BregmanKernel default_p4_kernel(double quartic_coefficient) {
  return BregmanKernel::p4(0.25 * quartic_coefficient, 1.0);
}

}  // namespace pfc
