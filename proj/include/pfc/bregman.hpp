#pragma once

#include <Eigen/Core>

#include "pfc/lattice.hpp"

namespace pfc {

class PfcProblem;

/// Bregman kernels h(x) = ||x||^2 / 2 (P2) or a/4 ||x||^4 + b/2 ||x||^2 + 1 (P4).
struct BregmanKernel {
  enum class Kind { P2, P4 };
  Kind kind = Kind::P2;
  double a = 0.0;
  double b = 1.0;

  static BregmanKernel p2() { return {}; }
  static BregmanKernel p4(double a, double b) { return {Kind::P4, a, b}; }

  /// Strong convexity modulus sigma.
  double modulus() const { return kind == Kind::P2 ? 1.0 : b; }
  double value(const FourierField& x) const;
  FourierField gradient(const FourierField& x) const;
  void validate() const;
};

/// D_h(x, y) = h(x) - h(y) - <grad h(y), x - y>.
double bregman_divergence(const BregmanKernel& kernel, const FourierField& x, const FourierField& y);

/// Euclidean prox step with the mass constraint:
/// (I + alpha D)^{-1} (psi - alpha P_1 grad F(psi)).
FourierField prox_p2(const FourierField& psi, const FourierField& bulk_grad_psi, double alpha,
                     const Eigen::ArrayXd& interaction);
FourierField prox_p2(const PfcProblem& problem, const FourierField& psi, double alpha);

struct RadiusSolve {
  double radius = 0.0;  // p*
  int iterations = 0;
};

/// Unique root p* >= 0 of r(p) - p with r(p) = || [alpha D + (a p + b) I]^{-1} beta ||^2.
/// Safeguarded Newton on the bracket [0, r(0)], bisection fallback, at most 200 iterations.
RadiusSolve solve_radius_fixed_point(const FourierField& beta, const Eigen::ArrayXd& interaction, double alpha,
                                     double a, double b);

/// r(p) - p, exposed for tests and diagnostics.
double radius_residual(const FourierField& beta, const Eigen::ArrayXd& interaction, double alpha, double a,
                       double b, double p);

/// Quartic-kernel prox step: [alpha D + (a p* + b) I]^{-1} (grad h(psi) - alpha P_1 grad F(psi)).
FourierField prox_p4(const FourierField& psi, const FourierField& bulk_grad_psi, double alpha,
                     const Eigen::ArrayXd& interaction, const BregmanKernel& kernel, double* radius = nullptr);
FourierField prox_p4(const PfcProblem& problem, const FourierField& psi, double alpha, const BregmanKernel& kernel);

/// Dispatches on the kernel kind.
FourierField bregman_prox(const BregmanKernel& kernel, const FourierField& psi, const FourierField& bulk_grad_psi,
                          double alpha, const Eigen::ArrayXd& interaction);

/// Value of the prox subproblem
/// G(x) + <grad F(psi), x - psi> + D_h(x, psi) / alpha   (x assumed mass-zero).
double prox_objective(const BregmanKernel& kernel, const FourierField& x, const FourierField& psi,
                      const FourierField& bulk_grad_psi, double alpha, const Eigen::ArrayXd& interaction);

/// Norm of the stationarity residual of the prox KKT system, with the multiplier eliminated
/// by projecting onto the mass-zero subspace, plus |e_1^T x|.
double prox_kkt_residual(const BregmanKernel& kernel, const FourierField& x, const FourierField& psi,
                         const FourierField& bulk_grad_psi, double alpha, const Eigen::ArrayXd& interaction);

/// Default P4 coefficients: a = quartic_coefficient / 4, b = 1.
BregmanKernel default_p4_kernel(double quartic_coefficient);

}  // namespace pfc
