#pragma once

// Reference computations written independently of the library code paths.

#include <cmath>

#include <Eigen/Core>

#include "pfc/bregman.hpp"

namespace pfc::oracle {

/// r(p) - p by direct summation.
inline double reference_residual(const Eigen::VectorXcd& beta, const Eigen::ArrayXd& d, double alpha, double a,
                              double b, double p) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    const double den = alpha * d(i) + a * p + b;
    r += std::norm(beta(i)) / (den * den);
  }
  return r - p;
}

/// Root of r(p) - p by plain bisection on [0, r(0)].
inline double radius_bisection(const Eigen::VectorXcd& beta, const Eigen::ArrayXd& d, double alpha, double a,
                               double b) {
  double lo = 0.0;
  double hi = reference_residual(beta, d, alpha, a, b, 0.0);
  if (hi <= 0.0) return 0.0;
  for (int it = 0; it < 2000 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (reference_residual(beta, d, alpha, a, b, mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Objective of the prox subproblem over vectors with x(0) = 0.
inline double reference_objective(const BregmanKernel& k, const Eigen::VectorXcd& x, const Eigen::VectorXcd& psi,
                             const Eigen::VectorXcd& g, double alpha, const Eigen::ArrayXd& d) {
  auto h = [&k](const Eigen::VectorXcd& v) {
    const double s = v.squaredNorm();
    return k.kind == BregmanKernel::Kind::P2 ? 0.5 * s : 0.25 * k.a * s * s + 0.5 * k.b * s + 1.0;
  };
  auto grad_h = [&k](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    return k.kind == BregmanKernel::Kind::P2 ? v : ((k.a * v.squaredNorm() + k.b) * v).eval();
  };
  const double quad = 0.5 * (d * x.cwiseAbs2().array()).sum();
  const double lin = g.dot(x - psi).real();
  const double breg = h(x) - h(psi) - grad_h(psi).dot(x - psi).real();
  return quad + lin + breg / alpha;
}

/// Projected gradient descent from x = 0 on the prox subproblem.
inline Eigen::VectorXcd prox_descent(const BregmanKernel& k, const Eigen::VectorXcd& psi, const Eigen::VectorXcd& g,
                                     double alpha, const Eigen::ArrayXd& d, double tol = 1e-13) {
  auto grad = [&](const Eigen::VectorXcd& x) {
    Eigen::VectorXcd gh_x = k.kind == BregmanKernel::Kind::P2 ? x : ((k.a * x.squaredNorm() + k.b) * x).eval();
    Eigen::VectorXcd gh_p = k.kind == BregmanKernel::Kind::P2 ? psi : ((k.a * psi.squaredNorm() + k.b) * psi).eval();
    Eigen::VectorXcd out = (d * x.array()).matrix() + g + (gh_x - gh_p) / alpha;
    out(0) = 0.0;
    return out;
  };
  // Fixed step 1/L, with L bounding the Hessian on the segment to the next iterate; the step is
  // never longer than alpha / b, which bounds how far the iterate can move.
  const double b = k.kind == BregmanKernel::Kind::P2 ? 1.0 : k.b;
  const double a = k.kind == BregmanKernel::Kind::P2 ? 0.0 : k.a;
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(psi.size());
  for (int it = 0; it < 1000000; ++it) {
    const Eigen::VectorXcd gx = grad(x);
    if (gx.norm() < tol) break;
    const double reach = x.norm() + gx.norm() * alpha / b;
    const double lipschitz = d.maxCoeff() + (3.0 * a * reach * reach + b) / alpha;
    x -= gx / lipschitz;
  }
  return x;
}

}  // namespace pfc::oracle
