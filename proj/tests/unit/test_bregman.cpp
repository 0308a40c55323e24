#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "../support.hpp"
#include "pfc/bregman.hpp"
#include "pfc/errors.hpp"

using namespace pfc;

namespace {

struct Instance {
  Eigen::VectorXcd psi, grad;
  Eigen::ArrayXd d;
  double alpha;
};

Instance random_instance(std::mt19937_64& rng, Eigen::Index n = 8) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(0.0, 2.0);
  Instance in;
  in.psi.resize(n);
  in.grad.resize(n);
  in.d.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    in.psi(i) = Complex(nd(rng), nd(rng));
    in.grad(i) = Complex(nd(rng), nd(rng));
    in.d(i) = u(rng);
  }
  in.psi(0) = 0.0;
  in.alpha = 0.05 + u(rng);
  return in;
}

}  // namespace

TEST_CASE("Bregman divergence") {
  std::mt19937_64 rng(1);
  const Instance in = random_instance(rng);
  const Eigen::VectorXcd y = in.grad;
  CHECK(bregman_divergence(BregmanKernel::p4(1.0, 1.0), in.psi, in.psi) == doctest::Approx(0.0));
  CHECK(bregman_divergence(BregmanKernel::p2(), in.psi, y) == doctest::Approx(0.5 * (in.psi - y).squaredNorm()));

  Eigen::VectorXcd x2(1), x1(1);
  x2 << 2.0;
  x1 << 1.0;
  CHECK(bregman_divergence(BregmanKernel::p4(1.0, 1.0), x2, x1) == doctest::Approx(3.25));

  SUBCASE("strong convexity with modulus b") {
    const BregmanKernel k = BregmanKernel::p4(0.3, 0.7);
    for (int t = 0; t < 20; ++t) {
      const Instance a = random_instance(rng);
      CHECK(bregman_divergence(k, a.psi, a.grad) >= 0.5 * k.modulus() * (a.psi - a.grad).squaredNorm());
    }
  }
}

TEST_CASE("P2 prox step") {
  std::mt19937_64 rng(2);
  const Instance in = random_instance(rng);
  SUBCASE("no bulk force is a pure shrink") {
    const FourierField out = prox_p2(in.psi, Eigen::VectorXcd::Zero(8), in.alpha, in.d);
    const FourierField expected = in.psi.array() / (1.0 + in.alpha * in.d);
    CHECK((out - expected).norm() < 1e-15);
  }
  SUBCASE("no interaction is a projected gradient step") {
    const FourierField out = prox_p2(in.psi, in.grad, in.alpha, Eigen::ArrayXd::Zero(8));
    CHECK((out - project_mass_zero(in.psi - in.alpha * in.grad)).norm() < 1e-15);
  }
  SUBCASE("matches the descent oracle") {
    for (int t = 0; t < 5; ++t) {
      const Instance r = random_instance(rng);
      const FourierField out = prox_p2(r.psi, r.grad, r.alpha, r.d);
      const Eigen::VectorXcd ref = oracle::prox_descent(BregmanKernel::p2(), r.psi, r.grad, r.alpha, r.d);
      CHECK((out - ref).norm() < 1e-8);
      CHECK(out(0) == Complex(0.0, 0.0));
    }
  }
  CHECK_THROWS_AS(prox_p2(in.psi, in.grad, 0.0, in.d), ConfigError);
}

TEST_CASE("radius fixed point") {
  SUBCASE("zero beta") {
    CHECK(solve_radius_fixed_point(Eigen::VectorXcd::Zero(4), Eigen::ArrayXd::Ones(4), 0.3, 1.0, 1.0).radius == 0.0);
  }
  SUBCASE("scalar cubic p (1 + p)^2 = 4") {
    Eigen::VectorXcd beta(1);
    beta << 2.0;
    const RadiusSolve s = solve_radius_fixed_point(beta, Eigen::ArrayXd::Zero(1), 0.7, 1.0, 1.0);
    CHECK(s.radius == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.radius * (1 + s.radius) * (1 + s.radius) == doctest::Approx(4.0).epsilon(1e-13));
  }
  SUBCASE("residual brackets the root") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
      const Instance in = random_instance(rng);
      const double a = 0.1 + in.d(1), b = 0.1 + in.d(2);
      const double p = solve_radius_fixed_point(in.psi, in.d, in.alpha, a, b).radius;
      CHECK(radius_residual(in.psi, in.d, in.alpha, a, b, 0.5 * p) > 0.0);
      CHECK(radius_residual(in.psi, in.d, in.alpha, a, b, 2.0 * p + 1.0) < 0.0);
    }
  }
  CHECK_THROWS_AS(solve_radius_fixed_point(Eigen::VectorXcd::Ones(2), Eigen::ArrayXd::Ones(2), 1.0, 0.0, 1.0),
                  ConfigError);
}

TEST_CASE("P4 prox step") {
  std::mt19937_64 rng(4);
  SUBCASE("zero input") {
    const FourierField out = prox_p4(Eigen::VectorXcd::Zero(8), Eigen::VectorXcd::Zero(8), 0.5,
                                     Eigen::ArrayXd::Ones(8), BregmanKernel::p4(1.0, 1.0));
    CHECK(out.norm() == 0.0);
  }
  SUBCASE("vanishing quartic weight reduces to a scaled P2 step") {
    const Instance in = random_instance(rng);
    const double b = 2.5;
    const FourierField p4 = prox_p4(in.psi, in.grad, in.alpha, Eigen::ArrayXd::Zero(8), BregmanKernel::p4(1e-12, b));
    const FourierField p2 = prox_p2(in.psi, in.grad, in.alpha / b, Eigen::ArrayXd::Zero(8));
    CHECK((p4 - p2).norm() < 1e-8);
  }
  SUBCASE("matches the descent oracle and the radius identity") {
    for (int t = 0; t < 5; ++t) {
      const Instance in = random_instance(rng);
      const BregmanKernel k = BregmanKernel::p4(0.2 + 0.1 * t, 0.5 + 0.2 * t);
      double radius = -1.0;
      const FourierField out = prox_p4(in.psi, in.grad, in.alpha, in.d, k, &radius);
      const Eigen::VectorXcd ref = oracle::prox_descent(k, in.psi, in.grad, in.alpha, in.d);
      CHECK((out - ref).norm() < 1e-8);
      CHECK(std::abs(out.squaredNorm() - radius) < 1e-10 * std::max(1.0, radius));
      CHECK(prox_kkt_residual(k, out, in.psi, in.grad, in.alpha, in.d) < 1e-10);
    }
  }
}
