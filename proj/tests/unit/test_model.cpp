#include <doctest.h>

#include <cmath>

#include "../support.hpp"
#include "pfc/errors.hpp"
#include "pfc/model.hpp"

using namespace pfc;

namespace {

double fd_relative_error(const PfcProblem& p, const FourierField& x, std::uint64_t seed) {
  const FourierField v = testing::random_field(p.grid(), seed, 1.0).normalized();
  const double h = 1e-5;
  const double fd = (p.energy(x + h * v).total - p.energy(x - h * v).total) / (2.0 * h);
  const double an = inner(p.gradient(x), v);
  return std::abs(fd - an) / std::abs(an);
}

}  // namespace

TEST_CASE("energy of simple fields") {
  auto grid = testing::cubic_grid(4, 0.5);
  SUBCASE("zero field") {
    PfcProblem p(grid, testing::dg_model());
    const EnergyBreakdown e = p.energy(FourierField::Zero(grid->size()));
    CHECK(e.interaction == 0.0);
    CHECK(e.bulk == 0.0);
    CHECK(e.total == 0.0);
  }
  SUBCASE("constant LB field") {
    const double xi = 0.7, tau = -0.3, gamma = 1.1, a = 0.45;
    PfcProblem p(grid, ModelSpec::landau_brazovskii(xi, tau, gamma));
    FourierField x = FourierField::Zero(grid->size());
    x(0) = a;
    const EnergyBreakdown e = p.energy(x);
    CHECK(e.interaction == doctest::Approx(0.5 * xi * xi * a * a).epsilon(1e-14));
    CHECK(e.bulk == doctest::Approx(tau * a * a / 2 - gamma * a * a * a / 6 + a * a * a * a / 24).epsilon(1e-14));
  }
}

TEST_CASE("bulk gradient of a constant LP field") {
  auto grid = testing::qc_grid(2);
  const ModelSpec m = testing::qc_model();
  PfcProblem p(grid, m);
  const double a = 0.3;
  FourierField x = FourierField::Zero(grid->size());
  x(0) = a;
  const FourierField g = p.bulk_gradient(x);
  CHECK(g(0).real() == doctest::Approx(m.epsilon * a - m.kappa * a * a + a * a * a).epsilon(1e-14));
  CHECK(g.tail(g.size() - 1).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(p.gradient(FourierField::Zero(grid->size())).norm() == 0.0);
}

TEST_CASE("gradient vanishes on the D = 0 shell without bulk terms") {
  auto grid = testing::cubic_grid(4, 1.0 / std::sqrt(6.0));
  PfcProblem p(grid, ModelSpec::landau_brazovskii(0.1, 0.0, 0.0));
  // The quartic term has no parameter, so check the interaction part only.
  FourierField x = FourierField::Zero(grid->size());
  const std::vector<int> h{1, 1, 2};
  const std::vector<int> mh{-1, -1, -2};
  x(grid->find(h)) = 0.2;
  x(grid->find(mh)) = 0.2;
  CHECK((p.interaction() * x.array()).abs().maxCoeff() < 1e-16);
}

TEST_CASE("gradient matches central differences") {
  SUBCASE("LB 8^3") {
    auto grid = testing::cubic_grid(8, 1.0 / std::sqrt(6.0));
    PfcProblem p(grid, testing::dg_model());
    const FourierField x = testing::smooth_field(*grid, 5);
    for (std::uint64_t s = 0; s < 10; ++s) CHECK(fd_relative_error(p, x, 100 + s) < 1e-6);
  }
  SUBCASE("LP 4^4") {
    auto grid = testing::qc_grid(4);
    PfcProblem p(grid, testing::qc_model());
    const FourierField x = testing::smooth_field(*grid, 6);
    for (std::uint64_t s = 0; s < 10; ++s) CHECK(fd_relative_error(p, x, 200 + s) < 1e-6);
  }
}

TEST_CASE("Hessian-vector products") {
  auto grid = testing::qc_grid(4);
  const ModelSpec m = testing::qc_model();
  PfcProblem p(grid, m);
  const FourierField v = testing::random_field(*grid, 9, 1.0);

  SUBCASE("zero direction") { CHECK(p.hessian_vec(testing::smooth_field(*grid, 1), FourierField::Zero(grid->size())).norm() == 0.0); }
  SUBCASE("at the zero field the bulk part is epsilon") {
    const FourierField hv = p.hessian_vec(FourierField::Zero(grid->size()), v);
    const FourierField expected = (p.interaction() + m.epsilon) * v.array();
    CHECK((hv - expected).norm() < 1e-12 * expected.norm());
  }
  SUBCASE("matches differences of the gradient") {
    const FourierField x = testing::smooth_field(*grid, 4);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const FourierField d = testing::random_field(*grid, 300 + s, 1.0).normalized();
      const double h = 1e-5;
      const FourierField fd = (p.gradient(x + h * d) - p.gradient(x - h * d)) / (2.0 * h);
      const FourierField an = p.hessian_vec(x, d);
      CHECK((fd - an).norm() / an.norm() < 1e-6);
    }
  }
  SUBCASE("symmetric on real fields") {
    const FourierField x = testing::smooth_field(*grid, 4);
    const FourierField u = testing::random_field(*grid, 21, 1.0);
    const HessianOperator hess = p.hessian_at(x);
    CHECK(std::abs(inner(hess(u), v) - inner(u, hess(v))) < 1e-10 * hess(u).norm() * v.norm());
  }
}

TEST_CASE("maximum second derivative of the bulk density") {
  const ModelSpec lp = testing::qc_model();
  const ModelSpec lb = testing::dg_model();
  auto grid = testing::qc_grid(2);
  CHECK(PfcProblem(grid, lp).max_second_derivative(FourierField::Zero(grid->size())) == doctest::Approx(lp.epsilon));
  auto cube = testing::cubic_grid(2);
  CHECK(PfcProblem(cube, lb).max_second_derivative(FourierField::Zero(cube->size())) == doctest::Approx(lb.tau));
  Eigen::ArrayXd samples(3);
  samples << 0.0, 1.0, 2.0;
  const double e = lp.epsilon, k = lp.kappa;
  CHECK(max_second_derivative(bulk_polynomial(lp), samples) ==
        doctest::Approx(std::max({e, e - 2 * k + 3, e - 4 * k + 12})));
}

TEST_CASE("energy difference agrees with the difference of energies") {
  auto grid = testing::cubic_grid(8, 1.0 / std::sqrt(6.0));
  PfcProblem p(grid, testing::dg_model());
  const FourierField x = testing::smooth_field(*grid, 31);
  const FourierField z = x + 0.01 * testing::smooth_field(*grid, 32);
  Eigen::ArrayXd sx;
  const double ex = p.energy(x, sx).total;
  CHECK(p.energy_difference(x, sx, z) == doctest::Approx(p.energy(z).total - ex).epsilon(1e-9));
  CHECK(p.energy_difference(x, sx, x) == 0.0);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(ModelSpec::landau_brazovskii(0.0, 1.0, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(ModelSpec::lifshitz_petrich(-1.0, 1.0, 2.0, 0.0, 0.0).validate(), ConfigError);
  CHECK_THROWS_AS(ModelSpec::lifshitz_petrich(1.0, 1.0, 1.0, 0.0, 0.0).validate(), ConfigError);
  CHECK_THROWS_AS(ModelSpec::landau_brazovskii(1.0, NAN, 1.0).validate(), ConfigError);
}

TEST_CASE("non-finite fields raise numerical errors") {
  auto grid = testing::cubic_grid(4);
  PfcProblem p(grid, testing::dg_model());
  FourierField x = FourierField::Zero(grid->size());
  x(1) = Complex(INFINITY, 0.0);
  CHECK_THROWS_AS(p.energy(x), NumericalError);
}
