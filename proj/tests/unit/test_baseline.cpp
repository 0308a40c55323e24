#include <doctest.h>

#include <cmath>

#include "../support.hpp"
#include "pfc/baseline.hpp"
#include "pfc/bregman.hpp"
#include "pfc/errors.hpp"
#include "pfc/newton_pcg.hpp"

using namespace pfc;
using namespace pfc::testing;

namespace {

// Converged stationary point for fixed-point checks.
FourierField stationary_point(const PfcProblem& problem, const FourierField& x0) {
  NewtonConfig config;
  config.tolerance = 1e-11;
  const SolverReport r = newton_pcg_run(problem, x0, config);
  REQUIRE(r.converged());
  return r.solution;
}

bool monotone(const SolverReport& r) {
  for (std::size_t k = 1; k < r.trace.size(); ++k)
    if (r.trace[k].energy > r.trace[k - 1].energy + 1e-12 * std::abs(r.trace[k - 1].energy)) return false;
  return true;
}

}  // namespace

TEST_CASE("baseline step formulas") {
  const SeededProblem dg = dg_seeded(8);
  const PfcProblem& problem = *dg.problem;
  const FourierField x = smooth_field(*dg.grid, 22, 0.5);

  CHECK(sis_step(problem, x, 0.2) == prox_p2(problem, x, 0.2));
  CHECK(ssis1_step(problem, x, 0.2, 0.0) == sis_step(problem, x, 0.2));

  SUBCASE("zero bulk force is a diagonal shrink") {
    const FourierField zero_force = FourierField::Zero(problem.size());
    const FourierField out = prox_p2(x, zero_force, 0.3, problem.interaction());
    const FourierField expected = project_mass_zero((x.array() / (1.0 + 0.3 * problem.interaction())).matrix());
    CHECK((out - expected).norm() < 1e-15);
  }

  SUBCASE("stabilized step matches its defining equation") {
    const double alpha = 0.3, s = 2.0;
    const FourierField out = ssis1_step(problem, x, alpha, s);
    const FourierField lhs = ((1.0 + alpha * problem.interaction() + alpha * s) * out.array()).matrix();
    const FourierField rhs = project_mass_zero((1.0 + alpha * s) * x - alpha * problem.bulk_gradient(x));
    CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
  }

  SUBCASE("stationary points are fixed points") {
    const FourierField xs = stationary_point(problem, dg.x0);
    CHECK((sis_step(problem, xs, 0.2) - xs).norm() < 1e-10);
    CHECK((ssis1_step(problem, xs, 1e4, 8.0) - xs).norm() < 1e-8);
    CHECK((ssis1_step(problem, xs, 0.5, 3.0) - xs).norm() < 1e-10);
    CHECK((ssis2_step(problem, xs, xs, 0.1, 1.0) - xs).norm() < 1e-10);
  }
}

TEST_CASE("baseline runs") {
  const SeededProblem dg = dg_seeded(8);
  const PfcProblem& problem = *dg.problem;
  const FourierField& x0 = dg.x0;

  SUBCASE("SIS is monotone and mass-conserving") {
    BaselineConfig config;
    config.alpha = 0.2;
    config.max_iterations = 3000;
    const SolverReport r = baseline_run(problem, x0, config);
    CHECK(r.converged());
    CHECK(monotone(r));
    CHECK(r.solution(0) == Complex(0.0, 0.0));
  }

  SUBCASE("SSIS1 with a huge step stays bounded") {
    BaselineConfig config;
    config.scheme = BaselineScheme::SSIS1;
    config.alpha = 1e4;
    config.stabilization = 8.0;
    config.max_iterations = 3000;
    const SolverReport r = baseline_run(problem, x0, config);
    CHECK(r.converged());
    CHECK(monotone(r));
  }

  SUBCASE("SSIS2") {
    BaselineConfig config;
    config.scheme = BaselineScheme::SSIS2;
    config.alpha = 0.1;
    config.stabilization = 1.0;
    config.max_iterations = 3000;
    const SolverReport r = baseline_run(problem, x0, config);
    CHECK(r.converged());
    CHECK(monotone(r));
  }

  SUBCASE("stationary start") {
    const SolverReport r = baseline_run(problem, FourierField::Zero(problem.size()), BaselineConfig{});
    CHECK(r.iterations == 0);
  }

  SUBCASE("names and validation") {
    CHECK(parse_baseline_scheme("ssis2") == BaselineScheme::SSIS2);
    CHECK(to_string(BaselineScheme::SSIS1) == "ssis1");
    CHECK_THROWS_AS(parse_baseline_scheme("ssis3"), ConfigError);
    BaselineConfig config;
    config.alpha = -1.0;
    CHECK_THROWS_AS(baseline_run(problem, x0, config), ConfigError);
  }
}
