#include <doctest.h>

#include <cmath>
#include <limits>

#include "../support.hpp"
#include "pfc/errors.hpp"
#include "pfc/hybrid.hpp"

using namespace pfc;
using namespace pfc::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SolverReport fake_report(double energy, double seconds) {
  SolverReport r;
  r.termination = Termination::Converged;
  r.energy.total = energy;
  r.seconds = seconds;
  return r;
}

}  // namespace

TEST_CASE("switch rule") {
  const SwitchRule rule{1e-4, 1e-3};
  CHECK(should_switch(-1.0, -1.0, 1.0, rule));
  CHECK(should_switch(-1.0, -0.5, 1e-4, rule));
  CHECK_FALSE(should_switch(-1.0, -2.0, 1.0, rule));
  CHECK_FALSE(should_switch(-1.0, -1.0, 1.0, SwitchRule{0.0, 0.0}));
  CHECK(SwitchRule{kInf, 0.0}.immediate());
  CHECK_FALSE(rule.immediate());
  CHECK_THROWS_AS(SwitchRule({-1.0, 0.0}).validate(), ConfigError);
}

TEST_CASE("acceleration ratio") {
  CHECK(acceleration_ratio(fake_report(-1.0, 2.0), fake_report(-1.0, 2.0)) == 1.0);
  CHECK(acceleration_ratio(fake_report(-1.0, 2.0), fake_report(-1.0, 1.0)) == 2.0);
  CHECK_THROWS_AS(acceleration_ratio(fake_report(-1.0, 2.0), fake_report(-1.1, 1.0)), ConfigError);
  SolverReport unfinished = fake_report(-1.0, 1.0);
  unfinished.termination = Termination::IterationLimit;
  CHECK_THROWS_AS(acceleration_ratio(fake_report(-1.0, 2.0), unfinished), ConfigError);
}

TEST_CASE("hybrid runs") {
  const SeededProblem dg = dg_seeded(8);
  const PfcProblem& problem = *dg.problem;
  const FourierField& x0 = dg.x0;

  HybridConfig config;
  config.tolerance = 1e-9;
  config.max_iterations = 3000;
  config.baseline.alpha = 0.2;

  SUBCASE("infinite thresholds run Newton from the start") {
    config.rule = {kInf, 0.0};
    const SolverReport r = hybrid_run(problem, x0, config);
    REQUIRE(r.switch_row.has_value());
    CHECK(*r.switch_row == 1);
    for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k].phase == "newton");
    CHECK(r.converged());
  }

  SUBCASE("zero thresholds never switch") {
    config.rule = {0.0, 0.0};
    const SolverReport r = hybrid_run(problem, x0, config);
    CHECK_FALSE(r.switch_row.has_value());
    for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k].phase == "aabpg2");
    const SolverReport plain = aabpg_run(problem, x0, config.aabpg);
    CHECK(r.iterations == plain.iterations);
    CHECK(r.solution == plain.solution);
  }

  SUBCASE("switch hands over the current state") {
    config.rule = {0.0, 1e-2};
    for (FirstStage first : {FirstStage::AabpgP2, FirstStage::Baseline}) {
      config.first = first;
      const SolverReport r = hybrid_run(problem, x0, config);
      REQUIRE(r.switch_row.has_value());
      const std::size_t s = *r.switch_row;
      REQUIRE(s >= 2);
      CHECK(r.trace[s].phase == "newton");
      CHECK(r.trace[s - 1].phase != "newton");
      CHECK(r.trace[s].energy <= r.trace[s - 1].energy);
      CHECK(r.converged());
      CHECK(r.gradient_norm < config.tolerance);
      for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k].iteration == static_cast<int>(k));
    }
    CHECK(hybrid_name(config) == "n-sis");
  }
}
