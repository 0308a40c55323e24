#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include <json.hpp>

#include "pfc/lattice.hpp"
#include "pfc/model.hpp"
#include "pfc/run_config.hpp"

namespace pfc::testing {

inline std::shared_ptr<const IndexGrid> cubic_grid(int n, double scale = 1.0) {
  return std::make_shared<const IndexGrid>(LatticeSpec::periodic({n, n, n}, scale));
}

inline std::shared_ptr<const IndexGrid> qc_grid(int n) {
  LatticeSpec spec = LatticeSpec::periodic({n, n, n, n}, 1.0);
  const double c6 = std::cos(M_PI / 6.0), s6 = std::sin(M_PI / 6.0);
  spec.projection.resize(2, 4);
  spec.projection << 1.0, c6, s6, 0.0, 0.0, s6, c6, 1.0;
  spec.physical_dimension = 2;
  return std::make_shared<const IndexGrid>(spec);
}

inline ModelSpec dg_model() { return ModelSpec::landau_brazovskii(0.1, -2.0, 2.0); }
inline ModelSpec qc_model() { return ModelSpec::lifshitz_petrich(24.0, 1.0, 2.0 * std::cos(M_PI / 12.0), -6.0, 6.0); }

/// Seeded double-gyroid problem at n^3 modes, from the dg-smoke preset.
struct SeededProblem {
  std::shared_ptr<const IndexGrid> grid;
  std::unique_ptr<PfcProblem> problem;
  FourierField x0;
};

inline SeededProblem dg_seeded(int n) {
  const RunConfig config = parse_run_config(nlohmann::json{{"preset", "dg-smoke"}, {"lattice", {{"modes", {n, n, n}}}}});
  SeededProblem s;
  s.grid = std::make_shared<const IndexGrid>(config.lattice);
  s.problem = std::make_unique<PfcProblem>(s.grid, config.model, config.padding);
  s.x0 = build_initial(config, *s.grid);
  return s;
}

/// Random Hermitian, mass-zero field with entries of size ~scale.
inline FourierField random_field(const IndexGrid& grid, std::uint64_t seed, double scale = 0.1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, scale);
  FourierField x(grid.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double re = n(rng);
    const double im = n(rng);
    x(i) = Complex(re, im);
  }
  return project_mass_zero(hermitian_symmetrize(grid, x));
}

/// Random field whose amplitudes decay with |h| so physical values stay O(1).
inline FourierField smooth_field(const IndexGrid& grid, std::uint64_t seed, double scale = 0.3) {
  FourierField x = random_field(grid, seed, scale);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double h2 = 0.0;
    for (int c : grid.index(i)) h2 += c * c;
    x(i) *= std::exp(-0.5 * h2);
  }
  return x;
}

}  // namespace pfc::testing
