#include "pfc/lattice.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "pfc/errors.hpp"

namespace pfc {

LatticeSpec LatticeSpec::periodic(std::vector<int> modes, double scale) {
  LatticeSpec spec;
  const int n = static_cast<int>(modes.size());
  spec.dimension = n;
  spec.physical_dimension = n;
  spec.modes = std::move(modes);
  spec.basis = scale * Eigen::MatrixXd::Identity(n, n);
  spec.projection = Eigen::MatrixXd::Identity(n, n);
  return spec;
}

LatticeSpec LatticeSpec::periodic_box(std::vector<int> modes, const std::vector<double>& lengths) {
  if (lengths.size() != modes.size()) throw ConfigError("domain lengths must match the number of mode counts");
  LatticeSpec spec = periodic(std::move(modes), 1.0);
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    if (!(lengths[j] > 0.0)) throw ConfigError("domain lengths must be positive");
    spec.basis(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = 2.0 * std::numbers::pi / lengths[j];
  }
  return spec;
}

void LatticeSpec::validate() const {
  if (dimension <= 0) throw ConfigError("lattice dimension must be positive");
  if (physical_dimension <= 0 || physical_dimension > dimension)
    throw ConfigError("physical dimension must lie in [1, n]");
  if (static_cast<int>(modes.size()) != dimension)
    throw ConfigError("expected " + std::to_string(dimension) + " mode counts, got " + std::to_string(modes.size()));
  for (int m : modes) {
    if (m <= 0 || m % 2 != 0) throw ConfigError("mode counts must be positive even integers, got " + std::to_string(m));
  }
  if (basis.rows() != dimension || basis.cols() != dimension) throw ConfigError("basis matrix B must be n x n");
  if (projection.rows() != physical_dimension || projection.cols() != dimension)
    throw ConfigError("projection matrix P must be d x n");
  if (!basis.allFinite() || !projection.allFinite()) throw ConfigError("lattice matrices must be finite");
  if (std::abs(basis.determinant()) <= 1e-12) throw ConfigError("basis matrix B is singular");
}

IndexGrid::IndexGrid(LatticeSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const int n = spec_.dimension;
  extents_.resize(static_cast<std::size_t>(n));
  size_ = 1;
  for (int j = 0; j < n; ++j) {
    extents_[static_cast<std::size_t>(j)] = spec_.modes[static_cast<std::size_t>(j)] + 1;
    size_ *= extents_[static_cast<std::size_t>(j)];
  }

  indices_.resize(static_cast<std::size_t>(size_ * n));
  negated_.resize(static_cast<std::size_t>(size_));
  const Eigen::MatrixXd pb = spec_.projection * spec_.basis;
  wave_vectors_.resize(spec_.physical_dimension, size_);

  std::vector<int> pos(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd h(n);
  for (Eigen::Index i = 0; i < size_; ++i) {
    Eigen::Index neg = 0;
    for (int j = 0; j < n; ++j) {
      const int e = extents_[static_cast<std::size_t>(j)];
      const int p = pos[static_cast<std::size_t>(j)];
      const int hj = p <= e / 2 ? p : p - e;
      indices_[static_cast<std::size_t>(i * n + j)] = hj;
      h(j) = hj;
      neg = neg * e + (e - p) % e;
    }
    negated_[static_cast<std::size_t>(i)] = neg;
    wave_vectors_.col(i) = pb * h;

    for (int j = n - 1; j >= 0; --j) {
      if (++pos[static_cast<std::size_t>(j)] < extents_[static_cast<std::size_t>(j)]) break;
      pos[static_cast<std::size_t>(j)] = 0;
    }
  }
  k2_ = wave_vectors_.colwise().squaredNorm().transpose().array();
}

Eigen::Index IndexGrid::find(std::span<const int> h) const {
  if (static_cast<int>(h.size()) != spec_.dimension) return -1;
  Eigen::Index flat = 0;
  for (int j = 0; j < spec_.dimension; ++j) {
    const int e = extents_[static_cast<std::size_t>(j)];
    const int hj = h[static_cast<std::size_t>(j)];
    if (std::abs(hj) > e / 2) return -1;
    flat = flat * e + (hj >= 0 ? hj : hj + e);
  }
  return flat;
}

IndexGrid build_lattice(const LatticeSpec& spec) { return IndexGrid(spec); }

FourierField hermitian_symmetrize(const IndexGrid& grid, const FourierField& x) {
  FourierField out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = 0.5 * (x(i) + std::conj(x(grid.negated(i))));
  return out;
}

double hermitian_defect(const IndexGrid& grid, const FourierField& x) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x(i) - std::conj(x(grid.negated(i)))));
  return worst;
}

}  // namespace pfc
