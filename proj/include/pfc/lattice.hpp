#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace pfc {

using Complex = std::complex<double>;

/// Complex Fourier amplitudes over a truncated index box, in IndexGrid storage order.
/// Index 0 always holds the h = 0 (mean) amplitude.
using FourierField = Eigen::VectorXcd;

/// Truncated n-dimensional reciprocal lattice projected onto d physical dimensions.
struct LatticeSpec {
  int dimension = 0;           // n, embedding dimension
  int physical_dimension = 0;  // d
  std::vector<int> modes;      // N_j, one per embedding axis, positive and even
  Eigen::MatrixXd basis;       // B, n x n, invertible
  Eigen::MatrixXd projection;  // P, d x n

  /// Periodic crystal: P = I_n, B = scale * I_n.
  static LatticeSpec periodic(std::vector<int> modes, double scale);
  /// Periodic box [0, L_1) x ... x [0, L_n): B = diag(2 pi / L_j).
  static LatticeSpec periodic_box(std::vector<int> modes, const std::vector<double>& lengths);

  void validate() const;
};

/// Enumerates the truncation box {h : |h_j| <= N_j / 2} and the projected wave vectors.
///
/// Storage is row-major over axes; along each axis the index runs 0, 1, ..., N_j/2,
/// -N_j/2, ..., -1, so h = 0 sits at flat position 0.
class IndexGrid {
 public:
  explicit IndexGrid(LatticeSpec spec);

  const LatticeSpec& spec() const { return spec_; }
  int dimension() const { return spec_.dimension; }
  Eigen::Index size() const { return size_; }
  /// Points per axis of the box, N_j + 1.
  const std::vector<int>& extents() const { return extents_; }

  /// Integer components of the lattice index at storage position i.
  std::span<const int> index(Eigen::Index i) const {
    return {indices_.data() + i * spec_.dimension, static_cast<std::size_t>(spec_.dimension)};
  }
  /// Storage position of h, or -1 when h lies outside the box.
  Eigen::Index find(std::span<const int> h) const;
  /// Storage position of -h.
  Eigen::Index negated(Eigen::Index i) const { return negated_[static_cast<std::size_t>(i)]; }

  /// Projected wave vectors k_h = P B h, one column per mode.
  const Eigen::MatrixXd& wave_vectors() const { return wave_vectors_; }
  const Eigen::ArrayXd& wave_number_squared() const { return k2_; }

 private:
  LatticeSpec spec_;
  std::vector<int> extents_;
  Eigen::Index size_ = 0;
  std::vector<int> indices_;
  std::vector<Eigen::Index> negated_;
  Eigen::MatrixXd wave_vectors_;
  Eigen::ArrayXd k2_;
};

IndexGrid build_lattice(const LatticeSpec& spec);

/// Real inner product Re <x, y> on the amplitude vector space.
inline double inner(const FourierField& x, const FourierField& y) { return x.dot(y).real(); }

/// P_1 = I - e_1 e_1^T: zeroes the mean amplitude.
inline FourierField project_mass_zero(FourierField x) {
  if (x.size() > 0) x(0) = 0.0;
  return x;
}

/// Average of x and its Hermitian reflection conj(x(-h)).
FourierField hermitian_symmetrize(const IndexGrid& grid, const FourierField& x);

/// max_h |x(h) - conj(x(-h))|.
double hermitian_defect(const IndexGrid& grid, const FourierField& x);

}  // namespace pfc
