#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "pfc/lattice.hpp"

namespace pfc {

/// Sets the number of threads FFTW uses for plans created afterwards.
void set_fft_threads(int threads);

/// Real-field transforms between a truncated spectrum and a padded physical grid.
///
/// to_physical evaluates phi(theta_j) = sum_h phi(h) exp(i h . theta_j) on a uniform grid of
/// M_j >= N_j + 2 points per axis (M_j ~ padding * N_j, rounded up to even), so the h = 0
/// amplitude equals the sample mean. to_spectral is the exact inverse restricted to the box and
/// returns a Hermitian spectrum. Fields are assumed to represent real functions.
///
/// Instances own scratch buffers and FFTW plans; use one instance per thread.
class SpectralTransform {
 public:
  explicit SpectralTransform(const IndexGrid& grid, double padding = 2.0);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  const std::vector<int>& grid_shape() const { return shape_; }
  Eigen::Index sample_count() const { return real_size_; }
  Eigen::Index mode_count() const { return static_cast<Eigen::Index>(half_index_.size()); }

  void to_physical(const FourierField& coeffs, Eigen::ArrayXd& samples);
  Eigen::ArrayXd to_physical(const FourierField& coeffs);

  void to_spectral(const Eigen::ArrayXd& samples, FourierField& coeffs);
  FourierField to_spectral(const Eigen::ArrayXd& samples);

 private:
  struct Plans;

  std::vector<int> shape_;
  Eigen::Index real_size_ = 0;
  Eigen::Index half_size_ = 0;
  std::vector<std::int64_t> half_index_;
  std::vector<std::uint8_t> conjugate_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace pfc
