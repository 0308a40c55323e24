#include "pfc/spectral_transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>

extern "C" {
#include <fftw3.h>
}

#include "pfc/errors.hpp"

namespace pfc {
namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void set_fft_threads(int threads) {
  std::lock_guard lock(planner_mutex());
  static bool initialized = false;
  if (!initialized) {
    fftw_init_threads();
    initialized = true;
  }
  fftw_plan_with_nthreads(std::max(1, threads));
}

struct SpectralTransform::Plans {
  double* real = nullptr;
  fftw_complex* half = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(half);
  }
};

SpectralTransform::SpectralTransform(const IndexGrid& grid, double padding) {
  if (!(padding >= 1.0)) throw ConfigError("padding factor must be >= 1");
  const int n = grid.dimension();
  shape_.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int modes = grid.spec().modes[static_cast<std::size_t>(j)];
    int m = static_cast<int>(std::ceil(padding * modes - 1e-9));
    m = std::max(m, modes + 2);
    if (m % 2 != 0) ++m;
    shape_[static_cast<std::size_t>(j)] = m;
  }

  real_size_ = 1;
  for (int m : shape_) real_size_ *= m;
  const int last = shape_.back() / 2 + 1;
  half_size_ = real_size_ / shape_.back() * last;

  half_index_.resize(static_cast<std::size_t>(grid.size()));
  conjugate_.resize(static_cast<std::size_t>(grid.size()));
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    auto h = grid.index(i);
    const bool conj = h[static_cast<std::size_t>(n - 1)] < 0;
    const int sign = conj ? -1 : 1;
    std::int64_t flat = 0;
    for (int j = 0; j < n - 1; ++j) {
      const int m = shape_[static_cast<std::size_t>(j)];
      flat = flat * m + ((sign * h[static_cast<std::size_t>(j)]) % m + m) % m;
    }
    flat = flat * last + sign * h[static_cast<std::size_t>(n - 1)];
    half_index_[static_cast<std::size_t>(i)] = flat;
    conjugate_[static_cast<std::size_t>(i)] = conj ? 1 : 0;
  }

  plans_ = std::make_unique<Plans>();
  plans_->real = fftw_alloc_real(static_cast<std::size_t>(real_size_));
  plans_->half = fftw_alloc_complex(static_cast<std::size_t>(half_size_));
  if (!plans_->real || !plans_->half) throw std::bad_alloc();

  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft_r2c(n, shape_.data(), plans_->real, plans_->half, FFTW_ESTIMATE);
  plans_->backward =
      fftw_plan_dft_c2r(n, shape_.data(), plans_->half, plans_->real, FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
  if (!plans_->forward || !plans_->backward) throw ConfigError("FFTW could not create a plan for this grid");
}

SpectralTransform::~SpectralTransform() = default;

void SpectralTransform::to_physical(const FourierField& coeffs, Eigen::ArrayXd& samples) {
  if (coeffs.size() != mode_count()) throw ConfigError("field size does not match the lattice");
  auto* half = reinterpret_cast<Complex*>(plans_->half);
  std::fill(half, half + half_size_, Complex(0.0, 0.0));
  const auto count = static_cast<std::size_t>(coeffs.size());
  for (std::size_t i = 0; i < count; ++i) {
    if (!conjugate_[i]) half[half_index_[i]] = coeffs(static_cast<Eigen::Index>(i));
  }
  fftw_execute(plans_->backward);
  samples.resize(real_size_);
  std::memcpy(samples.data(), plans_->real, sizeof(double) * static_cast<std::size_t>(real_size_));
}

Eigen::ArrayXd SpectralTransform::to_physical(const FourierField& coeffs) {
  Eigen::ArrayXd samples;
  to_physical(coeffs, samples);
  return samples;
}

void SpectralTransform::to_spectral(const Eigen::ArrayXd& samples, FourierField& coeffs) {
  if (samples.size() != real_size_) throw ConfigError("sample count does not match the transform grid");
  std::memcpy(plans_->real, samples.data(), sizeof(double) * static_cast<std::size_t>(real_size_));
  fftw_execute(plans_->forward);
  const auto* half = reinterpret_cast<const Complex*>(plans_->half);
  const double scale = 1.0 / static_cast<double>(real_size_);
  const auto count = half_index_.size();
  coeffs.resize(static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    const Complex v = half[half_index_[i]] * scale;
    coeffs(static_cast<Eigen::Index>(i)) = conjugate_[i] ? std::conj(v) : v;
  }
}

FourierField SpectralTransform::to_spectral(const Eigen::ArrayXd& samples) {
  FourierField coeffs;
  to_spectral(samples, coeffs);
  return coeffs;
}

}  // namespace pfc
