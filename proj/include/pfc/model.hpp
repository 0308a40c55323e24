#pragma once

#include <memory>
#include <string>

#include <Eigen/Core>

#include "pfc/lattice.hpp"
#include "pfc/spectral_transform.hpp"

namespace pfc {

enum class ModelKind { LandauBrazovskii, LifshitzPetrich };

std::string to_string(ModelKind kind);

struct ModelSpec {
  ModelKind kind = ModelKind::LandauBrazovskii;
  // Landau-Brazovskii
  double xi = 0.0;
  double tau = 0.0;
  double gamma = 0.0;
  // Lifshitz-Petrich
  double c = 0.0;
  double q1 = 1.0;
  double q2 = 1.0;
  double epsilon = 0.0;
  double kappa = 0.0;

  static ModelSpec landau_brazovskii(double xi, double tau, double gamma);
  static ModelSpec lifshitz_petrich(double c, double q1, double q2, double epsilon, double kappa);

  void validate() const;
};

/// Bulk density f(phi) = c2 phi^2 + c3 phi^3 + c4 phi^4.
struct BulkPolynomial {
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;

  double density(double p) const { return p * p * (c2 + p * (c3 + p * c4)); }
  double first(double p) const { return p * (2.0 * c2 + p * (3.0 * c3 + p * 4.0 * c4)); }
  double second(double p) const { return 2.0 * c2 + p * (6.0 * c3 + p * 12.0 * c4); }
};

BulkPolynomial bulk_polynomial(const ModelSpec& model);

/// Max of f''(phi) over the given samples.
double max_second_derivative(const BulkPolynomial& bulk, const Eigen::ArrayXd& samples);

struct EnergyBreakdown {
  double interaction = 0.0;
  double bulk = 0.0;
  double total = 0.0;
};

/// Diagonal of the interaction Hessian: xi^2 (1 - |k|^2)^2 (LB) or
/// c (q1^2 - |k|^2)^2 (q2^2 - |k|^2)^2 (LP).
Eigen::ArrayXd interaction_diagonal(const IndexGrid& grid, const ModelSpec& model);

class PfcProblem;

/// Hessian of the energy frozen at a point; applying it costs two transforms.
class HessianOperator {
 public:
  HessianOperator(const PfcProblem& problem, Eigen::ArrayXd curvature);

  FourierField apply(const FourierField& v) const;
  FourierField operator()(const FourierField& v) const { return apply(v); }
  /// max over samples of f''(phi).
  double max_curvature() const { return curvature_.maxCoeff(); }

 private:
  const PfcProblem* problem_;
  Eigen::ArrayXd curvature_;
};

/// Discretized PFC energy E = G + F on a truncated lattice.
///
/// Holds the interaction diagonal and a SpectralTransform, so an instance is not safe to
/// share between threads; evaluations are otherwise pure in their arguments.
class PfcProblem {
 public:
  PfcProblem(std::shared_ptr<const IndexGrid> grid, ModelSpec model, double padding = 2.0);

  const IndexGrid& grid() const { return *grid_; }
  std::shared_ptr<const IndexGrid> grid_ptr() const { return grid_; }
  const ModelSpec& model() const { return model_; }
  const BulkPolynomial& bulk() const { return bulk_; }
  const Eigen::ArrayXd& interaction() const { return interaction_; }
  SpectralTransform& transform() const { return *transform_; }
  Eigen::Index size() const { return grid_->size(); }

  EnergyBreakdown energy(const FourierField& x) const;
  /// Spectral coefficients of f'(phi(r)).
  FourierField bulk_gradient(const FourierField& x) const;
  /// D x + bulk_gradient(x).
  FourierField gradient(const FourierField& x) const;
  FourierField hessian_vec(const FourierField& x, const FourierField& v) const;
  double max_second_derivative(const FourierField& x) const;
  HessianOperator hessian_at(const FourierField& x) const;

  /// Energy and bulk gradient from one pair of transforms.
  struct Evaluation {
    EnergyBreakdown energy;
    FourierField bulk_gradient;
  };
  Evaluation evaluate(const FourierField& x) const;

  /// Energy of x; leaves the physical samples of x in `samples` for reuse.
  EnergyBreakdown energy(const FourierField& x, Eigen::ArrayXd& samples) const;
  FourierField bulk_gradient_from_samples(Eigen::ArrayXd samples) const;

  /// E(z) - E(x), given the physical samples of x. Evaluated as a sum of local differences
  /// so it keeps its relative accuracy when the two energies agree to many digits.
  double energy_difference(const FourierField& x, const Eigen::ArrayXd& samples_x, const FourierField& z) const;

  double interaction_energy(const FourierField& x) const;
  double bulk_energy(const Eigen::ArrayXd& samples) const;
  Eigen::ArrayXd physical(const FourierField& x) const;

 private:
  void check_size(const FourierField& x) const;

  std::shared_ptr<const IndexGrid> grid_;
  ModelSpec model_;
  BulkPolynomial bulk_;
  Eigen::ArrayXd interaction_;
  std::unique_ptr<SpectralTransform> transform_;
};

}  // namespace pfc
