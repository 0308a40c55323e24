#include "pfc/model.hpp"

#include <cmath>

#include "pfc/errors.hpp"

namespace pfc {

std::string to_string(ModelKind kind) {
  return kind == ModelKind::LandauBrazovskii ? "LB" : "LP";
}

ModelSpec ModelSpec::landau_brazovskii(double xi, double tau, double gamma) {
  ModelSpec m;
  m.kind = ModelKind::LandauBrazovskii;
  m.xi = xi;
  m.tau = tau;
  m.gamma = gamma;
  return m;
}

ModelSpec ModelSpec::lifshitz_petrich(double c, double q1, double q2, double epsilon, double kappa) {
  ModelSpec m;
  m.kind = ModelKind::LifshitzPetrich;
  m.c = c;
  m.q1 = q1;
  m.q2 = q2;
  m.epsilon = epsilon;
  m.kappa = kappa;
  return m;
}

void ModelSpec::validate() const {
  if (kind == ModelKind::LandauBrazovskii) {
    if (!std::isfinite(xi) || !std::isfinite(tau) || !std::isfinite(gamma))
      throw ConfigError("LB parameters must be finite");
    if (!(xi * xi > 0.0)) throw ConfigError("LB model requires xi^2 > 0");
  } else {
    if (!std::isfinite(c) || !std::isfinite(q1) || !std::isfinite(q2) || !std::isfinite(epsilon) ||
        !std::isfinite(kappa))
      throw ConfigError("LP parameters must be finite");
    if (!(c > 0.0)) throw ConfigError("LP model requires c > 0");
    if (q1 == q2) throw ConfigError("LP model requires q1 != q2");
  }
}

BulkPolynomial bulk_polynomial(const ModelSpec& model) {
  if (model.kind == ModelKind::LandauBrazovskii) return {model.tau / 2.0, -model.gamma / 6.0, 1.0 / 24.0};
  return {model.epsilon / 2.0, -model.kappa / 3.0, 0.25};
}

double max_second_derivative(const BulkPolynomial& bulk, const Eigen::ArrayXd& samples) {
  return samples.unaryExpr([&](double p) { return bulk.second(p); }).maxCoeff();
}

Eigen::ArrayXd interaction_diagonal(const IndexGrid& grid, const ModelSpec& model) {
  model.validate();
  const Eigen::ArrayXd& k2 = grid.wave_number_squared();
  if (model.kind == ModelKind::LandauBrazovskii) return model.xi * model.xi * (1.0 - k2).square();
  return model.c * (model.q1 * model.q1 - k2).square() * (model.q2 * model.q2 - k2).square();
}

PfcProblem::PfcProblem(std::shared_ptr<const IndexGrid> grid, ModelSpec model, double padding)
    : grid_(std::move(grid)), model_(model), bulk_(bulk_polynomial(model)) {
  if (!grid_) throw ConfigError("problem requires a lattice");
  model_.validate();
  interaction_ = interaction_diagonal(*grid_, model_);
  transform_ = std::make_unique<SpectralTransform>(*grid_, padding);
}

void PfcProblem::check_size(const FourierField& x) const {
  if (x.size() != grid_->size()) throw ConfigError("field does not match the lattice size");
}

Eigen::ArrayXd PfcProblem::physical(const FourierField& x) const {
  check_size(x);
  Eigen::ArrayXd samples;
  transform_->to_physical(x, samples);
  if (!samples.allFinite()) throw NumericalError("non-finite order parameter in physical space");
  return samples;
}

double PfcProblem::interaction_energy(const FourierField& x) const {
  return 0.5 * (interaction_ * x.cwiseAbs2().array()).sum();
}

double PfcProblem::bulk_energy(const Eigen::ArrayXd& samples) const {
  const BulkPolynomial b = bulk_;
  return samples.unaryExpr([b](double p) { return b.density(p); }).mean();
}

double PfcProblem::energy_difference(const FourierField& x, const Eigen::ArrayXd& samples_x,
                                     const FourierField& z) const {
  check_size(x);
  check_size(z);
  const FourierField dx = z - x;
  const double dg = 0.5 * (interaction_ * (dx.conjugate().array() * (z + x).array()).real()).sum();
  const Eigen::ArrayXd d = physical(dx);
  const BulkPolynomial p = bulk_;
  const Eigen::ArrayXd& b = samples_x;
  const Eigen::ArrayXd a = b + d;
  const Eigen::ArrayXd s = a + b;
  const double df =
      (d * (p.c2 * s + p.c3 * (a.square() + a * b + b.square()) + p.c4 * s * (a.square() + b.square()))).mean();
  const double out = dg + df;
  if (!std::isfinite(out)) throw NumericalError("non-finite energy difference");
  return out;
}

EnergyBreakdown PfcProblem::energy(const FourierField& x) const {
  Eigen::ArrayXd samples;
  return energy(x, samples);
}

EnergyBreakdown PfcProblem::energy(const FourierField& x, Eigen::ArrayXd& samples) const {
  samples = physical(x);
  EnergyBreakdown e;
  e.interaction = interaction_energy(x);
  e.bulk = bulk_energy(samples);
  e.total = e.interaction + e.bulk;
  if (!std::isfinite(e.total)) throw NumericalError("energy overflow");
  return e;
}

PfcProblem::Evaluation PfcProblem::evaluate(const FourierField& x) const {
  Eigen::ArrayXd samples = physical(x);
  Evaluation out;
  out.energy.interaction = interaction_energy(x);
  out.energy.bulk = bulk_energy(samples);
  out.energy.total = out.energy.interaction + out.energy.bulk;
  if (!std::isfinite(out.energy.total)) throw NumericalError("energy overflow");
  const BulkPolynomial b = bulk_;
  samples = samples.unaryExpr([b](double p) { return b.first(p); });
  transform_->to_spectral(samples, out.bulk_gradient);
  if (!out.bulk_gradient.allFinite()) throw NumericalError("non-finite bulk gradient");
  return out;
}

FourierField PfcProblem::bulk_gradient(const FourierField& x) const {
  return bulk_gradient_from_samples(physical(x));
}

FourierField PfcProblem::bulk_gradient_from_samples(Eigen::ArrayXd samples) const {
  const BulkPolynomial b = bulk_;
  samples = samples.unaryExpr([b](double p) { return b.first(p); });
  FourierField g = transform_->to_spectral(samples);
  if (!g.allFinite()) throw NumericalError("non-finite bulk gradient");
  return g;
}

FourierField PfcProblem::gradient(const FourierField& x) const {
  FourierField g = bulk_gradient(x);
  g.array() += interaction_ * x.array();
  return g;
}

HessianOperator PfcProblem::hessian_at(const FourierField& x) const {
  Eigen::ArrayXd samples = physical(x);
  const BulkPolynomial b = bulk_;
  return HessianOperator(*this, samples.unaryExpr([b](double p) { return b.second(p); }));
}

FourierField PfcProblem::hessian_vec(const FourierField& x, const FourierField& v) const {
  check_size(v);
  return hessian_at(x).apply(v);
}

double PfcProblem::max_second_derivative(const FourierField& x) const {
  return pfc::max_second_derivative(bulk_, physical(x));
}

HessianOperator::HessianOperator(const PfcProblem& problem, Eigen::ArrayXd curvature)
    : problem_(&problem), curvature_(std::move(curvature)) {}

FourierField HessianOperator::apply(const FourierField& v) const {
  Eigen::ArrayXd samples = problem_->physical(v);
  samples *= curvature_;
  FourierField out = problem_->transform().to_spectral(samples);
  out.array() += problem_->interaction() * v.array();
  if (!out.allFinite()) throw NumericalError("non-finite Hessian-vector product");
  return out;
}

}  // namespace pfc
