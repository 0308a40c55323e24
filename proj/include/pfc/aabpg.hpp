#pragma once

#include <Eigen/Core>

#include "pfc/bregman.hpp"
#include "pfc/model.hpp"
#include "pfc/report.hpp"

namespace pfc {

/// Barzilai-Borwein formula used to seed the line search.
enum class BbVariant {
  Long,        // <s,s> / <s,v>
  Short,       // <s,v> / <v,v>
  Alternating  // Long on odd iterations, Short on even ones
};

struct AabpgConfig {
  BregmanKernel kernel;
  /// Restart constant c and line-search constant eta; values <= 0 select 1e-9 * mode count.
  double restart_c = 0.0;
  double linesearch_eta = 0.0;
  double rho = 0.5;
  double alpha_min = 1e-6;
  double alpha_max = 10.0;
  double alpha0 = 0.1;
  double w_max = 1.0;
  double tolerance = 1e-9;
  int max_iterations = 10000;
  BbVariant bb = BbVariant::Long;

  void validate() const;
  double resolved_c(Eigen::Index modes) const;
  double resolved_eta(Eigen::Index modes) const;
};

/// BB step clipped to [alpha_min, alpha_max]; alpha_max when s = 0 or the curvature
/// estimate is not positive.
double bb_step(const FourierField& s, const FourierField& v, double alpha_min, double alpha_max,
               BbVariant variant = BbVariant::Long, int iteration = 1);

/// Nesterov extrapolation weights w = (t_{k-1} - 1) / t_k, capped at w_max.
class NesterovWeight {
 public:
  explicit NesterovWeight(double w_max = 1.0) : w_max_(w_max) {}

  /// Advance after an accepted step and return the next weight.
  double advance();
  void reset() {
    t_ = 1.0;
    w_ = 0.0;
  }
  double value() const { return w_; }

 private:
  double w_max_;
  double t_ = 1.0;
  double w_ = 0.0;
};

struct StepEstimate {
  double alpha = 0.0;
  FourierField z;
  EnergyBreakdown z_energy;
  Eigen::ArrayXd z_samples;  // physical samples of z
  int backtracks = 0;
  bool clamped = false;  // alpha hit alpha_min and was accepted unconditionally
};

/// Backtracking from alpha_init until E(y) - E(z) >= eta ||y - z||^2, accepting alpha_min
/// unconditionally.
StepEstimate estimate_step(const PfcProblem& problem, const FourierField& y, const Eigen::ArrayXd& samples_y,
                           const FourierField& bulk_grad_y, double alpha_init, const AabpgConfig& config, double eta);

/// Adaptive accelerated Bregman proximal gradient iteration with restart.
class AabpgMethod : public IterativeMethod {
 public:
  AabpgMethod(const PfcProblem& problem, FourierField x0, AabpgConfig config);

  std::string name() const override;
  TraceRow step() override;
  const FourierField& current() const override { return x_; }
  const FourierField& gradient() const override { return gradient_; }
  const EnergyBreakdown& energy() const override { return energy_; }
  bool last_step_rejected() const override { return rejected_; }

  double restart_constant() const { return c_; }
  double linesearch_constant() const { return eta_; }

 private:
  void refresh_gradient();

  const PfcProblem* problem_;
  AabpgConfig config_;
  double c_;
  double eta_;
  FourierField x_;
  Eigen::ArrayXd samples_;  // physical samples of x_
  FourierField x_prev_;
  FourierField bulk_grad_;
  FourierField bulk_grad_prev_;
  FourierField gradient_;
  EnergyBreakdown energy_;
  NesterovWeight weight_;
  bool has_prev_ = false;
  bool rejected_ = false;
  int k_ = 0;
};

SolverReport aabpg_run(const PfcProblem& problem, FourierField x0, const AabpgConfig& config,
                      const StepObserver& observe = {});

}  // namespace pfc
