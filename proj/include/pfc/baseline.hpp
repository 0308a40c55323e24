#pragma once

#include <string>

#include "pfc/model.hpp"
#include "pfc/report.hpp"

namespace pfc {

enum class BaselineScheme { SIS, SSIS1, SSIS2 };

std::string to_string(BaselineScheme scheme);
BaselineScheme parse_baseline_scheme(const std::string& name);

struct BaselineConfig {
  BaselineScheme scheme = BaselineScheme::SIS;
  double alpha = 0.1;
  double stabilization = 0.0;  // S
  double tolerance = 1e-9;
  int max_iterations = 10000;

  void validate() const;
};

/// (I + alpha D)^{-1} (x - alpha P_1 grad F(x)); the same code path as prox_p2.
FourierField sis_step(const PfcProblem& problem, const FourierField& x, double alpha);

/// (I + alpha D + alpha S) x+ = (1 + alpha S) x - alpha P_1 grad F(x). S = 0 gives sis_step.
FourierField ssis1_step(const PfcProblem& problem, const FourierField& x, double alpha, double s);

/// Two-level BDF2 step with extrapolated bulk force and the centered stabilizer
/// S (x+ - 2x + x_prev):
/// (3/(2 alpha) + D + S) x+ = (4x - x_prev)/(2 alpha) - P_1 grad F(xbar) + S xbar,  xbar = 2x - x_prev.
FourierField ssis2_step(const PfcProblem& problem, const FourierField& x, const FourierField& x_prev, double alpha,
                        double s);

/// Fixed-step semi-implicit gradient flow.
class BaselineMethod : public IterativeMethod {
 public:
  BaselineMethod(const PfcProblem& problem, FourierField x0, BaselineConfig config);

  std::string name() const override { return to_string(config_.scheme); }
  TraceRow step() override;
  const FourierField& current() const override { return x_; }
  const FourierField& gradient() const override { return gradient_; }
  const EnergyBreakdown& energy() const override { return energy_; }

 private:
  const PfcProblem* problem_;
  BaselineConfig config_;
  FourierField x_;
  FourierField x_prev_;
  FourierField bulk_grad_;
  FourierField gradient_;
  EnergyBreakdown energy_;
  bool has_prev_ = false;
};

SolverReport baseline_run(const PfcProblem& problem, FourierField x0, const BaselineConfig& config,
                         const StepObserver& observe = {});

}  // namespace pfc
