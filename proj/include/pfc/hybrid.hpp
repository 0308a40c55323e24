#pragma once

#include <limits>
#include <string>

#include "pfc/aabpg.hpp"
#include "pfc/baseline.hpp"
#include "pfc/newton_pcg.hpp"
#include "pfc/report.hpp"

namespace pfc {

/// Switch once |E_k - E_{k-1}| < energy or ||g_k - g_{k-1}|| < gradient. A threshold of 0
/// never fires; an infinite threshold fires before the first step.
struct SwitchRule {
  double energy = 0.0;
  double gradient = 0.0;

  void validate() const;
  bool immediate() const;
};

bool should_switch(double energy_prev, double energy_curr, double gradient_change, const SwitchRule& rule);

enum class FirstStage { AabpgP2, AabpgP4, Baseline };

struct HybridConfig {
  FirstStage first = FirstStage::AabpgP2;
  AabpgConfig aabpg;
  BaselineConfig baseline;
  SwitchRule rule;
  NewtonConfig newton;
  double tolerance = 1e-9;
  int max_iterations = 10000;  // first-stage and Newton steps together

  void validate() const;
};

/// Name of the hybrid, e.g. "n-aabpg2" or "n-sis".
std::string hybrid_name(const HybridConfig& config);

/// Runs the first-stage method until the switch rule fires on an accepted step, then Newton-PCG
/// from the same state. Rows carry the phase that produced them; `switch_row` marks the first
/// Newton row.
SolverReport hybrid_run(const PfcProblem& problem, FourierField x0, const HybridConfig& config,
                       const StepObserver& observe = {});

/// plain.seconds / hybrid.seconds. Both reports must have converged to energies that agree
/// to `energy_rtol` relative.
double acceleration_ratio(const SolverReport& plain, const SolverReport& hybrid, double energy_rtol = 1e-6);

}  // namespace pfc
