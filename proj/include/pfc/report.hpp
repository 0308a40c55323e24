#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pfc/lattice.hpp"
#include "pfc/model.hpp"

namespace pfc {

enum class Termination { Converged, IterationLimit, Failed };

std::string to_string(Termination t);

/// One outer iteration. Columns not used by a method stay at their defaults.
struct TraceRow {
  int iteration = 0;
  std::string phase;         // method that produced the row
  double energy = 0.0;
  double gradient_norm = 0.0;  // ||P_1 grad E||
  double step = 0.0;           // alpha (gradient methods) or t (Newton)
  double weight = 0.0;         // extrapolation weight used for this step
  double mu = 0.0;             // Newton regularization
  bool restart = false;
  int inner_iterations = 0;    // PCG iterations
  int backtracks = 0;
  double seconds = 0.0;        // cumulative solver wall time
};

struct SolverReport {
  std::string method;
  std::vector<TraceRow> trace;
  FourierField solution;
  EnergyBreakdown energy;
  double gradient_norm = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  Termination termination = Termination::IterationLimit;
  std::string message;
  /// Index of the first Newton row in a hybrid trace.
  std::optional<std::size_t> switch_row;

  bool converged() const { return termination == Termination::Converged; }
};

/// Tab-separated trace with a header row.
void write_trace(std::ostream& os, const SolverReport& report);

/// A method that advances one outer iteration at a time from an owned state.
class IterativeMethod {
 public:
  virtual ~IterativeMethod() = default;

  virtual std::string name() const = 0;
  virtual TraceRow step() = 0;
  virtual const FourierField& current() const = 0;
  /// Mass-zero-projected full gradient at current().
  virtual const FourierField& gradient() const = 0;
  virtual const EnergyBreakdown& energy() const = 0;
  /// True when the last step left the iterate unchanged (a restart).
  virtual bool last_step_rejected() const { return false; }

  double gradient_norm() const { return gradient().norm(); }
};

/// Called after every step with the method in its post-step state and the finished row.
using StepObserver = std::function<void(const IterativeMethod&, const TraceRow&)>;

/// Steps `method` until ||P_1 grad E|| < tolerance or max_iterations steps have been taken.
SolverReport drive(IterativeMethod& method, double tolerance, int max_iterations, const StepObserver& observe = {});

/// Row describing the state before the first step.
TraceRow initial_row(const IterativeMethod& method);

}  // namespace pfc
