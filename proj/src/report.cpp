#include "pfc/report.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>

namespace pfc {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::IterationLimit: return "iteration_limit";
    case Termination::Failed: return "failed";
  }
  return "unknown";
}

void write_trace(std::ostream& os, const SolverReport& report) {
  os << "iteration\tphase\tenergy\tgradient_norm\tstep\tweight\tmu\trestart\tinner_iterations\tbacktracks\tseconds\n";
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::setprecision(17);
  for (const TraceRow& r : report.trace) {
    os << r.iteration << '\t' << r.phase << '\t' << r.energy << '\t' << r.gradient_norm << '\t' << r.step << '\t'
       << r.weight << '\t' << r.mu << '\t' << (r.restart ? 1 : 0) << '\t' << r.inner_iterations << '\t'
       << r.backtracks << '\t' << r.seconds << '\n';
  }
  os.flags(flags);
  os.precision(precision);
}

TraceRow initial_row(const IterativeMethod& method) {
  TraceRow row;
  row.phase = method.name();
  row.energy = method.energy().total;
  row.gradient_norm = method.gradient_norm();
  return row;
}

SolverReport drive(IterativeMethod& method, double tolerance, int max_iterations, const StepObserver& observe) {
  using clock = std::chrono::steady_clock;
  SolverReport report;
  report.method = method.name();
  report.trace.push_back(initial_row(method));

  double elapsed = 0.0;
  int k = 0;
  report.termination = Termination::IterationLimit;
  while (true) {
    if (method.gradient_norm() < tolerance) {
      report.termination = Termination::Converged;
      break;
    }
    if (k >= max_iterations) break;
    const auto start = clock::now();
    TraceRow row = method.step();
    elapsed += std::chrono::duration<double>(clock::now() - start).count();
    ++k;
    row.iteration = k;
    row.seconds = elapsed;
    if (observe) observe(method, row);
    report.trace.push_back(std::move(row));
  }

  report.iterations = k;
  report.seconds = elapsed;
  report.solution = method.current();
  report.energy = method.energy();
  report.gradient_norm = method.gradient_norm();
  return report;
}

}  // namespace pfc
