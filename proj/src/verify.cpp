#include "linform/verify.hpp"

#include <cmath>

#include "linform/errors.hpp"
#include "linform/eval.hpp"
#include "linform/oracle.hpp"

namespace linform {

namespace {

constexpr double kProjectionTol = 1e-6;

}  // namespace

double recover_objective(const RewriteTrace& trace, double reformulated_objective) {
  if (!trace.post_solve) return reformulated_objective;
  switch (trace.post_solve->fn) {
    case MonoFn::Exp: return std::exp(reformulated_objective);
    case MonoFn::Log: return std::log(reformulated_objective);
    case MonoFn::Sqrt: return std::sqrt(reformulated_objective);
  }
  return reformulated_objective;
}

std::map<std::string, double> project_onto_original(const Model& original,
                                                    const RewriteTrace& trace,
                                                    const Solution& reformulated_solution) {
  const auto& assignment = reformulated_solution.assignment;
  std::map<std::string, double> projected;
  if (trace.fractional) {
    auto tau_it = assignment.find(trace.fractional->tau);
    if (tau_it == assignment.end())
      throw ProjectionFailure("scale variable missing from the solution: " +
                              trace.fractional->tau);
    const double tau = tau_it->second;
    if (!(tau > 1e-12))
      throw ProjectionFailure("scale variable is not positive; cannot unscale");
    for (const auto& [orig, scaled] : trace.fractional->original_to_scaled) {
      auto it = assignment.find(scaled);
      if (it == assignment.end())
        throw ProjectionFailure("scaled variable missing from the solution: " + scaled);
      projected[orig] = it->second / tau;
    }
  }
  for (const auto& v : original.vars) {
    if (projected.count(v.name)) continue;
    auto it = assignment.find(v.name);
    if (it == assignment.end())
      throw ProjectionFailure("original variable missing from the solution: " + v.name);
    projected[v.name] = it->second;
  }
  return projected;
}

VerifyReport verify_equivalence(const Model& original, const Model& reformulated,
                                const RewriteTrace& trace, double tol) {
  VerifyReport report;

  Solution refm = solve_milp(reformulated);
  Solution truth = oracle_solve(original);
  report.oracle_obj = truth.objective;
  report.reformulated_obj = refm.objective;

  if (refm.status != SolveStatus::Optimal || truth.status != SolveStatus::Optimal) {
    report.recovered_obj = std::numeric_limits<double>::quiet_NaN();
    report.abs_gap = std::numeric_limits<double>::quiet_NaN();
    report.projected_feasible = false;
    report.osr_pass = false;
    return report;
  }

  report.recovered_obj = recover_objective(trace, refm.objective);
  report.abs_gap = std::fabs(report.recovered_obj - truth.objective);

  bool feasible = false;
  try {
    const std::map<std::string, double> projected =
        project_onto_original(original, trace, refm);
    const double violation = max_violation(original, projected);
    const double original_obj = evaluate_in(original, original.objective, projected);
    feasible = violation <= kProjectionTol &&
               std::fabs(original_obj - report.recovered_obj) <= kProjectionTol;
  } catch (const Error&) {
    feasible = false;  // projection failed or left the original model's domain
  }
  report.projected_feasible = feasible;
  report.osr_pass = report.abs_gap <= tol && report.projected_feasible;
  return report;
}

}  // namespace linform
