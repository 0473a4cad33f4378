#pragma once

#include "linform/model.hpp"
#include "linform/rewriter.hpp"
#include "linform/solver.hpp"

namespace linform {

struct VerifyReport {
  double oracle_obj = 0.0;
  double reformulated_obj = 0.0;
  double recovered_obj = 0.0;  // after the post-solve map
  double abs_gap = 0.0;
  bool projected_feasible = false;
  bool osr_pass = false;
};

/// Solves the reformulated model, recovers the objective through the trace's
/// post-solve map, projects the solution back onto the original variables
/// (dropping auxiliaries, unscaling the fractional transform), checks the
/// projection against the original model (violation and objective agreement
/// within 1e-6), and compares the recovered optimum with the independent
/// oracle. osr_pass iff the gap is within `tol` and the projection checks out.
VerifyReport verify_equivalence(const Model& original, const Model& reformulated,
                                const RewriteTrace& trace, double tol);

/// Original-variable values of a reformulated solution. Throws
/// ProjectionFailure when a needed mapping is missing.
std::map<std::string, double> project_onto_original(const Model& original,
                                                    const RewriteTrace& trace,
                                                    const Solution& reformulated_solution);

/// The trace's post-solve map applied to a reformulated objective value.
double recover_objective(const RewriteTrace& trace, double reformulated_objective);

}  // namespace linform
