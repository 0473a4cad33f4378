#pragma once

#include <limits>
#include <map>
#include <string>

#include "linform/model.hpp"

namespace linform {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* status_name(SolveStatus s);

struct Solution {
  std::map<std::string, double> assignment;
  double objective = std::numeric_limits<double>::quiet_NaN();
  SolveStatus status = SolveStatus::Optimal;
};

/// Dense two-phase simplex over the continuous relaxation. Dantzig pricing
/// with a switch to Bland's rule after 1000 degenerate pivots; certifies
/// infeasibility via phase 1 and unboundedness via an unbounded column.
/// IterationLimit after 1e5 pivots.
Solution solve_lp(const Model& m);

/// Branch and bound over solve_lp: best-bound node order, most-fractional
/// branching, absolute optimality gap 1e-9. IterationLimit after 1e5 nodes.
Solution solve_milp(const Model& m);

}  // namespace linform
