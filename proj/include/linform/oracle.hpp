#pragma once

#include "linform/model.hpp"
#include "linform/solver.hpp"

namespace linform {

/// Exact global optimum by exhaustive composition: enumerate binary
/// assignments, enumerate active-branch combinations of every min/max/abs
/// occurrence under dominance constraints, and solve each resulting linear
/// case (parametric iteration for a fractional objective, inner affine
/// optimization plus the transform for a monotone objective). Never touches
/// any rewrite operator, so it is an independent check on them.
/// Scale limits: at most 12 binaries, 4 arguments per min/max, 200000 cases.
Solution oracle_solve(const Model& m);

/// Parametric root-finding for a single fractional objective over an
/// otherwise linear continuous model: iterate lambda <- N(x)/D(x) until
/// |N - lambda D| <= 1e-10 (at most 100 iterations, then NoConvergence).
Solution dinkelbach(const Model& m);

}  // namespace linform
