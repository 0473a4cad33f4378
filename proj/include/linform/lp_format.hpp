#pragma once

#include <string>
#include <string_view>

#include "linform/model.hpp"

namespace linform {

/// Writes a linear model in CPLEX LP format (Minimize/Maximize, Subject To,
/// Bounds, Binary, General, End). Variables appear in declaration order and
/// coefficients carry 12 significant digits; identical models produce
/// byte-identical text. Throws NotLinear naming the offending subexpression.
std::string emit_lp(const Model& m);

/// Minimal LP reader covering the subset emit_lp writes; used for the
/// emit/re-parse round-trip check. Throws Error on malformed input.
Model parse_lp(std::string_view text);

/// Same variables, domains, bounds, sense, objective and constraint matrix
/// (name-keyed) within `tol`.
bool linear_models_match(const Model& a, const Model& b, double tol);

/// emit -> parse_lp -> compare, the round-trip behind the CSR metric.
bool lp_roundtrip_ok(const Model& m, double tol = 1e-9);

}  // namespace linform
