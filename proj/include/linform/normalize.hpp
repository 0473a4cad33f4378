#pragma once

#include <map>
#include <string>

#include "linform/expr.hpp"
#include "linform/model.hpp"

namespace linform {

/// Canonicalizes an expression:
///   - parameters are substituted by their bound values (UnboundSymbol if a
///     ParamRef has no binding),
///   - nested sums and products are flattened and constants folded,
///   - Neg is pushed into monomial coefficients,
///   - products distribute over sums, so the result is a sum of monomials,
///     each monomial a constant times sorted non-sum factors,
///   - like monomials are combined and zero terms dropped,
///   - duplicate min/max arguments are deduplicated.
/// Idempotent: normalize(normalize(e)) == normalize(e).
Expr normalize(const Expr& e, const std::map<std::string, double>& params = {});

/// Normalizes the objective and every constraint side using the model's own
/// parameter bindings.
Model normalize_model(Model m);

}  // namespace linform
