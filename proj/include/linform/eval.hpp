#pragma once

#include <map>
#include <string>

#include "linform/expr.hpp"
#include "linform/model.hpp"

namespace linform {

/// Exact recursive evaluation. Throws UnboundSymbol for a name without a
/// binding and DomainError for log(<=0), sqrt(<0) or division by zero.
double evaluate(const Expr& e, const std::map<std::string, double>& assignment,
                const std::map<std::string, double>& params = {});

/// Evaluation inside a model: parameters come from the model's bindings.
double evaluate_in(const Model& m, const Expr& e,
                   const std::map<std::string, double>& assignment);

/// Largest constraint violation of `assignment` over the model's constraints
/// (0 when feasible; bound violations included).
double max_violation(const Model& m, const std::map<std::string, double>& assignment);

}  // namespace linform
