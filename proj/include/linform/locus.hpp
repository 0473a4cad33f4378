#pragma once

#include <string>
#include <vector>

#include "linform/expr.hpp"
#include "linform/model.hpp"

namespace linform {

/// Position of a subexpression inside a model: which root expression it lives
/// in plus the child-index chain leading to it.
struct ExprLocus {
  enum class Root { Objective, ConstraintLhs, ConstraintRhs };
  Root root = Root::Objective;
  std::string constraint;  // empty for the objective
  std::vector<int> steps;
};

const Expr& locus_root(const ExprLocus& at, const Model& m);
const Expr& locus_expr(const ExprLocus& at, const Model& m);

/// "objective.term[1]", "constraint[c1].rhs.arg[0]", ...
std::string locus_to_string(const ExprLocus& at, const Model& m);

}  // namespace linform
