#include "linform/locus.hpp"

#include "linform/errors.hpp"

namespace linform {

const Expr& locus_root(const ExprLocus& at, const Model& m) {
  if (at.root == ExprLocus::Root::Objective) return m.objective;
  const Constraint* c = m.find_constraint(at.constraint);
  if (!c) throw InvalidArgument("locus refers to unknown constraint: " + at.constraint);
  return at.root == ExprLocus::Root::ConstraintLhs ? c->lhs : c->rhs;
}

const Expr& locus_expr(const ExprLocus& at, const Model& m) {
  return subexpr_at(locus_root(at, m), at.steps);
}

std::string locus_to_string(const ExprLocus& at, const Model& m) {
  std::string out;
  switch (at.root) {
    case ExprLocus::Root::Objective: out = "objective"; break;
    case ExprLocus::Root::ConstraintLhs: out = "constraint[" + at.constraint + "].lhs"; break;
    case ExprLocus::Root::ConstraintRhs: out = "constraint[" + at.constraint + "].rhs"; break;
  }
  const Expr* cur = &locus_root(at, m);
  for (int s : at.steps) {
    switch (cur->kind()) {
      case ExprKind::Sum: out += ".term[" + std::to_string(s) + "]"; break;
      case ExprKind::Prod: out += ".factor[" + std::to_string(s) + "]"; break;
      case ExprKind::Min:
      case ExprKind::Max: out += ".arg[" + std::to_string(s) + "]"; break;
      case ExprKind::Quot: out += s == 0 ? ".num" : ".den"; break;
      default: out += ".arg"; break;
    }
    cur = &cur->child(s);
  }
  return out;
}

}  // namespace linform
