#include "linform/eval.hpp"

#include <algorithm>
#include <cmath>

#include "linform/errors.hpp"

namespace linform {

double evaluate(const Expr& e, const std::map<std::string, double>& assignment,
                const std::map<std::string, double>& params) {
  switch (e.kind()) {
    case ExprKind::Const:
      return e.const_value();
    case ExprKind::VarRef: {
      auto it = assignment.find(e.name());
      if (it == assignment.end()) throw UnboundSymbol(e.name());
      return it->second;
    }
    case ExprKind::ParamRef: {
      auto it = params.find(e.name());
      if (it == params.end()) throw UnboundSymbol(e.name());
      return it->second;
    }
    case ExprKind::Sum: {
      double acc = 0.0;
      for (const Expr& k : e.children()) acc += evaluate(k, assignment, params);
      return acc;
    }
    case ExprKind::Prod: {
      double acc = 1.0;
      for (const Expr& k : e.children()) acc *= evaluate(k, assignment, params);
      return acc;
    }
    case ExprKind::Neg:
      return -evaluate(e.child(0), assignment, params);
    case ExprKind::Abs:
      return std::fabs(evaluate(e.child(0), assignment, params));
    case ExprKind::Min: {
      double best = evaluate(e.child(0), assignment, params);
      for (int i = 1; i < e.child_count(); ++i)
        best = std::min(best, evaluate(e.child(i), assignment, params));
      return best;
    }
    case ExprKind::Max: {
      double best = evaluate(e.child(0), assignment, params);
      for (int i = 1; i < e.child_count(); ++i)
        best = std::max(best, evaluate(e.child(i), assignment, params));
      return best;
    }
    case ExprKind::Quot: {
      const double num = evaluate(e.child(0), assignment, params);
      const double den = evaluate(e.child(1), assignment, params);
      if (den == 0.0) throw DomainError("division by zero");
      return num / den;
    }
    case ExprKind::Mono: {
      const double arg = evaluate(e.child(0), assignment, params);
      switch (e.mono_fn()) {
        case MonoFn::Exp:
          return std::exp(arg);
        case MonoFn::Log:
          if (arg <= 0.0) throw DomainError("log of non-positive value");
          return std::log(arg);
        case MonoFn::Sqrt:
          if (arg < 0.0) throw DomainError("sqrt of negative value");
          return std::sqrt(arg);
      }
      throw DomainError("unknown monotone function");
    }
  }
  throw InvalidArgument("unknown expression kind");
}

double evaluate_in(const Model& m, const Expr& e,
                   const std::map<std::string, double>& assignment) {
  return evaluate(e, assignment, m.param_values());
}

double max_violation(const Model& m, const std::map<std::string, double>& assignment) {
  double worst = 0.0;
  for (const auto& c : m.constraints) {
    const double lhs = evaluate_in(m, c.lhs, assignment);
    const double rhs = evaluate_in(m, c.rhs, assignment);
    double v = 0.0;
    switch (c.rel) {
      case Rel::Le: v = lhs - rhs; break;
      case Rel::Ge: v = rhs - lhs; break;
      case Rel::Eq: v = std::fabs(lhs - rhs); break;
    }
    worst = std::max(worst, v);
  }
  for (const auto& v : m.vars) {
    auto it = assignment.find(v.name);
    if (it == assignment.end()) continue;
    worst = std::max(worst, v.lower - it->second);
    worst = std::max(worst, it->second - v.upper);
  }
  return worst;
}

}  // namespace linform
