#pragma once

#include <map>
#include <optional>
#include <string>

#include "linform/expr.hpp"
#include "linform/model.hpp"

namespace linform {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool is_finite() const;
};

/// offset + sum of coeff * var; the coefficient map holds no zero entries.
struct AffineForm {
  std::map<std::string, double> coeffs;
  double offset = 0.0;

  double eval(const std::map<std::string, double>& assignment) const;
  Expr to_expr() const;
};

enum class AffinityKind { ConstantOnly, AffineInVars, NonlinearPattern, Unsupported };

struct AffinityClass {
  AffinityKind kind = AffinityKind::ConstantOnly;
  AffineForm affine;  // meaningful for ConstantOnly / AffineInVars
};

/// Classification of a normalized expression. NonlinearPattern when any of
/// the pattern constructors occurs or a product carries two variable factors;
/// Unsupported for products of three or more variable factors.
AffinityClass affinity_of(const Expr& e, const Model& m);

/// Shortcut: the affine form when affinity_of is ConstantOnly/AffineInVars.
std::optional<AffineForm> affine_form_of(const Expr& e);

/// Exact range of an affine form over the variable box; infinite endpoints
/// propagate from infinite bounds.
Interval interval_of(const AffineForm& f, const Model& m);
Interval interval_of(const Expr& e, const Model& m);  // requires affine e

/// As interval_of but throws UnboundedInterval unless both endpoints are
/// finite; `context` names the caller for the error message.
Interval finite_interval_of(const Expr& e, const Model& m, const std::string& context);

}  // namespace linform
