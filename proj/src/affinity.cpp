#include "linform/affinity.hpp"

#include <cmath>
#include <limits>

#include "linform/errors.hpp"

namespace linform {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_pattern(ExprKind k) {
  return k == ExprKind::Abs || k == ExprKind::Min || k == ExprKind::Max ||
         k == ExprKind::Quot || k == ExprKind::Mono;
}

// nullopt: not affine.
std::optional<AffineForm> affine_rec(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Const:
      return AffineForm{{}, e.const_value()};
    case ExprKind::ParamRef:
      return std::nullopt;  // callers normalize first; a dangling param is not affine
    case ExprKind::VarRef:
      return AffineForm{{{e.name(), 1.0}}, 0.0};
    case ExprKind::Neg: {
      auto inner = affine_rec(e.child(0));
      if (!inner) return std::nullopt;
      for (auto& [_, c] : inner->coeffs) c = -c;
      inner->offset = -inner->offset;
      return inner;
    }
    case ExprKind::Sum: {
      AffineForm acc;
      for (const Expr& k : e.children()) {
        auto part = affine_rec(k);
        if (!part) return std::nullopt;
        acc.offset += part->offset;
        for (const auto& [name, c] : part->coeffs) acc.coeffs[name] += c;
      }
      for (auto it = acc.coeffs.begin(); it != acc.coeffs.end();)
        it = it->second == 0.0 ? acc.coeffs.erase(it) : std::next(it);
      return acc;
    }
    case ExprKind::Prod: {
      // Affine only when at most one factor carries variables.
      double scale = 1.0;
      std::optional<AffineForm> varying;
      for (const Expr& k : e.children()) {
        auto part = affine_rec(k);
        if (!part) return std::nullopt;
        if (part->coeffs.empty()) {
          scale *= part->offset;
        } else {
          if (varying) return std::nullopt;
          varying = std::move(part);
        }
      }
      if (!varying) return AffineForm{{}, scale};
      for (auto& [_, c] : varying->coeffs) c *= scale;
      varying->offset *= scale;
      if (scale == 0.0) varying->coeffs.clear();
      return varying;
    }
    default:
      return std::nullopt;
  }
}

// Counts variable-bearing factors of a product without early exit.
int count_var_factors(const Expr& prod) {
  int n = 0;
  for (const Expr& k : prod.children()) {
    auto part = affine_rec(k);
    if (!part || !part->coeffs.empty()) ++n;
  }
  return n;
}

bool contains_pattern(const Expr& e) {
  if (is_pattern(e.kind())) return true;
  for (const Expr& k : e.children())
    if (contains_pattern(k)) return true;
  return false;
}

bool contains_big_product(const Expr& e) {
  if (e.is(ExprKind::Prod) && count_var_factors(e) >= 3) return true;
  for (const Expr& k : e.children())
    if (contains_big_product(k)) return true;
  return false;
}

}  // namespace

bool Interval::is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }

double AffineForm::eval(const std::map<std::string, double>& assignment) const {
  double acc = offset;
  for (const auto& [name, c] : coeffs) {
    auto it = assignment.find(name);
    if (it == assignment.end()) throw UnboundSymbol(name);
    acc += c * it->second;
  }
  return acc;
}

Expr AffineForm::to_expr() const {
  std::vector<Expr> terms;
  for (const auto& [name, c] : coeffs) {
    if (c == 1.0)
      terms.push_back(Expr::var(name));
    else
      terms.push_back(Expr::prod({Expr::constant(c), Expr::var(name)}));
  }
  if (offset != 0.0 || terms.empty()) terms.push_back(Expr::constant(offset));
  return Expr::sum(std::move(terms));
}

std::optional<AffineForm> affine_form_of(const Expr& e) {
  return affine_rec(e);
}

AffinityClass affinity_of(const Expr& e, const Model&) {
  auto form = affine_rec(e);
  if (form) {
    AffinityClass out;
    out.kind = form->coeffs.empty() ? AffinityKind::ConstantOnly : AffinityKind::AffineInVars;
    out.affine = std::move(*form);
    return out;
  }
  if (contains_pattern(e)) return {AffinityKind::NonlinearPattern, {}};
  if (contains_big_product(e)) return {AffinityKind::Unsupported, {}};
  // a product of exactly two variable factors
  return {AffinityKind::NonlinearPattern, {}};
}

Interval interval_of(const AffineForm& f, const Model& m) {
  double lo = f.offset;
  double hi = f.offset;
  for (const auto& [name, c] : f.coeffs) {
    const VarDecl* v = m.find_var(name);
    if (!v) throw UnboundSymbol(name);
    const double a = c > 0 ? c * v->lower : c * v->upper;
    const double b = c > 0 ? c * v->upper : c * v->lower;
    lo += a;
    hi += b;
  }
  return {lo, hi};
}

Interval interval_of(const Expr& e, const Model& m) {
  auto form = affine_form_of(e);
  if (!form) throw InvalidArgument("interval_of requires an affine expression");
  return interval_of(*form, m);
}

Interval finite_interval_of(const Expr& e, const Model& m, const std::string& context) {
  Interval iv = interval_of(e, m);
  if (!iv.is_finite())
    throw UnboundedInterval(context + ": needs finite bounds for " + to_string(e));
  return iv;
}

}  // namespace linform
