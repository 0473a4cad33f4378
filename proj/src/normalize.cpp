#include "linform/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "linform/errors.hpp"
#include "linform/eval.hpp"

namespace linform {

namespace {

// Canonical form is a sum of monomials; a monomial is a coefficient times a
// sorted list of non-sum atoms (VarRef or one of the pattern constructors).
struct Monomial {
  double coeff = 1.0;
  std::vector<Expr> atoms;
};

using MonoVec = std::vector<Monomial>;

std::string atoms_key(const std::vector<Expr>& atoms) {
  std::string key;
  for (const Expr& a : atoms) {
    key += expr_key(a);
    key += '|';
  }
  return key;
}

void sort_atoms(std::vector<Expr>& atoms) {
  std::stable_sort(atoms.begin(), atoms.end(), [](const Expr& a, const Expr& b) {
    return expr_key(a) < expr_key(b);
  });
}

MonoVec combine(MonoVec in) {
  MonoVec out;
  std::map<std::string, size_t> index;
  for (Monomial& m : in) {
    sort_atoms(m.atoms);
    const std::string key = atoms_key(m.atoms);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, out.size());
      out.push_back(std::move(m));
    } else {
      out[it->second].coeff += m.coeff;
    }
  }
  MonoVec kept;
  for (Monomial& m : out)
    if (m.coeff != 0.0) kept.push_back(std::move(m));
  return kept;
}

MonoVec cross(const MonoVec& a, const MonoVec& b) {
  MonoVec out;
  out.reserve(a.size() * b.size());
  for (const Monomial& ma : a)
    for (const Monomial& mb : b) {
      Monomial m;
      m.coeff = ma.coeff * mb.coeff;
      m.atoms = ma.atoms;
      m.atoms.insert(m.atoms.end(), mb.atoms.begin(), mb.atoms.end());
      out.push_back(std::move(m));
    }
  return out;
}

Expr assemble(MonoVec monos) {
  monos = combine(std::move(monos));
  double constant = 0.0;
  std::vector<Expr> terms;
  for (Monomial& m : monos) {
    if (m.atoms.empty()) {
      constant += m.coeff;
      continue;
    }
    if (m.coeff == 1.0) {
      terms.push_back(Expr::prod(std::move(m.atoms)));
    } else {
      std::vector<Expr> factors;
      factors.push_back(Expr::constant(m.coeff));
      factors.insert(factors.end(), m.atoms.begin(), m.atoms.end());
      terms.push_back(Expr::prod(std::move(factors)));
    }
  }
  if (constant != 0.0 || terms.empty()) terms.push_back(Expr::constant(constant));
  return Expr::sum(std::move(terms));
}

MonoVec norm_rec(const Expr& e, const std::map<std::string, double>& params);

Expr norm_expr(const Expr& e, const std::map<std::string, double>& params) {
  return assemble(norm_rec(e, params));
}

MonoVec single(Expr atom) {
  Monomial m;
  m.atoms.push_back(std::move(atom));
  return {std::move(m)};
}

MonoVec constant_mono(double v) {
  Monomial m;
  m.coeff = v;
  return {std::move(m)};
}

bool is_const(const Expr& e) { return e.is(ExprKind::Const); }

// |t| = |-t|; fix the sign of the leading monomial so syntactically mirrored
// arguments share one canonical form.
Expr canonical_abs_arg(Expr arg) {
  const Expr* first = &arg;
  if (arg.is(ExprKind::Sum)) first = &arg.child(0);
  double lead = 1.0;
  if (first->is(ExprKind::Const)) lead = first->const_value();
  else if (first->is(ExprKind::Prod) && first->child(0).is(ExprKind::Const))
    lead = first->child(0).const_value();
  if (lead >= 0.0) return arg;
  MonoVec negated = norm_rec(arg, {});
  for (Monomial& m : negated) m.coeff = -m.coeff;
  return assemble(std::move(negated));
}

MonoVec norm_rec(const Expr& e, const std::map<std::string, double>& params) {
  switch (e.kind()) {
    case ExprKind::Const:
      return constant_mono(e.const_value());
    case ExprKind::ParamRef: {
      auto it = params.find(e.name());
      if (it == params.end()) throw UnboundSymbol(e.name());
      return constant_mono(it->second);
    }
    case ExprKind::VarRef:
      return single(e);
    case ExprKind::Neg: {
      MonoVec inner = norm_rec(e.child(0), params);
      for (Monomial& m : inner) m.coeff = -m.coeff;
      return inner;
    }
    case ExprKind::Sum: {
      MonoVec out;
      for (const Expr& k : e.children()) {
        MonoVec part = norm_rec(k, params);
        out.insert(out.end(), part.begin(), part.end());
      }
      return combine(std::move(out));
    }
    case ExprKind::Prod: {
      MonoVec acc = constant_mono(1.0);
      for (const Expr& k : e.children()) acc = cross(acc, norm_rec(k, params));
      return combine(std::move(acc));
    }
    case ExprKind::Quot: {
      Expr num = norm_expr(e.child(0), params);
      Expr den = norm_expr(e.child(1), params);
      if (is_const(den)) {
        const double d = den.const_value();
        if (d == 0.0) throw DomainError("division by constant zero");
        MonoVec scaled = norm_rec(num, params);
        for (Monomial& m : scaled) m.coeff /= d;
        return combine(std::move(scaled));
      }
      return single(Expr::quot(std::move(num), std::move(den)));
    }
    case ExprKind::Abs: {
      Expr arg = norm_expr(e.child(0), params);
      if (is_const(arg)) return constant_mono(std::fabs(arg.const_value()));
      return single(Expr::abs(canonical_abs_arg(std::move(arg))));
    }
    case ExprKind::Min:
    case ExprKind::Max: {
      std::vector<Expr> args;
      std::vector<std::string> seen;
      for (const Expr& k : e.children()) {
        Expr a = norm_expr(k, params);
        std::string key = expr_key(a);
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(std::move(key));
        args.push_back(std::move(a));
      }
      bool all_const = true;
      for (const Expr& a : args)
        if (!is_const(a)) all_const = false;
      if (all_const) {
        double best = args[0].const_value();
        for (const Expr& a : args)
          best = e.kind() == ExprKind::Min ? std::min(best, a.const_value())
                                           : std::max(best, a.const_value());
        return constant_mono(best);
      }
      if (args.size() == 1) return norm_rec(args[0], params);
      return single(e.kind() == ExprKind::Min ? Expr::min_of(std::move(args))
                                              : Expr::max_of(std::move(args)));
    }
    case ExprKind::Mono: {
      Expr arg = norm_expr(e.child(0), params);
      if (is_const(arg))
        return constant_mono(evaluate(Expr::mono(e.mono_fn(), arg), {}, {}));
      return single(Expr::mono(e.mono_fn(), std::move(arg)));
    }
  }
  throw InvalidArgument("unknown expression kind");
}

}  // namespace

Expr normalize(const Expr& e, const std::map<std::string, double>& params) {
  return norm_expr(e, params);
}

Model normalize_model(Model m) {
  const auto params = m.param_values();
  m.objective = normalize(m.objective, params);
  for (Constraint& c : m.constraints) {
    c.lhs = normalize(c.lhs, params);
    c.rhs = normalize(c.rhs, params);
  }
  return m;
}

}  // namespace linform
