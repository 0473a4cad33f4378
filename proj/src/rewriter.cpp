#include "linform/rewriter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "linform/errors.hpp"
#include "linform/normalize.hpp"

namespace linform {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* name_token(PatternKind k) {
  switch (k) {
    case PatternKind::Bilinear: return "bilinear";
    case PatternKind::Min: return "min";
    case PatternKind::Max: return "max";
    case PatternKind::Abs: return "abs";
    case PatternKind::LinearFractional: return "frac";
    case PatternKind::Monotone: return "mono";
  }
  return "?";
}

// Fresh auxiliary names: _aux_<kind>_<n> and _lin_<kind>_<n>_<i>, n in
// encounter order per kind.
class Namer {
 public:
  Namer(Model& m, PatternKind kind) : m_(m), token_(name_token(kind)) {}

  int next_index() {
    while (true) {
      const int n = counter_++;
      if (!m_.find_var(var_name(n))) return n;
    }
  }

  std::string var_name(int n) const {
    return "_aux_" + std::string(token_) + "_" + std::to_string(n);
  }

  std::string constraint_name(int n, int i) const {
    std::string base = "_lin_" + std::string(token_) + "_" + std::to_string(n) + "_" +
                       std::to_string(i);
    std::string name = base;
    int bump = 0;
    while (m_.find_constraint(name)) name = base + "_" + std::to_string(bump++);
    return name;
  }

 private:
  Model& m_;
  const char* token_;
  int counter_ = 0;
};

void set_at(Model& m, const ExprLocus& at, const Expr& replacement) {
  if (at.root == ExprLocus::Root::Objective) {
    m.objective = replace_at(m.objective, at.steps, replacement);
    return;
  }
  for (auto& c : m.constraints) {
    if (c.name != at.constraint) continue;
    if (at.root == ExprLocus::Root::ConstraintLhs)
      c.lhs = replace_at(c.lhs, at.steps, replacement);
    else
      c.rhs = replace_at(c.rhs, at.steps, replacement);
    return;
  }
  throw InvalidArgument("rewrite path refers to unknown constraint: " + at.constraint);
}

// Bilinear occurrences are whole monomials; keep the constant factors and
// swap the two variable factors for the auxiliary.
Expr monomial_with_aux(const Expr& occurrence, const std::string& aux) {
  if (!occurrence.is(ExprKind::Prod)) return Expr::var(aux);
  std::vector<Expr> factors;
  for (const Expr& k : occurrence.children()) {
    auto form = affine_form_of(k);
    if (form && form->coeffs.empty()) factors.push_back(k);
  }
  factors.push_back(Expr::var(aux));
  return Expr::prod(std::move(factors));
}

std::string group_key(const PatternInstance& inst) {
  std::string key = kind_name(inst.kind);
  for (const Expr& a : inst.args) {
    key += '|';
    key += expr_key(a);
  }
  return key;
}

void add_constraint(Model& m, RewriteStep& step, std::string name, Expr lhs, Rel rel, Expr rhs) {
  m.constraints.push_back({name, std::move(lhs), rel, std::move(rhs)});
  step.aux_constraints.push_back(std::move(name));
}

VarDecl& add_var(Model& m, RewriteStep& step, std::string name, VarDomain domain, double lo,
                 double hi) {
  m.vars.push_back({std::move(name), domain, lo, hi});
  step.aux_vars.push_back(m.vars.back());
  return m.vars.back();
}

bool all_binary_varrefs(const Model& m, const std::vector<Expr>& args) {
  for (const Expr& a : args) {
    if (!a.is(ExprKind::VarRef)) return false;
    const VarDecl* v = m.find_var(a.name());
    if (!v || v->domain != VarDomain::Binary) return false;
  }
  return true;
}

bool mono_increasing(MonoFn) {
  return true;  // exp, log and sqrt are all strictly increasing
}

double mono_inverse(MonoFn fn, double alpha, bool* defined) {
  *defined = true;
  switch (fn) {
    case MonoFn::Exp:
      if (alpha <= 0.0) { *defined = false; return 0.0; }
      return std::log(alpha);
    case MonoFn::Log:
      return std::exp(alpha);
    case MonoFn::Sqrt:
      if (alpha < 0.0) { *defined = false; return 0.0; }
      return alpha * alpha;
  }
  *defined = false;
  return 0.0;
}

}  // namespace

RewriteStep rewrite_bilinear(const Model& m, const std::vector<PatternInstance>& instances) {
  RewriteStep step;
  step.model = m;
  Namer namer(step.model, PatternKind::Bilinear);

  std::map<std::string, std::string> aux_for_group;
  std::vector<std::pair<const PatternInstance*, std::string>> pending;
  for (const auto& inst : instances) {
    if (inst.kind != PatternKind::Bilinear)
      throw InvalidArgument("rewrite_bilinear called with a non-bilinear instance");
    const std::string key = group_key(inst);
    auto it = aux_for_group.find(key);
    if (it != aux_for_group.end()) {
      pending.emplace_back(&inst, it->second);
      continue;
    }

    Expr b1 = inst.args[0];
    Expr b2 = inst.args[1];
    auto is_binary = [&](const Expr& e) {
      return e.is(ExprKind::VarRef) && m.find_var(e.name()) &&
             m.find_var(e.name())->domain == VarDomain::Binary;
    };
    if (!is_binary(b1)) std::swap(b1, b2);
    if (!is_binary(b1))
      throw InvalidArgument("bilinear instance without a binary factor");
    const int n = namer.next_index();
    const std::string aux = namer.var_name(n);

    if (is_binary(b2)) {
      // Case A: product of two binaries; w = b1 and b2
      add_var(step.model, step, aux, VarDomain::Continuous, 0.0, 1.0);
      add_constraint(step.model, step, namer.constraint_name(n, 0), Expr::var(aux), Rel::Le, b1);
      add_constraint(step.model, step, namer.constraint_name(n, 1), Expr::var(aux), Rel::Le, b2);
      add_constraint(step.model, step, namer.constraint_name(n, 2), Expr::var(aux), Rel::Ge,
                     b1 + b2 - 1.0);
    } else {
      // Case B: binary times bounded affine term
      const Interval iv = finite_interval_of(b2, m, "bilinear case B");
      const double L = iv.lo;
      const double U = iv.hi;
      add_var(step.model, step, aux, VarDomain::Continuous, std::min(0.0, L), std::max(0.0, U));
      add_constraint(step.model, step, namer.constraint_name(n, 0), Expr::var(aux), Rel::Le,
                     U * b1);
      add_constraint(step.model, step, namer.constraint_name(n, 1), Expr::var(aux), Rel::Ge,
                     L * b1);
      add_constraint(step.model, step, namer.constraint_name(n, 2), Expr::var(aux), Rel::Le,
                     b2 - Expr::constant(L) + L * b1);
      add_constraint(step.model, step, namer.constraint_name(n, 3), Expr::var(aux), Rel::Ge,
                     b2 - Expr::constant(U) + U * b1);
    }
    aux_for_group.emplace(key, aux);
    pending.emplace_back(&inst, aux);
  }

  for (const auto& [inst, aux] : pending) {
    const Expr& occurrence = locus_expr(inst->path, m);
    set_at(step.model, inst->path, monomial_with_aux(occurrence, aux));
    ++step.instances_replaced;
  }
  return step;
}

RewriteStep rewrite_minmax(const Model& m, const std::vector<PatternInstance>& instances) {
  RewriteStep step;
  step.model = m;

  std::vector<const PatternInstance*> splits;
  std::vector<const PatternInstance*> aux_needed;
  for (const auto& inst : instances) {
    if (inst.kind != PatternKind::Min && inst.kind != PatternKind::Max)
      throw InvalidArgument("rewrite_minmax called with a non-min/max instance");
    (inst.polarity == Polarity::ConstraintSplit ? splits : aux_needed).push_back(&inst);
  }

  // Shared auxiliaries for syntactically identical occurrences; a group with
  // any Adverse member gets the pinned disjunctive encoding.
  struct Group {
    PatternKind kind;
    std::vector<Expr> args;
    bool adverse = false;
    std::vector<const PatternInstance*> members;
  };
  std::vector<Group> groups;
  std::map<std::string, size_t> group_index;
  for (const auto* inst : aux_needed) {
    const std::string key = group_key(*inst);
    auto it = group_index.find(key);
    if (it == group_index.end()) {
      group_index.emplace(key, groups.size());
      groups.push_back({inst->kind, inst->args, inst->polarity == Polarity::Adverse, {inst}});
    } else {
      groups[it->second].adverse |= inst->polarity == Polarity::Adverse;
      groups[it->second].members.push_back(inst);
    }
  }

  Namer min_namer(step.model, PatternKind::Min);
  Namer max_namer(step.model, PatternKind::Max);

  for (auto& g : groups) {
    const bool is_min = g.kind == PatternKind::Min;
    Namer& namer = is_min ? min_namer : max_namer;
    const int n = namer.next_index();
    const std::string aux = namer.var_name(n);
    const int K = static_cast<int>(g.args.size());

    if (all_binary_varrefs(m, g.args)) {
      // and/or rules: exact for binaries with no big-M, any polarity
      add_var(step.model, step, aux, VarDomain::Continuous, 0.0, 1.0);
      int ci = 0;
      std::vector<Expr> sum_terms;
      for (const Expr& b : g.args) {
        add_constraint(step.model, step, namer.constraint_name(n, ci++), Expr::var(aux),
                       is_min ? Rel::Le : Rel::Ge, b);
        sum_terms.push_back(b);
      }
      if (is_min) {
        add_constraint(step.model, step, namer.constraint_name(n, ci++), Expr::var(aux), Rel::Ge,
                       Expr::sum(sum_terms) - Expr::constant(K - 1));
      } else {
        add_constraint(step.model, step, namer.constraint_name(n, ci++), Expr::var(aux), Rel::Le,
                       Expr::sum(sum_terms));
      }
    } else if (!g.adverse) {
      // hypograph (min) / epigraph (max); pressure pins the auxiliary
      double lo = is_min ? kInf : -kInf;
      double hi = is_min ? kInf : -kInf;
      for (const Expr& a : g.args) {
        const Interval iv = interval_of(a, m);
        lo = is_min ? std::min(lo, iv.lo) : std::max(lo, iv.lo);
        hi = is_min ? std::min(hi, iv.hi) : std::max(hi, iv.hi);
      }
      add_var(step.model, step, aux, VarDomain::Continuous, lo, hi);
      int ci = 0;
      for (const Expr& a : g.args)
        add_constraint(step.model, step, namer.constraint_name(n, ci++), Expr::var(aux),
                       is_min ? Rel::Le : Rel::Ge, a);
    } else {
      // disjunctive encoding with selector binaries
      std::vector<Interval> ivs;
      double best_lo = kInf, best_hi = -kInf;  // min_j lo_j and max_j hi_j
      for (const Expr& a : g.args) {
        ivs.push_back(finite_interval_of(a, m, std::string(is_min ? "min" : "max") +
                                                   " disjunction"));
        best_lo = std::min(best_lo, ivs.back().lo);
        best_hi = std::max(best_hi, ivs.back().hi);
      }
      double zlo = is_min ? kInf : -kInf;
      double zhi = is_min ? kInf : -kInf;
      for (const Interval& iv : ivs) {
        zlo = is_min ? std::min(zlo, iv.lo) : std::max(zlo, iv.lo);
        zhi = is_min ? std::min(zhi, iv.hi) : std::max(zhi, iv.hi);
      }
      add_var(step.model, step, aux, VarDomain::Continuous, zlo, zhi);
      std::vector<std::string> selectors;
      for (int k = 0; k < K; ++k) {
        const int bn = namer.next_index();
        selectors.push_back(namer.var_name(bn));
        add_var(step.model, step, selectors.back(), VarDomain::Binary, 0.0, 1.0);
      }
      int ci = 0;
      for (const Expr& a : g.args)
        add_constraint(step.model, step, namer.constraint_name(n, ci++), Expr::var(aux),
                       is_min ? Rel::Le : Rel::Ge, a);
      for (int k = 0; k < K; ++k) {
        const double big_m = is_min ? ivs[static_cast<size_t>(k)].hi - best_lo
                                    : best_hi - ivs[static_cast<size_t>(k)].lo;
        const std::string cname = namer.constraint_name(n, ci++);
        const Expr slack = big_m * (1.0 - Expr::var(selectors[static_cast<size_t>(k)]));
        if (is_min)
          add_constraint(step.model, step, cname, Expr::var(aux), Rel::Ge,
                         g.args[static_cast<size_t>(k)] - slack);
        else
          add_constraint(step.model, step, cname, Expr::var(aux), Rel::Le,
                         g.args[static_cast<size_t>(k)] + slack);
        step.big_m_values.push_back(big_m);
        step.big_m_derivations.push_back({cname, big_m, ivs[static_cast<size_t>(k)]});
      }
      std::vector<Expr> sel_terms;
      for (const auto& s : selectors) sel_terms.push_back(Expr::var(s));
      add_constraint(step.model, step, namer.constraint_name(n, ci++), Expr::sum(sel_terms),
                     Rel::Eq, Expr::constant(1.0));
    }

    for (const auto* inst : g.members) {
      set_at(step.model, inst->path, Expr::var(aux));
      ++step.instances_replaced;
    }
  }

  // Whole-side occurrences: one linear constraint per argument.
  for (const auto* inst : splits) {
    const Constraint* orig = m.find_constraint(inst->path.constraint);
    if (!orig) throw InvalidArgument("split instance without a constraint");
    const bool on_lhs = inst->path.root == ExprLocus::Root::ConstraintLhs;
    const Expr other = on_lhs ? orig->rhs : orig->lhs;
    Namer& namer = inst->kind == PatternKind::Min ? min_namer : max_namer;
    const int n = namer.next_index();

    auto it = std::find_if(step.model.constraints.begin(), step.model.constraints.end(),
                           [&](const Constraint& c) { return c.name == orig->name; });
    const size_t pos = static_cast<size_t>(it - step.model.constraints.begin());
    step.model.constraints.erase(it);
    std::vector<Constraint> replacements;
    int ci = 0;
    for (const Expr& a : inst->args) {
      std::string cname = namer.constraint_name(n, ci++);
      if (on_lhs)
        replacements.push_back({cname, a, orig->rel, other});
      else
        replacements.push_back({cname, other, orig->rel, a});
      step.aux_constraints.push_back(std::move(cname));
    }
    step.model.constraints.insert(step.model.constraints.begin() + static_cast<long>(pos),
                                  replacements.begin(), replacements.end());
    ++step.instances_replaced;
  }
  return step;
}

RewriteStep rewrite_abs(const Model& m, const std::vector<PatternInstance>& instances) {
  RewriteStep step;
  step.model = m;
  Namer namer(step.model, PatternKind::Abs);

  enum class Route { Benign, EqualityParts, Adverse };
  auto route_of = [&](const PatternInstance& inst) {
    if (inst.path.root != ExprLocus::Root::Objective) {
      const Constraint* c = m.find_constraint(inst.path.constraint);
      if (c && c->rel == Rel::Eq) return Route::EqualityParts;
    }
    return inst.polarity == Polarity::Adverse ? Route::Adverse : Route::Benign;
  };

  std::map<std::string, Expr> replacement_for;
  for (const auto& inst : instances) {
    if (inst.kind != PatternKind::Abs)
      throw InvalidArgument("rewrite_abs called with a non-abs instance");
    const Route route = route_of(inst);
    const std::string key =
        std::string(route == Route::Benign         ? "b|"
                    : route == Route::EqualityParts ? "e|"
                                                    : "a|") +
        expr_key(inst.args[0]);
    auto found = replacement_for.find(key);
    if (found != replacement_for.end()) {
      set_at(step.model, inst.path, found->second);
      ++step.instances_replaced;
      continue;
    }

    const Expr& t = inst.args[0];
    const Interval iv = interval_of(t, m);
    Expr replacement;
    if (route == Route::Benign) {
      const int n = namer.next_index();
      const std::string y = namer.var_name(n);
      const double lo = iv.lo > 0.0 ? iv.lo : (iv.hi < 0.0 ? -iv.hi : 0.0);
      const double hi = std::max(std::fabs(iv.lo), std::fabs(iv.hi));
      add_var(step.model, step, y, VarDomain::Continuous, lo, hi);
      add_constraint(step.model, step, namer.constraint_name(n, 0), Expr::var(y), Rel::Ge, t);
      add_constraint(step.model, step, namer.constraint_name(n, 1), Expr::var(y), Rel::Ge,
                     Expr::neg(t));
      replacement = Expr::var(y);
    } else if (route == Route::EqualityParts) {
      const int n = namer.next_index();
      const std::string tp = namer.var_name(n);
      const int n2 = namer.next_index();
      const std::string tn = namer.var_name(n2);
      add_var(step.model, step, tp, VarDomain::Continuous, 0.0, kInf);
      add_var(step.model, step, tn, VarDomain::Continuous, 0.0, kInf);
      add_constraint(step.model, step, namer.constraint_name(n, 0), t, Rel::Eq,
                     Expr::var(tp) - Expr::var(tn));
      replacement = Expr::var(tp) + Expr::var(tn);
    } else {
      const Interval fiv = finite_interval_of(t, m, "abs disjunction");
      const double U = std::max(std::fabs(fiv.lo), std::fabs(fiv.hi));
      const int n = namer.next_index();
      const std::string y = namer.var_name(n);
      const int bn = namer.next_index();
      const std::string beta = namer.var_name(bn);
      add_var(step.model, step, y, VarDomain::Continuous, 0.0, U);
      add_var(step.model, step, beta, VarDomain::Binary, 0.0, 1.0);
      add_constraint(step.model, step, namer.constraint_name(n, 0), Expr::var(y), Rel::Ge, t);
      add_constraint(step.model, step, namer.constraint_name(n, 1), Expr::var(y), Rel::Ge,
                     Expr::neg(t));
      const std::string up_pos = namer.constraint_name(n, 2);
      add_constraint(step.model, step, up_pos, Expr::var(y), Rel::Le,
                     t + 2.0 * U * (1.0 - Expr::var(beta)));
      add_constraint(step.model, step, namer.constraint_name(n, 3), Expr::var(y), Rel::Le,
                     Expr::neg(t) + 2.0 * U * Expr::var(beta));
      step.big_m_values.push_back(2.0 * U);
      step.big_m_derivations.push_back({up_pos, 2.0 * U, fiv});
      replacement = Expr::var(y);
    }
    replacement_for.emplace(key, replacement);
    set_at(step.model, inst.path, replacement);
    ++step.instances_replaced;
  }
  return step;
}

RewriteStep rewrite_fractional(const Model& m, const std::vector<PatternInstance>& instances) {
  if (instances.size() != 1)
    throw FractionalNotIsolated("the fractional transform handles exactly one objective ratio");
  const PatternInstance& inst = instances.front();
  if (inst.kind != PatternKind::LinearFractional)
    throw InvalidArgument("rewrite_fractional called with a non-fractional instance");
  if (inst.path.root != ExprLocus::Root::Objective || !inst.path.steps.empty())
    throw FractionalNotIsolated("fractional term must constitute the entire objective");
  for (const auto& c : m.constraints)
    if (!affine_form_of(c.lhs) || !affine_form_of(c.rhs))
      throw FractionalNotIsolated("constraints must be linear before the fractional transform");
  if (m.has_integrality())
    throw FractionalWithIntegers("fractional transform is only exact for continuous models");

  const auto num = affine_form_of(inst.args[0]);
  const auto den = affine_form_of(inst.args[1]);
  if (!num || !den) throw InvalidArgument("fractional instance with non-affine parts");
  const Interval den_iv = interval_of(*den, m);
  if (!(den_iv.lo > 0.0))
    throw DenominatorNotPositive("denominator is not provably positive on the variable box");

  RewriteStep step;
  step.model.sense = m.sense;
  step.model.params = m.params;
  Namer namer(step.model, PatternKind::LinearFractional);

  const int tn = namer.next_index();
  const std::string tau = namer.var_name(tn);
  const double tau_max = 1.0 / den_iv.lo;
  const double tau_min = std::isfinite(den_iv.hi) ? 1.0 / den_iv.hi : 0.0;
  add_var(step.model, step, tau, VarDomain::Continuous, tau_min, tau_max);

  FractionalRecovery recovery;
  recovery.tau = tau;
  std::map<std::string, std::string> scaled;
  for (const auto& v : m.vars) {
    const int yn = namer.next_index();
    const std::string y = namer.var_name(yn);
    // y = x * tau; corner values of the box give valid declared bounds
    double ylo = kInf, yhi = -kInf;
    for (double xv : {v.lower, v.upper})
      for (double tv : {tau_min, tau_max}) {
        const double c = xv * tv;
        if (std::isnan(c)) continue;  // 0 * inf corners carry no information
        ylo = std::min(ylo, c);
        yhi = std::max(yhi, c);
      }
    if (!std::isfinite(v.lower)) ylo = -kInf;
    if (!std::isfinite(v.upper)) yhi = kInf;
    add_var(step.model, step, y, VarDomain::Continuous, ylo, yhi);
    scaled[v.name] = y;
    recovery.original_to_scaled.emplace_back(v.name, y);
  }

  auto scale_form = [&](const AffineForm& f) {
    // f(x) becomes sum of coeffs over scaled vars plus offset * tau
    std::vector<Expr> terms;
    for (const auto& [name, c] : f.coeffs)
      terms.push_back(c * Expr::var(scaled.at(name)));
    if (f.offset != 0.0) terms.push_back(f.offset * Expr::var(tau));
    if (terms.empty()) terms.push_back(Expr::constant(0.0));
    return Expr::sum(std::move(terms));
  };

  step.model.objective = scale_form(*num);

  for (const auto& c : m.constraints) {
    const auto l = affine_form_of(c.lhs);
    const auto r = affine_form_of(c.rhs);
    AffineForm row;
    row.coeffs = l->coeffs;
    for (const auto& [name, coef] : r->coeffs) row.coeffs[name] -= coef;
    for (auto it = row.coeffs.begin(); it != row.coeffs.end();)
      it = it->second == 0.0 ? row.coeffs.erase(it) : std::next(it);
    const double g = r->offset - l->offset;  // row * x REL g
    AffineForm lhs_scaled;
    lhs_scaled.coeffs = row.coeffs;
    step.model.constraints.push_back(
        {c.name, scale_form(lhs_scaled), c.rel, g * Expr::var(tau)});
  }

  int ci = 0;
  for (const auto& v : m.vars) {
    const std::string& y = scaled.at(v.name);
    if (std::isfinite(v.lower))
      add_constraint(step.model, step, namer.constraint_name(tn, ci++), Expr::var(y), Rel::Ge,
                     v.lower * Expr::var(tau));
    if (std::isfinite(v.upper))
      add_constraint(step.model, step, namer.constraint_name(tn, ci++), Expr::var(y), Rel::Le,
                     v.upper * Expr::var(tau));
  }
  {
    std::vector<Expr> unit_terms;
    for (const auto& [name, c] : den->coeffs)
      unit_terms.push_back(c * Expr::var(scaled.at(name)));
    unit_terms.push_back(den->offset * Expr::var(tau));
    add_constraint(step.model, step, namer.constraint_name(tn, ci++),
                   Expr::sum(std::move(unit_terms)), Rel::Eq, Expr::constant(1.0));
  }

  step.fractional = std::move(recovery);
  step.instances_replaced = 1;
  return step;
}

RewriteStep rewrite_monotone(const Model& m, const std::vector<PatternInstance>& instances) {
  RewriteStep step;
  step.model = m;
  for (const auto& inst : instances) {
    if (inst.kind != PatternKind::Monotone)
      throw InvalidArgument("rewrite_monotone called with a non-monotone instance");
    const Expr& occurrence = locus_expr(inst.path, m);
    if (!occurrence.is(ExprKind::Mono))
      throw InvalidArgument("monotone instance does not point at a monotone node");
    const MonoFn fn = occurrence.mono_fn();
    if (!affine_form_of(inst.args[0]))
      throw NonAffineArg("monotone transform requires an affine argument");
    const bool increasing = mono_increasing(fn);

    if (inst.path.root == ExprLocus::Root::Objective) {
      if (!inst.path.steps.empty())
        throw NonAffineArg("objective monotone transform must cover the whole objective");
      step.model.objective = inst.args[0];
      if (!increasing)
        step.model.sense =
            step.model.sense == Sense::Minimize ? Sense::Maximize : Sense::Minimize;
      step.post_solve = PostSolve{fn, increasing};
      ++step.instances_replaced;
      continue;
    }

    // phi(g) REL alpha  <=>  g REL phi^-1(alpha) for increasing phi
    auto it = std::find_if(step.model.constraints.begin(), step.model.constraints.end(),
                           [&](const Constraint& c) { return c.name == inst.path.constraint; });
    if (it == step.model.constraints.end())
      throw InvalidArgument("monotone instance refers to unknown constraint");
    const bool on_lhs = inst.path.root == ExprLocus::Root::ConstraintLhs;
    const Expr& other = on_lhs ? it->rhs : it->lhs;
    const auto other_form = affine_form_of(other);
    if (!other_form || !other_form->coeffs.empty())
      throw NonAffineArg("monotone constraint needs a constant on the other side");
    const double alpha = other_form->offset;
    // the argument range never reaches where phi is undefined (checked at
    // detection), so only alpha can fall outside the image of phi
    bool defined = true;
    const double inv = mono_inverse(fn, alpha, &defined);
    if (!defined) {
      // alpha below the image of phi: phi(g) <= alpha (or = alpha) can never
      // hold, phi(g) >= alpha always holds
      const bool mono_le_alpha = (on_lhs && it->rel == Rel::Le) || (!on_lhs && it->rel == Rel::Ge);
      const bool infeasible = mono_le_alpha || it->rel == Rel::Eq;
      it->lhs = Expr::constant(0.0);
      it->rel = Rel::Le;
      it->rhs = Expr::constant(infeasible ? -1.0 : 1.0);
      ++step.instances_replaced;
      continue;
    }
    Rel rel = it->rel;
    if (!increasing) rel = rel == Rel::Le ? Rel::Ge : rel == Rel::Ge ? Rel::Le : Rel::Eq;
    if (on_lhs) {
      it->lhs = inst.args[0];
      it->rhs = Expr::constant(inv);
    } else {
      it->lhs = Expr::constant(inv);
      it->rhs = inst.args[0];
    }
    it->rel = rel;
    ++step.instances_replaced;
  }
  return step;
}

namespace {

RewriteStep apply_kind(PatternKind kind, const Model& m,
                       const std::vector<PatternInstance>& instances) {
  switch (kind) {
    case PatternKind::Bilinear: return rewrite_bilinear(m, instances);
    case PatternKind::Min:
    case PatternKind::Max: return rewrite_minmax(m, instances);
    case PatternKind::Abs: return rewrite_abs(m, instances);
    case PatternKind::LinearFractional: return rewrite_fractional(m, instances);
    case PatternKind::Monotone: return rewrite_monotone(m, instances);
  }
  throw InvalidArgument("unknown pattern kind");
}

constexpr PatternKind kFixedOrder[] = {
    PatternKind::Monotone, PatternKind::Bilinear, PatternKind::Abs,
    PatternKind::Min,      PatternKind::Max,      PatternKind::LinearFractional,
};

}  // namespace

FixpointResult run_fixpoint(const Model& m, RewriteOrder order, unsigned seed) {
  FixpointResult result;
  result.model = normalize_model(m);
  std::mt19937 rng(seed);
  std::set<PatternKind> processed;

  for (int t = 0;; ++t) {
    if (t > 12)
      throw NonTermination("fixpoint failed to terminate within 12 iterations");
    std::vector<PatternInstance> instances = detect_patterns(result.model);
    if (instances.empty()) break;

    std::set<PatternKind> active;
    for (const auto& inst : instances) active.insert(inst.kind);
    for (PatternKind k : active)
      if (processed.count(k))
        throw NonTermination(std::string("pattern kind reintroduced: ") + kind_name(k));

    PatternKind chosen = *active.begin();
    if (order == RewriteOrder::FixedPriority) {
      for (PatternKind k : kFixedOrder) {
        if (active.count(k)) {
          chosen = k;
          break;
        }
      }
    } else {
      std::vector<PatternKind> pool;
      for (PatternKind k : active)
        if (k != PatternKind::LinearFractional) pool.push_back(k);
      chosen = pool.empty() ? PatternKind::LinearFractional
                            : pool[rng() % pool.size()];
    }

    std::vector<PatternInstance> of_kind;
    for (const auto& inst : instances)
      if (inst.kind == chosen) of_kind.push_back(inst);

    RewriteStep step = apply_kind(chosen, result.model, of_kind);
    result.model = normalize_model(step.model);

    for (const auto& inst : detect_patterns(result.model))
      if (inst.kind == chosen)
        throw NonTermination(std::string("instances of ") + kind_name(chosen) +
                             " survived their rewrite pass");

    TraceIteration it;
    it.t = t;
    it.kind = chosen;
    it.instances_replaced = step.instances_replaced;
    it.aux_vars = std::move(step.aux_vars);
    it.aux_constraints = std::move(step.aux_constraints);
    it.big_m_values = std::move(step.big_m_values);
    result.trace.iterations.push_back(std::move(it));
    if (step.post_solve) result.trace.post_solve = step.post_solve;
    if (step.fractional) result.trace.fractional = std::move(step.fractional);
    processed.insert(chosen);
  }
  return result;
}

}  // namespace linform
