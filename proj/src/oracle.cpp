#include "linform/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "linform/affinity.hpp"
#include "linform/errors.hpp"
#include "linform/eval.hpp"
#include "linform/locus.hpp"
#include "linform/normalize.hpp"

namespace linform {

namespace {

constexpr long kCaseLimit = 200000;

double apply_fn(MonoFn fn, double v) {
  switch (fn) {
    case MonoFn::Exp: return std::exp(v);
    case MonoFn::Log: return std::log(v);
    case MonoFn::Sqrt: return std::sqrt(v);
  }
  return v;
}

Expr substitute_vars(const Expr& e, const std::map<std::string, double>& values) {
  if (e.is(ExprKind::VarRef)) {
    auto it = values.find(e.name());
    return it == values.end() ? e : Expr::constant(it->second);
  }
  Expr out = e;
  for (int i = 0; i < e.child_count(); ++i)
    out = out.with_child(i, substitute_vars(out.child(i), values));
  return out;
}

struct Occurrence {
  ExprLocus path;
  ExprKind kind = ExprKind::Abs;  // Abs, Min or Max
  std::vector<Expr> args;
  int branch_count() const {
    return kind == ExprKind::Abs ? 2 : static_cast<int>(args.size());
  }
};

void collect(const Expr& e, ExprLocus& at, std::vector<Occurrence>* out, bool top_level) {
  switch (e.kind()) {
    case ExprKind::Abs:
    case ExprKind::Min:
    case ExprKind::Max: {
      for (const Expr& a : e.children())
        if (!affine_form_of(a))
          throw OracleScaleExceeded("oracle: nested pattern inside " + to_string(e));
      Occurrence occ;
      occ.path = at;
      occ.kind = e.kind();
      occ.args = e.is(ExprKind::Abs) ? std::vector<Expr>{e.child(0)} : e.children();
      if (occ.args.size() > 4)
        throw OracleScaleExceeded("oracle: more than 4 arguments in a min/max");
      out->push_back(std::move(occ));
      return;
    }
    case ExprKind::Quot:
    case ExprKind::Mono:
      if (!top_level)
        throw OracleScaleExceeded("oracle: embedded fractional or monotone term");
      return;
    default:
      for (int i = 0; i < e.child_count(); ++i) {
        at.steps.push_back(i);
        collect(e.child(i), at, out, false);
        at.steps.pop_back();
      }
  }
}

// phi(g) REL alpha -> g REL phi^-1(alpha); exp/log/sqrt are all increasing.
void invert_constraint_monotones(Model& m) {
  for (auto& c : m.constraints) {
    for (int side = 0; side < 2; ++side) {
      Expr& mine = side == 0 ? c.lhs : c.rhs;
      Expr& other = side == 0 ? c.rhs : c.lhs;
      if (!mine.is(ExprKind::Mono)) continue;
      auto other_form = affine_form_of(other);
      if (!other_form || !other_form->coeffs.empty())
        throw OracleScaleExceeded("oracle: monotone constraint without a constant side");
      const double alpha = other_form->offset;
      const MonoFn fn = mine.mono_fn();
      bool defined = true;
      double inv = 0;
      switch (fn) {
        case MonoFn::Exp: defined = alpha > 0; inv = defined ? std::log(alpha) : 0; break;
        case MonoFn::Log: inv = std::exp(alpha); break;
        case MonoFn::Sqrt: defined = alpha >= 0; inv = defined ? alpha * alpha : 0; break;
      }
      if (!defined) {
        const bool mine_on_lhs = side == 0;
        const bool mono_le_alpha =
            (mine_on_lhs && c.rel == Rel::Le) || (!mine_on_lhs && c.rel == Rel::Ge);
        const bool infeasible = mono_le_alpha || c.rel == Rel::Eq;
        c.lhs = Expr::constant(0.0);
        c.rel = Rel::Le;
        c.rhs = Expr::constant(infeasible ? -1.0 : 1.0);
        break;
      }
      mine = mine.child(0);
      other = Expr::constant(inv);
      break;
    }
  }
}

void replace_in_model(Model& m, const ExprLocus& at, const Expr& replacement) {
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
}

}  // namespace

Solution dinkelbach(const Model& m) {
  if (m.has_integrality())
    throw InvalidArgument("dinkelbach requires a continuous model");
  if (!m.objective.is(ExprKind::Quot))
    throw InvalidArgument("dinkelbach requires a fractional objective");
  const auto num = affine_form_of(m.objective.child(0));
  const auto den = affine_form_of(m.objective.child(1));
  if (!num || !den)
    throw InvalidArgument("dinkelbach requires affine numerator and denominator");

  Model feasibility = m;
  feasibility.objective = Expr::constant(0.0);
  feasibility.sense = Sense::Minimize;
  Solution probe = solve_lp(feasibility);
  if (probe.status != SolveStatus::Optimal) return probe;

  double lambda = num->eval(probe.assignment) / den->eval(probe.assignment);
  Solution last = probe;
  for (int iter = 0; iter < 100; ++iter) {
    AffineForm parametric;
    parametric.offset = num->offset - lambda * den->offset;
    parametric.coeffs = num->coeffs;
    for (const auto& [name, c] : den->coeffs) parametric.coeffs[name] -= lambda * c;
    for (auto it = parametric.coeffs.begin(); it != parametric.coeffs.end();)
      it = it->second == 0.0 ? parametric.coeffs.erase(it) : std::next(it);

    Model par = m;
    par.objective = parametric.to_expr();
    Solution xs = solve_lp(par);
    if (xs.status != SolveStatus::Optimal) return xs;

    const double n_val = num->eval(xs.assignment);
    const double d_val = den->eval(xs.assignment);
    if (!(d_val > 0.0))
      throw DenominatorNotPositive("dinkelbach hit a nonpositive denominator");
    const double residual = n_val - lambda * d_val;
    if (std::fabs(residual) <= 1e-10) {
      last = xs;
      last.objective = n_val / d_val;
      return last;
    }
    lambda = n_val / d_val;
    last = xs;
  }
  throw NoConvergence("dinkelbach did not converge within 100 iterations");
}

Solution oracle_solve(const Model& input) {
  Model m = normalize_model(input);
  invert_constraint_monotones(m);

  std::vector<std::string> binaries;
  for (const auto& v : m.vars)
    if (v.domain == VarDomain::Binary) binaries.push_back(v.name);
  if (binaries.size() > 12)
    throw OracleScaleExceeded("oracle: more than 12 binary variables");

  // objective-level transforms
  std::optional<MonoFn> obj_fn;
  bool fractional = false;
  Expr inner_objective = m.objective;
  if (m.objective.is(ExprKind::Mono)) {
    obj_fn = m.objective.mono_fn();
    inner_objective = m.objective.child(0);
  } else if (m.objective.is(ExprKind::Quot)) {
    fractional = true;
  }

  const long n_assignments = 1L << binaries.size();
  Solution best;
  best.status = SolveStatus::Infeasible;
  bool have_best = false;
  const Sense sense = m.sense;

  for (long mask = 0; mask < n_assignments; ++mask) {
    std::map<std::string, double> fix;
    for (size_t i = 0; i < binaries.size(); ++i)
      fix[binaries[i]] = (mask >> i) & 1 ? 1.0 : 0.0;

    // respect tightened binary bounds (e.g. fixed binaries)
    bool in_bounds = true;
    for (const auto& v : m.vars) {
      if (v.domain != VarDomain::Binary) continue;
      const double val = fix[v.name];
      if (val < v.lower - 1e-12 || val > v.upper + 1e-12) in_bounds = false;
    }
    if (!in_bounds) continue;

    Model fixed;
    fixed.sense = sense;
    fixed.params = m.params;
    for (const auto& v : m.vars) {
      if (v.domain == VarDomain::Binary) continue;
      fixed.vars.push_back(v);
    }
    if (fractional) {
      // keep the ratio shape: substitute into numerator and denominator
      fixed.objective = Expr::quot(normalize(substitute_vars(m.objective.child(0), fix)),
                                   normalize(substitute_vars(m.objective.child(1), fix)));
    } else {
      fixed.objective = normalize(substitute_vars(inner_objective, fix));
    }
    for (const auto& c : m.constraints)
      fixed.constraints.push_back({c.name, normalize(substitute_vars(c.lhs, fix)), c.rel,
                                   normalize(substitute_vars(c.rhs, fix))});

    // collect min/max/abs occurrences for this assignment
    std::vector<Occurrence> occs;
    {
      ExprLocus at;
      at.root = ExprLocus::Root::Objective;
      if (!fractional) collect(fixed.objective, at, &occs, !obj_fn.has_value());
      for (const auto& c : fixed.constraints) {
        at = {ExprLocus::Root::ConstraintLhs, c.name, {}};
        collect(c.lhs, at, &occs, false);
        at = {ExprLocus::Root::ConstraintRhs, c.name, {}};
        collect(c.rhs, at, &occs, false);
      }
    }

    long combos = 1;
    for (const auto& occ : occs) {
      combos *= occ.branch_count();
      if (combos * n_assignments > kCaseLimit)
        throw OracleScaleExceeded("oracle: too many branch combinations");
    }

    for (long combo = 0; combo < combos; ++combo) {
      Model branch = fixed;
      long rem = combo;
      for (const auto& occ : occs) {
        const int pick = static_cast<int>(rem % occ.branch_count());
        rem /= occ.branch_count();
        Expr replacement;
        if (occ.kind == ExprKind::Abs) {
          const Expr& t = occ.args[0];
          replacement = pick == 0 ? t : Expr::prod({Expr::constant(-1.0), t});
          branch.constraints.push_back({"_oracle_sign_" + std::to_string(branch.constraints.size()),
                                        t, pick == 0 ? Rel::Ge : Rel::Le, Expr::constant(0.0)});
        } else {
          replacement = occ.args[static_cast<size_t>(pick)];
          for (int j = 0; j < static_cast<int>(occ.args.size()); ++j) {
            if (j == pick) continue;
            branch.constraints.push_back(
                {"_oracle_dom_" + std::to_string(branch.constraints.size()),
                 occ.args[static_cast<size_t>(pick)],
                 occ.kind == ExprKind::Min ? Rel::Le : Rel::Ge,
                 occ.args[static_cast<size_t>(j)]});
          }
        }
        replace_in_model(branch, occ.path, replacement);
      }
      branch.objective = normalize(branch.objective);
      for (auto& c : branch.constraints) {
        c.lhs = normalize(c.lhs);
        c.rhs = normalize(c.rhs);
      }

      Solution sol;
      if (fractional) {
        if (branch.objective.is(ExprKind::Quot)) {
          sol = dinkelbach(branch);
        } else {
          sol = branch.has_integrality() ? solve_milp(branch) : solve_lp(branch);
        }
      } else {
        sol = branch.has_integrality() ? solve_milp(branch) : solve_lp(branch);
      }
      if (sol.status == SolveStatus::Unbounded) {
        Solution out;
        out.status = SolveStatus::Unbounded;
        return out;
      }
      if (sol.status != SolveStatus::Optimal) continue;

      double value = sol.objective;
      if (obj_fn) value = apply_fn(*obj_fn, value);
      if (!have_best || (sense == Sense::Minimize ? value < best.objective
                                                  : value > best.objective)) {
        best = sol;
        best.objective = value;
        for (const auto& [name, v] : fix) best.assignment[name] = v;
        have_best = true;
      }
    }
  }

  best.status = have_best ? SolveStatus::Optimal : SolveStatus::Infeasible;
  return best;
}

}  // namespace linform
