#pragma once

// Test-only reference solvers, independent of the simplex implementation
// they check.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "linform/affinity.hpp"
#include "linform/eval.hpp"
#include "linform/model.hpp"
#include "linform/solver.hpp"

namespace linform::testing {

// Enumerates every intersection of n constraint/bound hyperplanes, keeps the
// feasible ones and returns the best. Exact for bounded LPs at desk scale.
inline Solution vertex_enum_lp(const Model& m) {
  const int n = static_cast<int>(m.vars.size());
  struct Row {
    Eigen::VectorXd a;
    double b;
    Rel rel;
  };
  std::vector<Row> rows;
  auto coeffs_of = [&](const Expr& lhs, const Expr& rhs, Rel rel) {
    auto l = affine_form_of(lhs);
    auto r = affine_form_of(rhs);
    Row row;
    row.a = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      const std::string& name = m.vars[static_cast<size_t>(i)].name;
      double c = 0;
      if (l->coeffs.count(name)) c += l->coeffs.at(name);
      if (r->coeffs.count(name)) c -= r->coeffs.at(name);
      row.a(i) = c;
    }
    row.b = r->offset - l->offset;
    row.rel = rel;
    return row;
  };
  for (const auto& c : m.constraints) rows.push_back(coeffs_of(c.lhs, c.rhs, c.rel));
  for (int i = 0; i < n; ++i) {
    const VarDecl& v = m.vars[static_cast<size_t>(i)];
    if (std::isfinite(v.lower)) {
      Row row;
      row.a = Eigen::VectorXd::Zero(n);
      row.a(i) = 1;
      row.b = v.lower;
      row.rel = Rel::Ge;
      rows.push_back(row);
    }
    if (std::isfinite(v.upper)) {
      Row row;
      row.a = Eigen::VectorXd::Zero(n);
      row.a(i) = 1;
      row.b = v.upper;
      row.rel = Rel::Le;
      rows.push_back(row);
    }
  }

  auto obj = affine_form_of(m.objective);
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    auto it = obj->coeffs.find(m.vars[static_cast<size_t>(i)].name);
    if (it != obj->coeffs.end()) cost(i) = it->second;
  }

  const int total = static_cast<int>(rows.size());
  Solution best;
  best.status = SolveStatus::Infeasible;
  bool found = false;

  // iterate over all n-subsets of rows
  std::vector<int> idx(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
  if (total < n) return best;
  while (true) {
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
      A.row(i) = rows[static_cast<size_t>(idx[static_cast<size_t>(i)])].a.transpose();
      b(i) = rows[static_cast<size_t>(idx[static_cast<size_t>(i)])].b;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.isInvertible()) {
      const Eigen::VectorXd x = lu.solve(b);
      bool feasible = true;
      for (const auto& row : rows) {
        const double v = row.a.dot(x);
        if (row.rel == Rel::Le && v > row.b + 1e-7) feasible = false;
        if (row.rel == Rel::Ge && v < row.b - 1e-7) feasible = false;
        if (row.rel == Rel::Eq && std::fabs(v - row.b) > 1e-7) feasible = false;
      }
      if (feasible) {
        const double value = cost.dot(x) + obj->offset;
        const bool better = !found || (m.sense == Sense::Minimize ? value < best.objective
                                                                  : value > best.objective);
        if (better) {
          best.objective = value;
          best.assignment.clear();
          for (int i = 0; i < n; ++i)
            best.assignment[m.vars[static_cast<size_t>(i)].name] = x(i);
          best.status = SolveStatus::Optimal;
          found = true;
        }
      }
    }
    // next combination
    int i = n - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == total - n + i) --i;
    if (i < 0) break;
    ++idx[static_cast<size_t>(i)];
    for (int j = i + 1; j < n; ++j)
      idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
  return best;
}

// Exhaustive enumeration over all integer-domain assignments; the continuous
// remainder (if any) goes to the LP solver.
inline Solution exhaustive_milp(const Model& m) {
  std::vector<size_t> int_vars;
  for (size_t i = 0; i < m.vars.size(); ++i)
    if (m.vars[i].domain != VarDomain::Continuous) int_vars.push_back(i);

  std::vector<double> lows, highs;
  long cases = 1;
  for (size_t i : int_vars) {
    lows.push_back(std::ceil(m.vars[i].lower - 1e-9));
    highs.push_back(std::floor(m.vars[i].upper + 1e-9));
    cases *= static_cast<long>(highs.back() - lows.back() + 1);
  }

  Solution best;
  best.status = SolveStatus::Infeasible;
  bool found = false;
  std::vector<double> values(int_vars.size());
  for (long mask = 0; mask < cases; ++mask) {
    long rem = mask;
    for (size_t k = 0; k < int_vars.size(); ++k) {
      const long span = static_cast<long>(highs[k] - lows[k] + 1);
      values[k] = lows[k] + static_cast<double>(rem % span);
      rem /= span;
    }
    Model fixed = m;
    for (size_t k = 0; k < int_vars.size(); ++k) {
      fixed.vars[int_vars[k]].lower = values[k];
      fixed.vars[int_vars[k]].upper = values[k];
    }
    bool has_cont = false;
    for (const auto& v : fixed.vars)
      if (v.domain == VarDomain::Continuous) has_cont = true;

    Solution sol;
    if (has_cont) {
      sol = solve_lp(fixed);
      if (sol.status != SolveStatus::Optimal) continue;
    } else {
      sol.status = SolveStatus::Optimal;
      for (size_t k = 0; k < int_vars.size(); ++k)
        sol.assignment[m.vars[int_vars[k]].name] = values[k];
      if (max_violation(fixed, sol.assignment) > 1e-9) continue;
      sol.objective = evaluate_in(fixed, fixed.objective, sol.assignment);
    }
    const bool better = !found || (m.sense == Sense::Minimize ? sol.objective < best.objective
                                                              : sol.objective > best.objective);
    if (better) {
      best = sol;
      found = true;
    }
  }
  return best;
}

}  // namespace linform::testing
