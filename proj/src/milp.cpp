#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "linform/errors.hpp"
#include "linform/solver.hpp"

namespace linform {

namespace {

constexpr double kIntTol = 1e-6;
constexpr double kGap = 1e-9;
constexpr long kNodeLimit = 100000;

struct Node {
  std::vector<std::pair<size_t, std::pair<double, double>>> tightened;  // var index -> bounds
  double bound = 0.0;
  long order = 0;
};

struct NodeWorse {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // best bound first
    return a.order > b.order;
  }
};

Model with_bounds(const Model& base, const Node& node) {
  Model m = base;
  for (const auto& [idx, bounds] : node.tightened) {
    m.vars[idx].lower = bounds.first;
    m.vars[idx].upper = bounds.second;
  }
  return m;
}

bool integral(const Model& m, const Solution& sol, size_t* worst_var, double* worst_frac) {
  *worst_var = m.vars.size();
  double best_dist = -1.0;
  for (size_t i = 0; i < m.vars.size(); ++i) {
    if (m.vars[i].domain == VarDomain::Continuous) continue;
    auto it = sol.assignment.find(m.vars[i].name);
    if (it == sol.assignment.end()) continue;
    const double v = it->second;
    const double frac = v - std::floor(v);
    const double dist = std::min(frac, 1.0 - frac);
    if (dist <= kIntTol) continue;
    if (dist > best_dist) {
      best_dist = dist;
      *worst_var = i;
      *worst_frac = v;
    }
  }
  return *worst_var == m.vars.size();
}

// Fix integer variables to their rounded values and resolve the continuous
// part, giving a clean incumbent.
Solution polish(const Model& m, const Solution& sol) {
  Model fixed = m;
  for (auto& v : fixed.vars) {
    if (v.domain == VarDomain::Continuous) continue;
    auto it = sol.assignment.find(v.name);
    if (it == sol.assignment.end()) continue;
    const double r = std::round(it->second);
    v.lower = r;
    v.upper = r;
  }
  Solution polished = solve_lp(fixed);
  if (polished.status != SolveStatus::Optimal) return sol;
  for (auto& [name, value] : polished.assignment) {
    const VarDecl* v = m.find_var(name);
    if (v && v->domain != VarDomain::Continuous) value = std::round(value);
  }
  return polished;
}

}  // namespace

Solution solve_milp(const Model& m) {
  if (!m.has_integrality()) return solve_lp(m);
  const bool maximize = m.sense == Sense::Maximize;
  const double sign = maximize ? -1.0 : 1.0;  // compare in minimize space

  std::priority_queue<Node, std::vector<Node>, NodeWorse> open;
  long next_order = 0;

  Solution root = solve_lp(m);
  if (root.status == SolveStatus::Infeasible || root.status == SolveStatus::Unbounded ||
      root.status == SolveStatus::IterationLimit)
    return root;

  Solution incumbent;
  incumbent.status = SolveStatus::Infeasible;
  double best = std::numeric_limits<double>::infinity();

  Node root_node;
  root_node.bound = sign * root.objective;
  root_node.order = next_order++;
  open.push(std::move(root_node));

  long nodes = 0;
  while (!open.empty()) {
    if (++nodes > kNodeLimit) {
      Solution out = incumbent;
      out.status = SolveStatus::IterationLimit;
      return out;
    }
    Node node = open.top();
    open.pop();
    if (node.bound >= best - kGap) continue;

    Model sub = with_bounds(m, node);
    Solution relax = solve_lp(sub);
    if (relax.status == SolveStatus::Infeasible) continue;
    if (relax.status == SolveStatus::Unbounded) {
      Solution out;
      out.status = SolveStatus::Unbounded;
      return out;
    }
    if (relax.status == SolveStatus::IterationLimit) {
      Solution out = incumbent;
      out.status = SolveStatus::IterationLimit;
      return out;
    }
    const double bound = sign * relax.objective;
    if (bound >= best - kGap) continue;

    size_t branch_var = 0;
    double frac_value = 0.0;
    if (integral(sub, relax, &branch_var, &frac_value)) {
      Solution candidate = polish(sub, relax);
      const double value = sign * candidate.objective;
      if (value < best) {
        best = value;
        incumbent = candidate;
        incumbent.status = SolveStatus::Optimal;
      }
      continue;
    }

    const double lo_branch_hi = std::floor(frac_value);
    const double hi_branch_lo = std::ceil(frac_value);
    for (int side = 0; side < 2; ++side) {
      Node child;
      child.tightened = node.tightened;
      const VarDecl& v = sub.vars[branch_var];
      double lo = v.lower;
      double hi = v.upper;
      if (side == 0)
        hi = std::min(hi, lo_branch_hi);
      else
        lo = std::max(lo, hi_branch_lo);
      if (lo > hi) continue;
      child.tightened.emplace_back(branch_var, std::make_pair(lo, hi));
      child.bound = bound;
      child.order = next_order++;
      open.push(std::move(child));
    }
  }
  return incumbent;
}

}  // namespace linform
