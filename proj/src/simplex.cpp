#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "linform/affinity.hpp"
#include "linform/errors.hpp"
#include "linform/solver.hpp"

namespace linform {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration_limit";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr long kPivotLimit = 100000;
constexpr long kDegenerateLimit = 1000;

// Original variable -> nonnegative simplex column(s).
struct VarMap {
  enum class Kind { Shifted, Mirrored, Split } kind = Kind::Shifted;
  int col = -1;       // primary column
  int col_neg = -1;   // negative part for Split
  double offset = 0;  // x = offset + s (Shifted) or x = offset - s (Mirrored)
};

struct StandardForm {
  Eigen::MatrixXd rows;   // m x n
  Eigen::VectorXd rhs;    // all equalities after slack insertion
  Eigen::VectorXd cost;   // minimize
  int n = 0;
  std::vector<VarMap> vmap;
  std::vector<std::string> names;  // original variable names, by index
  double cost_offset = 0;
  bool maximize = false;
};

StandardForm build_standard_form(const Model& m) {
  StandardForm sf;
  sf.maximize = m.sense == Sense::Maximize;

  auto obj = affine_form_of(m.objective);
  if (!obj) throw NotLinear("objective", "nonlinear objective in LP solve");

  struct Row {
    AffineForm form;
    Rel rel;
    double rhs;
  };
  std::vector<Row> rows;
  for (const auto& c : m.constraints) {
    auto l = affine_form_of(c.lhs);
    auto r = affine_form_of(c.rhs);
    if (!l || !r) throw NotLinear("constraint[" + c.name + "]", "nonlinear constraint in LP solve");
    AffineForm row;
    row.coeffs = l->coeffs;
    for (const auto& [name, coef] : r->coeffs) row.coeffs[name] -= coef;
    rows.push_back({std::move(row), c.rel, r->offset - l->offset});
  }

  // variable transforms to s >= 0 columns; finite upper bounds become rows
  int next_col = 0;
  sf.vmap.resize(m.vars.size());
  sf.names.reserve(m.vars.size());
  std::vector<std::pair<int, double>> upper_rows;  // column, bound on s
  for (size_t i = 0; i < m.vars.size(); ++i) {
    const VarDecl& v = m.vars[i];
    sf.names.push_back(v.name);
    VarMap& vm = sf.vmap[i];
    if (std::isfinite(v.lower)) {
      vm.kind = VarMap::Kind::Shifted;
      vm.offset = v.lower;
      vm.col = next_col++;
      if (std::isfinite(v.upper)) upper_rows.push_back({vm.col, v.upper - v.lower});
    } else if (std::isfinite(v.upper)) {
      vm.kind = VarMap::Kind::Mirrored;
      vm.offset = v.upper;
      vm.col = next_col++;
    } else {
      vm.kind = VarMap::Kind::Split;
      vm.col = next_col++;
      vm.col_neg = next_col++;
    }
  }
  const int n_struct = next_col;
  const int m_rows = static_cast<int>(rows.size() + upper_rows.size());
  int n_slack = 0;
  for (const auto& r : rows)
    if (r.rel != Rel::Eq) ++n_slack;
  n_slack += static_cast<int>(upper_rows.size());
  sf.n = n_struct + n_slack;

  sf.rows = Eigen::MatrixXd::Zero(m_rows, sf.n);
  sf.rhs = Eigen::VectorXd::Zero(m_rows);
  sf.cost = Eigen::VectorXd::Zero(sf.n);

  auto col_value = [&](const std::string& name) -> const VarMap* {
    for (size_t i = 0; i < m.vars.size(); ++i)
      if (m.vars[i].name == name) return &sf.vmap[i];
    return nullptr;
  };

  int row_i = 0;
  int slack = n_struct;
  for (const auto& r : rows) {
    double b = r.rhs;
    for (const auto& [name, c] : r.form.coeffs) {
      const VarMap* vm = col_value(name);
      if (!vm) throw UnboundSymbol(name);
      switch (vm->kind) {
        case VarMap::Kind::Shifted:
          sf.rows(row_i, vm->col) += c;
          b -= c * vm->offset;
          break;
        case VarMap::Kind::Mirrored:
          sf.rows(row_i, vm->col) -= c;
          b -= c * vm->offset;
          break;
        case VarMap::Kind::Split:
          sf.rows(row_i, vm->col) += c;
          sf.rows(row_i, vm->col_neg) -= c;
          break;
      }
    }
    if (r.rel == Rel::Le) sf.rows(row_i, slack++) = 1.0;
    if (r.rel == Rel::Ge) sf.rows(row_i, slack++) = -1.0;
    sf.rhs(row_i) = b;
    ++row_i;
  }
  for (const auto& [col, bound] : upper_rows) {
    sf.rows(row_i, col) = 1.0;
    sf.rows(row_i, slack++) = 1.0;
    sf.rhs(row_i) = bound;
    ++row_i;
  }

  const double sign = sf.maximize ? -1.0 : 1.0;
  sf.cost_offset = obj->offset;
  for (const auto& [name, c] : obj->coeffs) {
    const VarMap* vm = col_value(name);
    if (!vm) throw UnboundSymbol(name);
    switch (vm->kind) {
      case VarMap::Kind::Shifted:
        sf.cost(vm->col) += sign * c;
        sf.cost_offset += c * vm->offset;
        break;
      case VarMap::Kind::Mirrored:
        sf.cost(vm->col) -= sign * c;
        sf.cost_offset += c * vm->offset;
        break;
      case VarMap::Kind::Split:
        sf.cost(vm->col) += sign * c;
        sf.cost(vm->col_neg) -= sign * c;
        break;
    }
  }
  return sf;
}

struct SimplexOutcome {
  SolveStatus status = SolveStatus::Optimal;
  Eigen::VectorXd x;       // length n, values of all columns
  double objective = 0.0;  // in internal minimize space, without offset
};

class DenseSimplex {
 public:
  DenseSimplex(Eigen::MatrixXd A, Eigen::VectorXd b, Eigen::VectorXd cost)
      : A_(std::move(A)), b_(std::move(b)), cost_(std::move(cost)),
        m_(static_cast<int>(A_.rows())), n_(static_cast<int>(A_.cols())) {}

  SimplexOutcome run() {
    // make rhs nonnegative, then give every row an artificial basis column
    for (int i = 0; i < m_; ++i) {
      if (b_(i) < 0) {
        A_.row(i) = -A_.row(i);
        b_(i) = -b_(i);
      }
    }
    T_.resize(m_ + 1, n_ + m_ + 1);
    T_.setZero();
    T_.block(0, 0, m_, n_) = A_;
    T_.block(0, n_, m_, m_) = Eigen::MatrixXd::Identity(m_, m_);
    T_.block(0, n_ + m_, m_, 1) = b_;
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;

    // phase 1: minimize the artificial sum
    T_.row(m_).setZero();
    for (int j = 0; j < n_ + m_; ++j) {
      double c = j >= n_ ? 1.0 : 0.0;
      T_(m_, j) = c;
    }
    T_(m_, n_ + m_) = 0.0;
    price_out();
    SolveStatus st = iterate(/*phase1=*/true);
    if (st != SolveStatus::Optimal) return {st, {}, 0.0};
    if (-T_(m_, n_ + m_) > kFeasTol) return {SolveStatus::Infeasible, {}, 0.0};
    drive_out_artificials();

    // phase 2: true costs restricted to structural columns
    T_.row(m_).setZero();
    for (int j = 0; j < n_; ++j) T_(m_, j) = cost_(j);
    price_out();
    st = iterate(/*phase1=*/false);
    if (st != SolveStatus::Optimal) return {st, {}, 0.0};

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) x(basis_[i]) = T_(i, n_ + m_);
    return {SolveStatus::Optimal, std::move(x), -T_(m_, n_ + m_)};
  }

 private:
  void price_out() {
    for (int i = 0; i < m_; ++i) {
      const double c = T_(m_, basis_[i]);
      if (c != 0.0) T_.row(m_) -= c * T_.row(i);
    }
  }

  void pivot(int row, int col) {
    T_.row(row) /= T_(row, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = T_(i, col);
      if (f != 0.0) T_.row(i) -= f * T_.row(row);
    }
    basis_[row] = col;
  }

  SolveStatus iterate(bool phase1) {
    const int cols = n_ + m_;
    long degenerate_streak = 0;
    bool bland = false;
    while (true) {
      if (++pivots_ > kPivotLimit) return SolveStatus::IterationLimit;
      int entering = -1;
      if (!bland) {
        double best = -kPivotTol;
        for (int j = 0; j < cols; ++j) {
          if (!phase1 && j >= n_) continue;  // artificials stay out in phase 2
          if (T_(m_, j) < best) {
            best = T_(m_, j);
            entering = j;
          }
        }
      } else {
        for (int j = 0; j < cols; ++j) {
          if (!phase1 && j >= n_) continue;
          if (T_(m_, j) < -kPivotTol) {
            entering = j;
            break;
          }
        }
      }
      if (entering < 0) return SolveStatus::Optimal;

      int leaving = -1;
      double best_ratio = kInf;
      for (int i = 0; i < m_; ++i) {
        const double a = T_(i, entering);
        if (a <= kPivotTol) continue;
        const double ratio = T_(i, n_ + m_) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && leaving >= 0 && basis_[i] < basis_[leaving])) {
          best_ratio = ratio;
          leaving = i;
        }
      }
      if (leaving < 0) return SolveStatus::Unbounded;

      const double before = T_(m_, n_ + m_);
      pivot(leaving, entering);
      if (std::fabs(T_(m_, n_ + m_) - before) < 1e-12) {
        if (++degenerate_streak > kDegenerateLimit) bland = true;
      } else {
        degenerate_streak = 0;
      }
    }
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int col = -1;
      for (int j = 0; j < n_; ++j) {
        if (std::fabs(T_(i, j)) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        // redundant row; neutralize it so the artificial stays at zero
        T_.row(i).setZero();
        T_(i, basis_[i]) = 1.0;
      }
    }
  }

  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  Eigen::VectorXd cost_;
  int m_ = 0;
  int n_ = 0;
  Eigen::MatrixXd T_;
  std::vector<int> basis_;
  long pivots_ = 0;
};

}  // namespace

Solution solve_lp(const Model& m) {
  StandardForm sf = build_standard_form(m);
  DenseSimplex simplex(sf.rows, sf.rhs, sf.cost);
  SimplexOutcome out = simplex.run();

  Solution sol;
  sol.status = out.status;
  if (out.status != SolveStatus::Optimal) return sol;

  for (size_t i = 0; i < sf.vmap.size(); ++i) {
    const VarMap& vm = sf.vmap[i];
    double value = 0;
    switch (vm.kind) {
      case VarMap::Kind::Shifted: value = vm.offset + out.x(vm.col); break;
      case VarMap::Kind::Mirrored: value = vm.offset - out.x(vm.col); break;
      case VarMap::Kind::Split: value = out.x(vm.col) - out.x(vm.col_neg); break;
    }
    sol.assignment[sf.names[i]] = value;
  }
  // recompute from the assignment; the tableau value carries pivot noise
  auto obj = affine_form_of(m.objective);
  sol.objective = obj->eval(sol.assignment);
  return sol;
}

}  // namespace linform
