#include "linform/detector.hpp"

#include <algorithm>

#include "json.hpp"
#include "linform/affinity.hpp"
#include "linform/errors.hpp"

namespace linform {

namespace {


class Scanner {
 public:
  explicit Scanner(const Model& m) : m_(m) {}

  std::vector<PatternInstance> run() {
    ExprLocus at;
    at.root = ExprLocus::Root::Objective;
    visit(m_.objective, at);
    for (const auto& c : m_.constraints) {
      at = {ExprLocus::Root::ConstraintLhs, c.name, {}};
      visit(c.lhs, at);
      at = {ExprLocus::Root::ConstraintRhs, c.name, {}};
      visit(c.rhs, at);
    }
    for (auto& inst : out_) inst.polarity = polarity_of(inst, m_);
    return std::move(out_);
  }

 private:
  [[noreturn]] void unsupported(const ExprLocus& at, const std::string& why) {
    throw UnsupportedNonlinearity(why + " at " + locus_to_string(at, m_));
  }

  bool is_binary_varref(const Expr& e) const {
    if (!e.is(ExprKind::VarRef)) return false;
    const VarDecl* v = m_.find_var(e.name());
    return v && v->domain == VarDomain::Binary;
  }

  void emit(PatternKind kind, const ExprLocus& at, std::vector<Expr> args) {
    PatternInstance inst;
    inst.kind = kind;
    inst.path = at;
    inst.args = std::move(args);
    out_.push_back(std::move(inst));
  }

  void visit(const Expr& e, ExprLocus& at) {
    switch (e.kind()) {
      case ExprKind::Const:
      case ExprKind::VarRef:
        return;
      case ExprKind::ParamRef:
        throw InvalidArgument("detect_patterns requires a normalized model (dangling parameter " +
                              e.name() + ")");
      case ExprKind::Neg:
      case ExprKind::Sum:
        for (int i = 0; i < e.child_count(); ++i) {
          at.steps.push_back(i);
          visit(e.child(i), at);
          at.steps.pop_back();
        }
        return;
      case ExprKind::Prod:
        visit_prod(e, at);
        return;
      case ExprKind::Abs: {
        if (!affine_form_of(e.child(0)))
          unsupported(at, "abs of a nonlinear argument");
        emit(PatternKind::Abs, at, {e.child(0)});
        return;
      }
      case ExprKind::Min:
      case ExprKind::Max: {
        for (const Expr& a : e.children())
          if (!affine_form_of(a))
            unsupported(at, std::string(e.is(ExprKind::Min) ? "min" : "max") +
                                " with a nonlinear argument");
        emit(e.is(ExprKind::Min) ? PatternKind::Min : PatternKind::Max, at, e.children());
        return;
      }
      case ExprKind::Quot: {
        if (!affine_form_of(e.child(0)) || !affine_form_of(e.child(1)))
          unsupported(at, "fractional term with a nonlinear numerator or denominator");
        const Interval den = interval_of(e.child(1), m_);
        if (!(den.lo > 0.0))
          unsupported(at, "cannot prove the denominator strictly positive from bounds");
        emit(PatternKind::LinearFractional, at, {e.child(0), e.child(1)});
        return;
      }
      case ExprKind::Mono: {
        if (!at.steps.empty())
          unsupported(at, "monotone transform not covering a whole objective or constraint side");
        if (!affine_form_of(e.child(0)))
          unsupported(at, "monotone transform of a nonlinear argument");
        const Interval arg = interval_of(e.child(0), m_);
        if (e.mono_fn() == MonoFn::Log && !(arg.lo > 0.0))
          unsupported(at, "log argument not provably positive");
        if (e.mono_fn() == MonoFn::Sqrt && !(arg.lo >= 0.0))
          unsupported(at, "sqrt argument not provably nonnegative");
        if (at.root != ExprLocus::Root::Objective) {
          const Constraint* c = m_.find_constraint(at.constraint);
          const Expr& other = at.root == ExprLocus::Root::ConstraintLhs ? c->rhs : c->lhs;
          auto other_form = affine_form_of(other);
          if (!other_form || !other_form->coeffs.empty())
            unsupported(at, "monotone constraint side needs a constant on the other side");
        }
        emit(PatternKind::Monotone, at, {e.child(0)});
        return;
      }
    }
  }

  void visit_prod(const Expr& e, ExprLocus& at) {
    std::vector<int> var_factors;      // affine with variables
    std::vector<int> nonlinear_factors;
    for (int i = 0; i < e.child_count(); ++i) {
      auto form = affine_form_of(e.child(i));
      if (!form)
        nonlinear_factors.push_back(i);
      else if (!form->coeffs.empty())
        var_factors.push_back(i);
    }
    if (!nonlinear_factors.empty()) {
      if (nonlinear_factors.size() == 1 && var_factors.empty()) {
        const int i = nonlinear_factors.front();
        at.steps.push_back(i);
        visit(e.child(i), at);
        at.steps.pop_back();
        return;
      }
      unsupported(at, "nonlinear factor inside a product");
    }
    if (var_factors.size() <= 1) return;  // linear monomial
    if (var_factors.size() >= 3)
      unsupported(at, "product of three or more variable factors");

    const Expr& f1 = e.child(var_factors[0]);
    const Expr& f2 = e.child(var_factors[1]);
    const bool b1 = is_binary_varref(f1);
    const bool b2 = is_binary_varref(f2);
    if (!b1 && !b2)
      unsupported(at, "product of two continuous expressions (no exact linearization)");
    if (b1 && b2) {
      std::vector<Expr> args{f1, f2};
      if (expr_key(args[1]) < expr_key(args[0])) std::swap(args[0], args[1]);
      emit(PatternKind::Bilinear, at, std::move(args));
      return;
    }
    const Expr& bin = b1 ? f1 : f2;
    const Expr& other = b1 ? f2 : f1;
    if (!interval_of(other, m_).is_finite())
      unsupported(at, "unbounded continuous factor in a binary product");
    emit(PatternKind::Bilinear, at, {bin, other});
  }

  const Model& m_;
  std::vector<PatternInstance> out_;
};

// Product of constant coefficients from the root expression down to the
// occurrence; sums are neutral, defensive Neg flips the sign.
double path_coefficient(const ExprLocus& at, const Model& m) {
  const Expr* cur = &locus_root(at, m);
  double coeff = 1.0;
  for (int s : at.steps) {
    if (cur->is(ExprKind::Prod)) {
      for (int i = 0; i < cur->child_count(); ++i) {
        if (i == s) continue;
        if (cur->child(i).is(ExprKind::Const)) coeff *= cur->child(i).const_value();
      }
    } else if (cur->is(ExprKind::Neg)) {
      coeff = -coeff;
    }
    cur = &cur->child(s);
  }
  return coeff;
}

enum class Pressure { Down, Up, Pinned };

Pressure pressure_of(const PatternInstance& inst, const Model& m) {
  const double coeff = path_coefficient(inst.path, m);
  if (inst.path.root == ExprLocus::Root::Objective) {
    const double eff = m.sense == Sense::Minimize ? coeff : -coeff;
    return eff > 0.0 ? Pressure::Down : Pressure::Up;
  }
  const Constraint* c = m.find_constraint(inst.path.constraint);
  if (!c) throw InvalidArgument("instance path refers to unknown constraint");
  const bool on_lhs = inst.path.root == ExprLocus::Root::ConstraintLhs;
  const double side_coeff = on_lhs ? coeff : -coeff;  // as if moved to the lhs
  if (c->rel == Rel::Eq) return Pressure::Pinned;
  if (c->rel == Rel::Le) return side_coeff > 0.0 ? Pressure::Down : Pressure::Up;
  return side_coeff > 0.0 ? Pressure::Up : Pressure::Down;
}

}  // namespace

const char* kind_name(PatternKind k) {
  switch (k) {
    case PatternKind::Bilinear: return "bilinear";
    case PatternKind::Min: return "min";
    case PatternKind::Max: return "max";
    case PatternKind::Abs: return "abs";
    case PatternKind::LinearFractional: return "linear_fractional";
    case PatternKind::Monotone: return "monotone";
  }
  return "?";
}

PatternKind kind_from_name(const std::string& name) {
  if (name == "bilinear") return PatternKind::Bilinear;
  if (name == "min") return PatternKind::Min;
  if (name == "max") return PatternKind::Max;
  if (name == "abs") return PatternKind::Abs;
  if (name == "linear_fractional") return PatternKind::LinearFractional;
  if (name == "monotone") return PatternKind::Monotone;
  throw InvalidArgument("unknown pattern kind: " + name);
}

const char* polarity_name(Polarity p) {
  switch (p) {
    case Polarity::Benign: return "benign";
    case Polarity::Adverse: return "adverse";
    case Polarity::ConstraintSplit: return "constraint_split";
  }
  return "?";
}

std::vector<PatternInstance> detect_patterns(const Model& m) {
  return Scanner(m).run();
}

Polarity polarity_of(const PatternInstance& inst, const Model& m) {
  switch (inst.kind) {
    case PatternKind::Bilinear:
    case PatternKind::LinearFractional:
    case PatternKind::Monotone:
      return Polarity::Benign;  // their encodings hold under any pressure
    default:
      break;
  }
  const bool in_constraint = inst.path.root != ExprLocus::Root::Objective;
  if (in_constraint && inst.path.steps.empty()) {
    const Constraint* c = m.find_constraint(inst.path.constraint);
    const bool on_lhs = inst.path.root == ExprLocus::Root::ConstraintLhs;
    if (inst.kind == PatternKind::Max &&
        ((on_lhs && c->rel == Rel::Le) || (!on_lhs && c->rel == Rel::Ge)))
      return Polarity::ConstraintSplit;
    if (inst.kind == PatternKind::Min &&
        ((on_lhs && c->rel == Rel::Ge) || (!on_lhs && c->rel == Rel::Le)))
      return Polarity::ConstraintSplit;
  }
  if (inst.kind == PatternKind::Abs && in_constraint) {
    const Constraint* c = m.find_constraint(inst.path.constraint);
    if (c->rel == Rel::Eq) return Polarity::Benign;  // routed to the +/- parts identity
  }
  const Pressure p = pressure_of(inst, m);
  if (p == Pressure::Pinned) return Polarity::Adverse;
  switch (inst.kind) {
    case PatternKind::Max: return p == Pressure::Down ? Polarity::Benign : Polarity::Adverse;
    case PatternKind::Min: return p == Pressure::Up ? Polarity::Benign : Polarity::Adverse;
    case PatternKind::Abs: return p == Pressure::Down ? Polarity::Benign : Polarity::Adverse;
    default: return Polarity::Benign;
  }
}

std::set<PatternKind> applicable_kinds(const Model& m) {
  std::set<PatternKind> kinds;
  for (const auto& inst : detect_patterns(m)) kinds.insert(inst.kind);
  return kinds;
}

std::string detection_json(const Model& m) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& inst : detect_patterns(m)) {
    nlohmann::ordered_json item;
    item["kind"] = kind_name(inst.kind);
    item["path"] = locus_to_string(inst.path, m);
    item["polarity"] = polarity_name(inst.polarity);
    arr.push_back(std::move(item));
  }
  return arr.dump(2) + "\n";
}

}  // namespace linform
