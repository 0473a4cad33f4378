#include "linform/expr.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "linform/errors.hpp"

namespace linform {

struct Expr::Node {
  ExprKind kind = ExprKind::Const;
  double value = 0.0;
  std::string name;
  MonoFn fn = MonoFn::Exp;
  std::vector<Expr> kids;
};

namespace {

std::shared_ptr<const Expr::Node> make_node(Expr::Node n) {
  return std::make_shared<const Expr::Node>(std::move(n));
}

// 12 significant digits; round-trips all values the pipeline produces at the
// tolerances it promises.
std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

const char* mono_fn_name(MonoFn fn) {
  switch (fn) {
    case MonoFn::Exp: return "exp";
    case MonoFn::Log: return "log";
    case MonoFn::Sqrt: return "sqrt";
  }
  return "?";
}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(double value) {
  Node n;
  n.kind = ExprKind::Const;
  n.value = value == 0.0 ? 0.0 : value;  // canonicalize -0.0
  return Expr(make_node(std::move(n)));
}

Expr Expr::param(std::string name) {
  Node n;
  n.kind = ExprKind::ParamRef;
  n.name = std::move(name);
  return Expr(make_node(std::move(n)));
}

Expr Expr::var(std::string name) {
  Node n;
  n.kind = ExprKind::VarRef;
  n.name = std::move(name);
  return Expr(make_node(std::move(n)));
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return constant(0.0);
  if (terms.size() == 1) return terms[0];
  Node n;
  n.kind = ExprKind::Sum;
  n.kids = std::move(terms);
  return Expr(make_node(std::move(n)));
}

Expr Expr::prod(std::vector<Expr> factors) {
  if (factors.empty()) return constant(1.0);
  if (factors.size() == 1) return factors[0];
  Node n;
  n.kind = ExprKind::Prod;
  n.kids = std::move(factors);
  return Expr(make_node(std::move(n)));
}

Expr Expr::neg(Expr arg) {
  Node n;
  n.kind = ExprKind::Neg;
  n.kids.push_back(std::move(arg));
  return Expr(make_node(std::move(n)));
}

Expr Expr::abs(Expr arg) {
  Node n;
  n.kind = ExprKind::Abs;
  n.kids.push_back(std::move(arg));
  return Expr(make_node(std::move(n)));
}

Expr Expr::min_of(std::vector<Expr> args) {
  if (args.size() < 2) throw InvalidArgument("min requires at least 2 arguments");
  Node n;
  n.kind = ExprKind::Min;
  n.kids = std::move(args);
  return Expr(make_node(std::move(n)));
}

Expr Expr::max_of(std::vector<Expr> args) {
  if (args.size() < 2) throw InvalidArgument("max requires at least 2 arguments");
  Node n;
  n.kind = ExprKind::Max;
  n.kids = std::move(args);
  return Expr(make_node(std::move(n)));
}

Expr Expr::quot(Expr num, Expr den) {
  Node n;
  n.kind = ExprKind::Quot;
  n.kids.push_back(std::move(num));
  n.kids.push_back(std::move(den));
  return Expr(make_node(std::move(n)));
}

Expr Expr::mono(MonoFn fn, Expr arg) {
  Node n;
  n.kind = ExprKind::Mono;
  n.fn = fn;
  n.kids.push_back(std::move(arg));
  return Expr(make_node(std::move(n)));
}

ExprKind Expr::kind() const { return node_->kind; }

double Expr::const_value() const {
  if (node_->kind != ExprKind::Const) throw InvalidArgument("const_value on non-constant");
  return node_->value;
}

const std::string& Expr::name() const {
  if (node_->kind != ExprKind::VarRef && node_->kind != ExprKind::ParamRef)
    throw InvalidArgument("name on non-reference expression");
  return node_->name;
}

MonoFn Expr::mono_fn() const {
  if (node_->kind != ExprKind::Mono) throw InvalidArgument("mono_fn on non-Mono expression");
  return node_->fn;
}

int Expr::child_count() const { return static_cast<int>(node_->kids.size()); }

const Expr& Expr::child(int i) const {
  if (i < 0 || i >= child_count()) throw InvalidArgument("child index out of range");
  return node_->kids[static_cast<size_t>(i)];
}

const std::vector<Expr>& Expr::children() const { return node_->kids; }

Expr Expr::with_child(int i, Expr replacement) const {
  if (i < 0 || i >= child_count()) throw InvalidArgument("child index out of range");
  Node n;
  n.kind = node_->kind;
  n.value = node_->value;
  n.name = node_->name;
  n.fn = node_->fn;
  n.kids = node_->kids;
  n.kids[static_cast<size_t>(i)] = std::move(replacement);
  return Expr(make_node(std::move(n)));
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ExprKind::Const:
      return a.const_value() == b.const_value();
    case ExprKind::VarRef:
    case ExprKind::ParamRef:
      return a.name() == b.name();
    case ExprKind::Mono:
      if (a.mono_fn() != b.mono_fn()) return false;
      break;
    default:
      break;
  }
  if (a.child_count() != b.child_count()) return false;
  for (int i = 0; i < a.child_count(); ++i)
    if (!structurally_equal(a.child(i), b.child(i))) return false;
  return true;
}

namespace {

void key_rec(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case ExprKind::Const: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", e.const_value());
      out += buf;
      return;
    }
    case ExprKind::VarRef:
      out += "v:";
      out += e.name();
      return;
    case ExprKind::ParamRef:
      out += "p:";
      out += e.name();
      return;
    case ExprKind::Sum: out += "(+"; break;
    case ExprKind::Prod: out += "(*"; break;
    case ExprKind::Neg: out += "(neg"; break;
    case ExprKind::Abs: out += "(abs"; break;
    case ExprKind::Min: out += "(min"; break;
    case ExprKind::Max: out += "(max"; break;
    case ExprKind::Quot: out += "(/"; break;
    case ExprKind::Mono:
      out += "(";
      out += mono_fn_name(e.mono_fn());
      break;
  }
  for (const Expr& k : e.children()) {
    out += ' ';
    key_rec(k, out);
  }
  out += ')';
}

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Sum: return 1;
    case ExprKind::Prod:
    case ExprKind::Quot: return 2;
    case ExprKind::Neg: return 3;
    default: return 4;
  }
}

void print_rec(const Expr& e, std::string& out, int parent_prec) {
  const int prec = precedence(e.kind());
  const bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (e.kind()) {
    case ExprKind::Const:
      if (e.const_value() < 0) {
        out += '(';
        out += format_number(e.const_value());
        out += ')';
      } else {
        out += format_number(e.const_value());
      }
      break;
    case ExprKind::VarRef:
    case ExprKind::ParamRef:
      out += e.name();
      break;
    case ExprKind::Sum:
      for (int i = 0; i < e.child_count(); ++i) {
        if (i > 0) out += " + ";
        print_rec(e.child(i), out, prec);
      }
      break;
    case ExprKind::Prod:
      for (int i = 0; i < e.child_count(); ++i) {
        if (i > 0) out += "*";
        print_rec(e.child(i), out, prec + 1);
      }
      break;
    case ExprKind::Neg:
      out += "-";
      print_rec(e.child(0), out, prec + 1);
      break;
    case ExprKind::Quot:
      print_rec(e.child(0), out, prec + 1);
      out += "/";
      print_rec(e.child(1), out, prec + 1);
      break;
    case ExprKind::Abs:
    case ExprKind::Min:
    case ExprKind::Max:
    case ExprKind::Mono:
      out += e.kind() == ExprKind::Abs   ? "abs"
             : e.kind() == ExprKind::Min ? "min"
             : e.kind() == ExprKind::Max ? "max"
                                         : mono_fn_name(e.mono_fn());
      out += '(';
      for (int i = 0; i < e.child_count(); ++i) {
        if (i > 0) out += ", ";
        print_rec(e.child(i), out, 0);
      }
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string expr_key(const Expr& e) {
  std::string out;
  key_rec(e, out);
  return out;
}

std::string to_string(const Expr& e) {
  std::string out;
  print_rec(e, out, 0);
  return out;
}

const Expr& subexpr_at(const Expr& root, const std::vector<int>& steps) {
  const Expr* cur = &root;
  for (int s : steps) cur = &cur->child(s);
  return *cur;
}

Expr replace_at(const Expr& root, const std::vector<int>& steps, const Expr& replacement) {
  if (steps.empty()) return replacement;
  std::vector<int> rest(steps.begin() + 1, steps.end());
  return root.with_child(steps[0], replace_at(root.child(steps[0]), rest, replacement));
}

Expr operator+(Expr a, Expr b) { return Expr::sum({std::move(a), std::move(b)}); }
Expr operator-(Expr a, Expr b) { return Expr::sum({std::move(a), Expr::neg(std::move(b))}); }
Expr operator-(Expr a) { return Expr::neg(std::move(a)); }
Expr operator*(Expr a, Expr b) { return Expr::prod({std::move(a), std::move(b)}); }
Expr operator/(Expr a, Expr b) { return Expr::quot(std::move(a), std::move(b)); }
Expr operator*(double c, Expr e) { return Expr::prod({Expr::constant(c), std::move(e)}); }
Expr operator+(Expr a, double c) { return std::move(a) + Expr::constant(c); }
Expr operator+(double c, Expr e) { return Expr::constant(c) + std::move(e); }
Expr operator-(Expr a, double c) { return std::move(a) - Expr::constant(c); }
Expr operator-(double c, Expr e) { return Expr::constant(c) - std::move(e); }

}  // namespace linform
