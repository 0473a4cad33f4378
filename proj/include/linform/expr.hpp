#pragma once

#include <memory>
#include <string>
#include <vector>

namespace linform {

enum class ExprKind { Const, ParamRef, VarRef, Sum, Prod, Neg, Abs, Min, Max, Quot, Mono };

enum class MonoFn { Exp, Log, Sqrt };

const char* mono_fn_name(MonoFn fn);

/// Immutable expression tree with value semantics. Copying an Expr copies a
/// handle; nodes are never mutated after construction, so sharing subtrees
/// between expressions and across threads is safe.
class Expr {
 public:
  Expr();  // Const(0)

  static Expr constant(double value);
  static Expr param(std::string name);
  static Expr var(std::string name);
  static Expr sum(std::vector<Expr> terms);     // 0 terms -> 0, 1 term -> the term
  static Expr prod(std::vector<Expr> factors);  // 0 factors -> 1, 1 factor -> the factor
  static Expr neg(Expr arg);
  static Expr abs(Expr arg);
  static Expr min_of(std::vector<Expr> args);  // at least 2 args
  static Expr max_of(std::vector<Expr> args);  // at least 2 args
  static Expr quot(Expr num, Expr den);
  static Expr mono(MonoFn fn, Expr arg);

  ExprKind kind() const;
  bool is(ExprKind k) const { return kind() == k; }

  double const_value() const;       // Const only
  const std::string& name() const;  // VarRef / ParamRef only
  MonoFn mono_fn() const;           // Mono only

  int child_count() const;
  const Expr& child(int i) const;
  const std::vector<Expr>& children() const;

  /// Rebuild this node with one child swapped out.
  Expr with_child(int i, Expr replacement) const;

  struct Node;  // implementation detail, defined in expr.cpp

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  friend bool structurally_equal(const Expr& a, const Expr& b);
  std::shared_ptr<const Node> node_;
};

bool structurally_equal(const Expr& a, const Expr& b);

/// Canonical key usable as a map key; equal keys iff structurally equal.
std::string expr_key(const Expr& e);

/// Infix rendering, parseable by the model parser.
std::string to_string(const Expr& e);

/// Replace the node at `steps` (child-index chain from the root).
Expr replace_at(const Expr& root, const std::vector<int>& steps, const Expr& replacement);

/// The node at `steps`.
const Expr& subexpr_at(const Expr& root, const std::vector<int>& steps);

// Builder sugar, mostly for tests and the model generator.
Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator-(Expr a);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator*(double c, Expr e);
Expr operator+(Expr a, double c);
Expr operator+(double c, Expr e);
Expr operator-(Expr a, double c);
Expr operator-(double c, Expr e);

}  // namespace linform
