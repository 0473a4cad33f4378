#pragma once

#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "linform/expr.hpp"

namespace linform {

enum class VarDomain { Continuous, Binary, Integer };
enum class Sense { Minimize, Maximize };
enum class Rel { Le, Ge, Eq };

const char* rel_name(Rel r);  // "<=", ">=", "="

struct VarDecl {
  std::string name;
  VarDomain domain = VarDomain::Continuous;
  double lower = 0.0;  // -inf allowed
  double upper = std::numeric_limits<double>::infinity();
};

struct ParamBinding {
  std::string name;
  double value = 0.0;
};

struct Constraint {
  std::string name;
  Expr lhs;
  Rel rel = Rel::Le;
  Expr rhs;
};

struct Model {
  std::vector<VarDecl> vars;
  std::vector<ParamBinding> params;
  Sense sense = Sense::Minimize;
  Expr objective;
  std::vector<Constraint> constraints;

  const VarDecl* find_var(std::string_view name) const;
  const ParamBinding* find_param(std::string_view name) const;
  const Constraint* find_constraint(std::string_view name) const;
  std::map<std::string, double> param_values() const;

  bool has_integrality() const;  // any binary or integer variable
  int binary_count() const;

  /// Throws InvalidArgument when a structural invariant is broken
  /// (duplicate names, unresolved references, bad bounds).
  void validate() const;
};

}  // namespace linform
