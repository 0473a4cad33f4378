#include "linform/model.hpp"

#include <cmath>
#include <set>

#include "linform/errors.hpp"

namespace linform {

const char* rel_name(Rel r) {
  switch (r) {
    case Rel::Le: return "<=";
    case Rel::Ge: return ">=";
    case Rel::Eq: return "=";
  }
  return "?";
}

const VarDecl* Model::find_var(std::string_view name) const {
  for (const auto& v : vars)
    if (v.name == name) return &v;
  return nullptr;
}

const ParamBinding* Model::find_param(std::string_view name) const {
  for (const auto& p : params)
    if (p.name == name) return &p;
  return nullptr;
}

const Constraint* Model::find_constraint(std::string_view name) const {
  for (const auto& c : constraints)
    if (c.name == name) return &c;
  return nullptr;
}

std::map<std::string, double> Model::param_values() const {
  std::map<std::string, double> out;
  for (const auto& p : params) out[p.name] = p.value;
  return out;
}

bool Model::has_integrality() const {
  for (const auto& v : vars)
    if (v.domain != VarDomain::Continuous) return true;
  return false;
}

int Model::binary_count() const {
  int n = 0;
  for (const auto& v : vars)
    if (v.domain == VarDomain::Binary) ++n;
  return n;
}

namespace {

void check_refs(const Model& m, const Expr& e) {
  switch (e.kind()) {
    case ExprKind::VarRef:
      if (!m.find_var(e.name())) throw InvalidArgument("unknown variable: " + e.name());
      break;
    case ExprKind::ParamRef:
      if (!m.find_param(e.name())) throw InvalidArgument("unknown parameter: " + e.name());
      break;
    default:
      for (const Expr& k : e.children()) check_refs(m, k);
  }
}

}  // namespace

void Model::validate() const {
  std::set<std::string> names;
  for (const auto& v : vars) {
    if (!names.insert(v.name).second)
      throw InvalidArgument("duplicate declaration: " + v.name);
    if (v.lower > v.upper)
      throw InvalidArgument("empty bounds on variable: " + v.name);
    if (v.domain == VarDomain::Binary && (v.lower < 0.0 || v.upper > 1.0))
      throw InvalidArgument("binary variable with bounds outside [0,1]: " + v.name);
    if (std::isnan(v.lower) || std::isnan(v.upper))
      throw InvalidArgument("NaN bound on variable: " + v.name);
  }
  for (const auto& p : params) {
    if (!names.insert(p.name).second)
      throw InvalidArgument("duplicate declaration: " + p.name);
    if (!std::isfinite(p.value))
      throw InvalidArgument("parameter value must be finite: " + p.name);
  }
  std::set<std::string> cnames;
  for (const auto& c : constraints) {
    if (!cnames.insert(c.name).second)
      throw InvalidArgument("duplicate constraint name: " + c.name);
  }
  check_refs(*this, objective);
  for (const auto& c : constraints) {
    check_refs(*this, c.lhs);
    check_refs(*this, c.rhs);
  }
}

}  // namespace linform
