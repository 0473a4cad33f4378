#include <cmath>
#include <cstdio>

#include "linform/affinity.hpp"
#include "linform/errors.hpp"
#include "linform/locus.hpp"
#include "linform/lp_format.hpp"

namespace linform {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

bool is_pattern_kind(ExprKind k) {
  return k == ExprKind::Abs || k == ExprKind::Min || k == ExprKind::Max ||
         k == ExprKind::Quot || k == ExprKind::Mono;
}

int var_factor_count(const Expr& e) {
  int n = 0;
  for (const Expr& k : e.children()) {
    auto f = affine_form_of(k);
    if (!f || !f->coeffs.empty()) ++n;
  }
  return n;
}

bool find_nonaffine(const Expr& e, std::vector<int>& steps) {
  if (is_pattern_kind(e.kind())) return true;
  if (e.is(ExprKind::Prod) && var_factor_count(e) >= 2) return true;
  for (int i = 0; i < e.child_count(); ++i) {
    if (affine_form_of(e.child(i))) continue;
    steps.push_back(i);
    if (find_nonaffine(e.child(i), steps)) return true;
    steps.pop_back();
  }
  return false;
}

AffineForm require_affine(const Expr& e, const Model& m, ExprLocus at) {
  auto form = affine_form_of(e);
  if (form) return *form;
  find_nonaffine(e, at.steps);
  throw NotLinear(locus_to_string(at, m), to_string(locus_expr(at, m)));
}

// One objective/constraint row: "c1 x1 + c2 x2" in declaration order.
std::string row_terms(const AffineForm& form, const Model& m, bool* any) {
  std::string out;
  *any = false;
  for (const auto& v : m.vars) {
    auto it = form.coeffs.find(v.name);
    if (it == form.coeffs.end()) continue;
    const double c = it->second;
    if (!*any) {
      out += c < 0 ? "- " : "";
      out += num(std::fabs(c)) + " " + v.name;
      *any = true;
    } else {
      out += c < 0 ? " - " : " + ";
      out += num(std::fabs(c)) + " " + v.name;
    }
  }
  return out;
}

}  // namespace

std::string emit_lp(const Model& m) {
  const AffineForm obj = require_affine(m.objective, m, {ExprLocus::Root::Objective, "", {}});
  std::vector<std::pair<std::string, AffineForm>> rows;
  std::vector<Rel> rels;
  std::vector<double> rhs;
  for (const auto& c : m.constraints) {
    AffineForm l = require_affine(c.lhs, m, {ExprLocus::Root::ConstraintLhs, c.name, {}});
    AffineForm r = require_affine(c.rhs, m, {ExprLocus::Root::ConstraintRhs, c.name, {}});
    AffineForm row;
    row.coeffs = l.coeffs;
    for (const auto& [name, coef] : r.coeffs) row.coeffs[name] -= coef;
    for (auto it = row.coeffs.begin(); it != row.coeffs.end();)
      it = it->second == 0.0 ? row.coeffs.erase(it) : std::next(it);
    rows.emplace_back(c.name, std::move(row));
    rels.push_back(c.rel);
    rhs.push_back(r.offset - l.offset);
  }

  std::string out;
  out += m.sense == Sense::Minimize ? "Minimize\n" : "Maximize\n";
  bool any = false;
  std::string terms = row_terms(obj, m, &any);
  out += " obj: ";
  if (any) {
    out += terms;
    if (obj.offset != 0.0) {
      out += obj.offset < 0 ? " - " : " + ";
      out += num(std::fabs(obj.offset));
    }
  } else if (!m.vars.empty()) {
    out += "0 " + m.vars.front().name;
    if (obj.offset != 0.0) {
      out += obj.offset < 0 ? " - " : " + ";
      out += num(std::fabs(obj.offset));
    }
  } else {
    out += num(obj.offset);
  }
  out += "\nSubject To\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    out += " " + rows[i].first + ": ";
    bool row_any = false;
    std::string t = row_terms(rows[i].second, m, &row_any);
    if (row_any)
      out += t;
    else if (!m.vars.empty())
      out += "0 " + m.vars.front().name;
    else
      out += "0";
    out += rels[i] == Rel::Le ? " <= " : rels[i] == Rel::Ge ? " >= " : " = ";
    out += num(rhs[i]);
    out += '\n';
  }

  out += "Bounds\n";
  for (const auto& v : m.vars) {
    if (v.domain == VarDomain::Binary && v.lower == 0.0 && v.upper == 1.0) continue;
    if (v.lower == 0.0 && v.upper == kInf) continue;
    if (v.lower == -kInf && v.upper == kInf) {
      out += " " + v.name + " free\n";
    } else if (v.lower == -kInf) {
      out += " -inf <= " + v.name + " <= " + num(v.upper) + "\n";
    } else if (v.upper == kInf) {
      out += " " + v.name + " >= " + num(v.lower) + "\n";
    } else {
      out += " " + num(v.lower) + " <= " + v.name + " <= " + num(v.upper) + "\n";
    }
  }

  std::string binaries;
  std::string generals;
  for (const auto& v : m.vars) {
    if (v.domain == VarDomain::Binary) binaries += " " + v.name;
    if (v.domain == VarDomain::Integer) generals += " " + v.name;
  }
  if (!binaries.empty()) out += "Binary\n" + binaries + "\n";
  if (!generals.empty()) out += "General\n" + generals + "\n";
  out += "End\n";
  return out;
}

}  // namespace linform
