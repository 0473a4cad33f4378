#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "linform/affinity.hpp"
#include "linform/errors.hpp"
#include "linform/lp_format.hpp"

namespace linform {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_number_tok(const std::string& t) {
  if (t.empty()) return false;
  char* end = nullptr;
  std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

double to_number(const std::string& t) {
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) throw Error("lp: malformed number: " + t);
  return v;
}

bool is_inf_tok(const std::string& t) {
  const std::string w = lower(t);
  return w == "inf" || w == "infinity";
}

// words; ':', '+', '-' and relations become their own tokens
std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\\') {
      flush();
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
      continue;
    }
    if (c == ':' || c == '+') {
      flush();
      out.push_back(std::string(1, c));
      continue;
    }
    if (c == '-') {
      // exponent minus stays inside the number token
      if (!cur.empty() && (cur.back() == 'e' || cur.back() == 'E') &&
          is_number_tok(cur.substr(0, cur.size() - 1))) {
        cur += c;
        continue;
      }
      flush();
      out.push_back("-");
      continue;
    }
    if (c == '<' || c == '>' || c == '=') {
      flush();
      std::string rel(1, c);
      if (i + 1 < text.size() && text[i + 1] == '=') {
        rel += '=';
        ++i;
      }
      out.push_back(rel);
      continue;
    }
    cur += c;
  }
  flush();
  return out;
}

struct Region {
  std::string section;  // "minimize", "maximize", "subject to", "bounds", "binary", "general"
  std::vector<std::string> toks;
};

std::vector<Region> split_regions(const std::vector<std::string>& toks) {
  std::vector<Region> regions;
  size_t i = 0;
  auto section_at = [&](size_t pos, std::string* name, size_t* skip) {
    if (pos >= toks.size()) return false;
    const std::string w = lower(toks[pos]);
    *skip = 1;
    if (w == "minimize" || w == "maximize" || w == "bounds" || w == "end") {
      *name = w;
      return true;
    }
    if (w == "binary" || w == "binaries") {
      *name = "binary";
      return true;
    }
    if (w == "general" || w == "generals") {
      *name = "general";
      return true;
    }
    if (w == "st" || w == "s.t." || w == "st.") {
      *name = "subject to";
      return true;
    }
    if (w == "subject" && pos + 1 < toks.size() && lower(toks[pos + 1]) == "to") {
      *name = "subject to";
      *skip = 2;
      return true;
    }
    return false;
  };
  std::string name;
  size_t skip = 0;
  if (!section_at(0, &name, &skip) || (name != "minimize" && name != "maximize"))
    throw Error("lp: expected Minimize or Maximize");
  Region current{name, {}};
  i = skip;
  while (i < toks.size()) {
    if (section_at(i, &name, &skip)) {
      regions.push_back(std::move(current));
      if (name == "end") {
        current = Region{"end", {}};
        break;
      }
      current = Region{name, {}};
      i += skip;
      continue;
    }
    current.toks.push_back(toks[i]);
    ++i;
  }
  regions.push_back(std::move(current));
  return regions;
}

struct LinearRow {
  std::map<std::string, double> coeffs;
  double constant = 0.0;
};

// terms: [sign] [coefficient] name | [sign] constant; stops at `stop` tokens
size_t read_terms(const std::vector<std::string>& toks, size_t pos, size_t end, LinearRow* row,
                  const std::set<std::string>& stops, std::vector<std::string>* order) {
  double sign = 1.0;
  while (pos < end) {
    const std::string& t = toks[pos];
    if (stops.count(t)) break;
    ++pos;
    if (t == "+") continue;
    if (t == "-") {
      sign = -sign;
      continue;
    }
    if (is_number_tok(t)) {
      const double v = sign * to_number(t);
      sign = 1.0;
      if (pos < end && !stops.count(toks[pos]) && !is_number_tok(toks[pos]) &&
          toks[pos] != "+" && toks[pos] != "-") {
        const std::string name = toks[pos++];
        if (!row->coeffs.count(name) && order) order->push_back(name);
        row->coeffs[name] += v;
      } else {
        row->constant += v;
      }
      continue;
    }
    if (!row->coeffs.count(t) && order) order->push_back(t);
    row->coeffs[t] += sign;
    sign = 1.0;
  }
  return pos;
}

}  // namespace

Model parse_lp(std::string_view text) {
  const std::vector<Region> regions = split_regions(tokenize(text));
  Model m;
  std::vector<std::string> order;
  std::map<std::string, VarDecl> decls;
  std::set<std::string> binaries, generals;
  auto touch = [&](const std::string& name) {
    if (!decls.count(name)) {
      decls[name] = VarDecl{name, VarDomain::Continuous, 0.0, kInf};
      order.push_back(name);
    }
  };

  LinearRow objective;
  std::vector<std::tuple<std::string, LinearRow, Rel, double>> rows;
  const std::set<std::string> rel_stops{"<=", ">=", "=", "<", ">"};

  for (const auto& region : regions) {
    const auto& toks = region.toks;
    if (region.section == "minimize" || region.section == "maximize") {
      m.sense = region.section == "minimize" ? Sense::Minimize : Sense::Maximize;
      size_t pos = 0;
      if (toks.size() >= 2 && toks[1] == ":") pos = 2;
      std::vector<std::string> seen;
      pos = read_terms(toks, pos, toks.size(), &objective, rel_stops, &seen);
      if (pos != toks.size()) throw Error("lp: relation in objective");
      for (const auto& name : seen) touch(name);
    } else if (region.section == "subject to") {
      size_t pos = 0;
      while (pos < toks.size()) {
        const std::string name = toks[pos++];
        if (pos >= toks.size() || toks[pos] != ":")
          throw Error("lp: constraint without ':' near " + name);
        ++pos;
        LinearRow row;
        std::vector<std::string> seen;
        pos = read_terms(toks, pos, toks.size(), &row, rel_stops, &seen);
        if (pos >= toks.size()) throw Error("lp: constraint " + name + " missing relation");
        const std::string rel_tok = toks[pos++];
        if (rel_tok == "<" || rel_tok == ">")
          throw Error("lp: strict relation in constraint " + name);
        double sign = 1.0;
        if (pos < toks.size() && (toks[pos] == "-" || toks[pos] == "+")) {
          sign = toks[pos] == "-" ? -1.0 : 1.0;
          ++pos;
        }
        if (pos >= toks.size()) throw Error("lp: constraint " + name + " missing rhs");
        const double rhs = sign * to_number(toks[pos++]) - row.constant;
        row.constant = 0.0;
        for (const auto& v : seen) touch(v);
        rows.emplace_back(name, std::move(row),
                          rel_tok == "<=" ? Rel::Le : rel_tok == ">=" ? Rel::Ge : Rel::Eq, rhs);
      }
    } else if (region.section == "bounds") {
      size_t pos = 0;
      while (pos < toks.size()) {
        double sign = 1.0;
        if (toks[pos] == "-") {
          sign = -1.0;
          ++pos;
        }
        if (pos >= toks.size()) throw Error("lp: dangling sign in bounds");
        if (is_number_tok(toks[pos]) || is_inf_tok(toks[pos])) {
          // "l <= x <= u"
          const double lo =
              is_inf_tok(toks[pos]) ? sign * kInf : sign * to_number(toks[pos]);
          ++pos;
          if (pos >= toks.size() || toks[pos] != "<=") throw Error("lp: malformed bound line");
          ++pos;
          if (pos >= toks.size()) throw Error("lp: malformed bound line");
          const std::string name = toks[pos++];
          touch(name);
          if (pos >= toks.size() || toks[pos] != "<=") throw Error("lp: malformed bound line");
          ++pos;
          double usign = 1.0;
          if (pos < toks.size() && (toks[pos] == "-" || toks[pos] == "+")) {
            usign = toks[pos] == "-" ? -1.0 : 1.0;
            ++pos;
          }
          if (pos >= toks.size()) throw Error("lp: malformed bound line");
          const double hi =
              is_inf_tok(toks[pos]) ? usign * kInf : usign * to_number(toks[pos]);
          ++pos;
          decls[name].lower = lo;
          decls[name].upper = hi;
          continue;
        }
        const std::string name = toks[pos++];
        touch(name);
        if (pos < toks.size() && lower(toks[pos]) == "free") {
          ++pos;
          decls[name].lower = -kInf;
          decls[name].upper = kInf;
          continue;
        }
        if (pos >= toks.size()) throw Error("lp: malformed bound line");
        const std::string op = toks[pos++];
        double s2 = 1.0;
        if (pos < toks.size() && (toks[pos] == "-" || toks[pos] == "+")) {
          s2 = toks[pos] == "-" ? -1.0 : 1.0;
          ++pos;
        }
        if (pos >= toks.size()) throw Error("lp: malformed bound line");
        const double v = is_inf_tok(toks[pos]) ? s2 * kInf : s2 * to_number(toks[pos]);
        ++pos;
        if (op == "<=") {
          decls[name].upper = v;
        } else if (op == ">=") {
          decls[name].lower = v;
        } else if (op == "=") {
          decls[name].lower = v;
          decls[name].upper = v;
        } else {
          throw Error("lp: malformed bound line");
        }
      }
    } else if (region.section == "binary" || region.section == "general") {
      for (const auto& name : toks) {
        touch(name);
        (region.section == "binary" ? binaries : generals).insert(name);
      }
    } else if (region.section == "end") {
      break;
    }
  }

  for (const auto& name : order) {
    VarDecl d = decls[name];
    if (binaries.count(name)) {
      d.domain = VarDomain::Binary;
      if (d.lower == 0.0 && d.upper == kInf) d.upper = 1.0;
    } else if (generals.count(name)) {
      d.domain = VarDomain::Integer;
    }
    m.vars.push_back(d);
  }

  AffineForm objf;
  objf.coeffs = objective.coeffs;
  objf.offset = objective.constant;
  for (auto it = objf.coeffs.begin(); it != objf.coeffs.end();)
    it = it->second == 0.0 ? objf.coeffs.erase(it) : std::next(it);
  m.objective = objf.to_expr();
  for (auto& [name, row, rel, rhs] : rows) {
    AffineForm f;
    f.coeffs = row.coeffs;
    for (auto it = f.coeffs.begin(); it != f.coeffs.end();)
      it = it->second == 0.0 ? f.coeffs.erase(it) : std::next(it);
    m.constraints.push_back({name, f.to_expr(), rel, Expr::constant(rhs)});
  }
  m.validate();
  return m;
}

namespace {

bool close(double a, double b, double tol) {
  if (a == b) return true;  // covers matching infinities
  return std::fabs(a - b) <= tol;
}

AffineForm row_of(const Constraint& c, double* rhs) {
  auto l = affine_form_of(c.lhs);
  auto r = affine_form_of(c.rhs);
  if (!l || !r) throw NotLinear("constraint[" + c.name + "]", "nonlinear side");
  AffineForm row;
  row.coeffs = l->coeffs;
  for (const auto& [name, coef] : r->coeffs) row.coeffs[name] -= coef;
  for (auto it = row.coeffs.begin(); it != row.coeffs.end();)
    it = it->second == 0.0 ? row.coeffs.erase(it) : std::next(it);
  *rhs = r->offset - l->offset;
  return row;
}

bool forms_match(const AffineForm& a, const AffineForm& b, double tol) {
  for (const auto& [name, c] : a.coeffs) {
    auto it = b.coeffs.find(name);
    if (it == b.coeffs.end() ? std::fabs(c) > tol : !close(c, it->second, tol)) return false;
  }
  for (const auto& [name, c] : b.coeffs)
    if (!a.coeffs.count(name) && std::fabs(c) > tol) return false;
  return true;
}

}  // namespace

bool linear_models_match(const Model& a, const Model& b, double tol) {
  if (a.sense != b.sense) return false;
  if (a.vars.size() != b.vars.size()) return false;
  for (const auto& va : a.vars) {
    const VarDecl* vb = b.find_var(va.name);
    if (!vb || va.domain != vb->domain) return false;
    if (!close(va.lower, vb->lower, tol) || !close(va.upper, vb->upper, tol)) return false;
  }
  auto oa = affine_form_of(a.objective);
  auto ob = affine_form_of(b.objective);
  if (!oa || !ob) return false;
  if (!close(oa->offset, ob->offset, tol)) return false;
  if (!forms_match(*oa, *ob, tol)) return false;

  if (a.constraints.size() != b.constraints.size()) return false;
  for (const auto& ca : a.constraints) {
    const Constraint* cb = b.find_constraint(ca.name);
    if (!cb || ca.rel != cb->rel) return false;
    double rhs_a = 0, rhs_b = 0;
    const AffineForm ra = row_of(ca, &rhs_a);
    const AffineForm rb = row_of(*cb, &rhs_b);
    if (!close(rhs_a, rhs_b, tol)) return false;
    if (!forms_match(ra, rb, tol)) return false;
  }
  return true;
}

bool lp_roundtrip_ok(const Model& m, double tol) {
  try {
    return linear_models_match(m, parse_lp(emit_lp(m)), tol);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace linform
