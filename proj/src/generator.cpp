#include "linform/generator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "linform/affinity.hpp"
#include "linform/errors.hpp"
#include "linform/normalize.hpp"

namespace linform {

int Rng::range(int lo, int hi) {
  if (hi < lo) throw InvalidArgument("Rng::range with empty range");
  const unsigned span = static_cast<unsigned>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

double Rng::real(double lo, double hi) {
  const double u = static_cast<double>(engine_()) / 4294967296.0;
  return lo + u * (hi - lo);
}

double Rng::coeff(double lo, double hi, double step) {
  for (int tries = 0; tries < 64; ++tries) {
    const int n = static_cast<int>((hi - lo) / step);
    const double v = lo + step * range(0, n);
    if (v != 0.0 && v != 1.0) return v;
  }
  return lo;
}

bool Rng::chance(double p) { return real(0.0, 1.0) < p; }

namespace {

// quantized draw that only avoids zero; +1 is fine inside arguments
double qnz(Rng& rng, double lo, double hi, double step = 0.25) {
  for (int tries = 0; tries < 64; ++tries) {
    const int n = static_cast<int>((hi - lo) / step);
    const double v = lo + step * rng.range(0, n);
    if (v != 0.0) return v;
  }
  return hi;
}

struct Skeleton {
  Model m;
  std::vector<Expr> obj_terms;
  int nvars = 0;
  int next_constraint = 0;
  int next_binary = 0;

  std::string fresh_constraint() { return "c" + std::to_string(next_constraint++); }
  std::string fresh_binary() { return "b" + std::to_string(next_binary++); }
};

Skeleton make_base(Rng& rng, int lo_vars = 2, int hi_vars = 4) {
  Skeleton s;
  s.nvars = rng.range(lo_vars, hi_vars);
  std::vector<Expr> cap_terms;
  double cap_budget = 0.0;
  for (int i = 0; i < s.nvars; ++i) {
    const std::string name = "x" + std::to_string(i);
    const double upper = rng.range(3, 10);
    s.m.vars.push_back({name, VarDomain::Continuous, 0.0, upper});
    s.obj_terms.push_back(qnz(rng, -4.0, 4.0) * Expr::var(name));
    const double a = qnz(rng, 0.5, 3.0);
    cap_terms.push_back(a * Expr::var(name));
    cap_budget += a * upper;
  }
  s.m.sense = Sense::Minimize;
  s.m.constraints.push_back({s.fresh_constraint(), Expr::sum(cap_terms), Rel::Le,
                             Expr::constant(std::ceil(cap_budget * 0.5))});
  return s;
}

Expr affine_arg(Skeleton& s, Rng& rng, double* offset_out = nullptr) {
  const int v = rng.range(0, s.nvars - 1);
  const double w = qnz(rng, 0.5, 2.5);
  const double o = qnz(rng, 1.0, 5.0);
  if (offset_out) *offset_out = o;
  return w * Expr::var("x" + std::to_string(v)) + o;
}

std::string obj_term_path(int idx, bool scaled) {
  std::string p = "objective.term[" + std::to_string(idx) + "]";
  if (scaled) p += ".factor[1]";
  return p;
}

void finish(Skeleton& s) {
  s.m.objective = Expr::sum(s.obj_terms);
  s.m = normalize_model(std::move(s.m));
  s.m.validate();
}

// distinct argument sets so occurrences never merge during normalization
std::vector<Expr> fresh_args(Skeleton& s, Rng& rng, int count, std::set<std::string>* used) {
  for (int tries = 0; tries < 64; ++tries) {
    std::vector<Expr> args;
    std::string key;
    for (int i = 0; i < count; ++i) {
      args.push_back(normalize(affine_arg(s, rng)));
      key += expr_key(args.back()) + "|";
    }
    bool distinct = true;
    for (int i = 0; i < count; ++i)
      for (int j = i + 1; j < count; ++j)
        if (expr_key(args[i]) == expr_key(args[j])) distinct = false;
    if (distinct && !used->count(key)) {
      used->insert(key);
      return args;
    }
  }
  throw InvalidArgument("generator could not draw distinct arguments");
}

// Constraint-side placements used when the objective is already claimed by a
// monotone wrap or a ratio.
void plant_constraints(Skeleton& s, Rng& rng, const GenMix& mix, GeneratedModel* gen,
                       std::set<std::string>* used) {
  for (const auto& [kind, n] : mix.kind_counts) {
    if (kind == PatternKind::Monotone || kind == PatternKind::LinearFractional) continue;
    for (int j = 0; j < n; ++j) {
      switch (kind) {
        case PatternKind::Min:
        case PatternKind::Max: {
          std::vector<Expr> args = fresh_args(s, rng, rng.range(2, 3), used);
          double worst = kind == PatternKind::Min ? 1e30 : -1e30;
          for (const Expr& a : args) {
            auto f = affine_form_of(a);
            worst = kind == PatternKind::Min ? std::min(worst, f->offset)
                                             : std::max(worst, f->offset);
          }
          const std::string cname = s.fresh_constraint();
          if (kind == PatternKind::Min)
            s.m.constraints.push_back({cname, Expr::min_of(args), Rel::Ge,
                                       Expr::constant(worst - rng.range(1, 3))});
          else
            s.m.constraints.push_back({cname, Expr::max_of(args), Rel::Le,
                                       Expr::constant(worst + rng.range(1, 3))});
          gen->planted.push_back({kind, "constraint[" + cname + "].lhs"});
          break;
        }
        case PatternKind::Abs: {
          const Expr t = fresh_args(s, rng, 1, used)[0];
          const double at_zero = affine_form_of(t)->offset;
          const std::string cname = s.fresh_constraint();
          s.m.constraints.push_back({cname, Expr::abs(t), Rel::Le,
                                     Expr::constant(std::fabs(at_zero) + rng.range(2, 6))});
          gen->planted.push_back({kind, "constraint[" + cname + "].lhs"});
          break;
        }
        case PatternKind::Bilinear: {
          const std::string b = s.fresh_binary();
          s.m.vars.push_back({b, VarDomain::Binary, 0.0, 1.0});
          const int v = rng.range(0, s.nvars - 1);
          const double k = rng.coeff(0.5, 2.0, 0.25);
          const std::string cname = s.fresh_constraint();
          s.m.constraints.push_back(
              {cname,
               0.5 * Expr::var("x0") + k * (Expr::var(b) * Expr::var("x" + std::to_string(v))),
               Rel::Le, Expr::constant(rng.range(4, 20))});
          gen->planted.push_back({kind, "constraint[" + cname + "].lhs.term[1]"});
          break;
        }
        default:
          break;
      }
    }
  }
}

}  // namespace

GenMix parse_mix(const std::string& spec) {
  GenMix mix;
  size_t pos = 0;
  while (pos < spec.size()) {
    size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    const std::string part = spec.substr(pos, comma - pos);
    const size_t eq = part.find('=');
    if (eq == std::string::npos) throw InvalidArgument("bad mix entry: " + part);
    const int count = std::stoi(part.substr(eq + 1));
    if (count < 1) throw InvalidArgument("mix counts must be positive: " + part);
    mix.kind_counts[kind_from_name(part.substr(0, eq))] += count;
    pos = comma + 1;
  }
  return mix;
}

Model gen_pattern_free(Rng& rng) {
  Skeleton s = make_base(rng, 2, 5);
  const int extra = rng.range(0, 2);
  for (int i = 0; i < extra; ++i) {
    std::vector<Expr> terms;
    for (int v = 0; v < s.nvars; ++v)
      if (rng.chance(0.7))
        terms.push_back(qnz(rng, -2.0, 3.0) * Expr::var("x" + std::to_string(v)));
    if (terms.empty()) terms.push_back(Expr::var("x0"));
    s.m.constraints.push_back({s.fresh_constraint(), Expr::sum(terms), Rel::Le,
                               Expr::constant(rng.range(5, 40))});
  }
  if (rng.chance(0.3)) {
    const std::string b = s.fresh_binary();
    s.m.vars.push_back({b, VarDomain::Binary, 0.0, 1.0});
    s.obj_terms.push_back(qnz(rng, 1.0, 5.0) * Expr::var(b));
  }
  finish(s);
  return s.m;
}

Model gen_param_product_model(Rng& rng) {
  Skeleton s = make_base(rng, 2, 4);
  // parameter-by-variable and parameter-by-parameter products everywhere;
  // none of these are decision-variable products
  std::vector<std::string> pnames;
  for (int i = 0; i < 3; ++i) {
    const std::string name = "p" + std::to_string(i);
    pnames.push_back(name);
    s.m.params.push_back({name, qnz(rng, 0.5, 4.0)});
  }
  std::vector<Expr> terms = s.obj_terms;
  for (int v = 0; v < s.nvars; ++v)
    terms.push_back(Expr::prod({Expr::param(pnames[static_cast<size_t>(v) % 3]),
                                Expr::var("x" + std::to_string(v))}));
  terms.push_back(Expr::prod({Expr::param(pnames[0]), Expr::param(pnames[1])}));
  s.obj_terms = std::move(terms);
  std::vector<Expr> row;
  for (int v = 0; v < s.nvars; ++v)
    row.push_back(Expr::prod({Expr::param(pnames[(static_cast<size_t>(v) + 1) % 3]),
                              Expr::var("x" + std::to_string(v))}));
  s.m.constraints.push_back({s.fresh_constraint(), Expr::sum(row), Rel::Le,
                             Expr::constant(rng.range(10, 60))});
  finish(s);
  return s.m;
}

Model gen_minmax_instance(PatternKind kind, Polarity polarity, Rng& rng) {
  if (kind != PatternKind::Min && kind != PatternKind::Max)
    throw InvalidArgument("gen_minmax_instance expects min or max");
  Skeleton s = make_base(rng, 2, 3);
  std::set<std::string> used;
  const int nargs = rng.range(2, 4);
  std::vector<Expr> args = fresh_args(s, rng, nargs, &used);
  const bool is_min = kind == PatternKind::Min;
  const Expr node = is_min ? Expr::min_of(args) : Expr::max_of(args);
  const double k = rng.coeff(0.5, 3.0, 0.25);

  switch (polarity) {
    case Polarity::Benign:
      if (rng.chance(0.35)) {
        // constraint placement with the exact-direction pressure
        double worst = is_min ? 1e30 : -1e30;
        for (const Expr& a : args) {
          auto f = affine_form_of(a);
          worst = is_min ? std::min(worst, f->offset) : std::max(worst, f->offset);
        }
        if (is_min) {
          // 0.5 x0 + k min(...) >= r, satisfiable at x = 0
          s.m.constraints.push_back({s.fresh_constraint(),
                                     0.5 * Expr::var("x0") + k * node, Rel::Ge,
                                     Expr::constant(k * worst - 1.0)});
        } else {
          s.m.constraints.push_back({s.fresh_constraint(),
                                     0.5 * Expr::var("x0") + k * node, Rel::Le,
                                     Expr::constant(k * worst + 2.0)});
        }
      } else {
        s.obj_terms.push_back((is_min ? -k : k) * node);
      }
      break;
    case Polarity::Adverse:
      if (is_min && rng.chance(0.35)) {
        // sum >= min(m, f): the disjunctive lower-bound shape
        std::vector<Expr> lhs_terms;
        for (int v = 0; v < s.nvars; ++v)
          lhs_terms.push_back(qnz(rng, 0.5, 2.0) * Expr::var("x" + std::to_string(v)));
        s.m.constraints.push_back({s.fresh_constraint(), Expr::sum(lhs_terms), Rel::Ge, node});
      } else {
        s.obj_terms.push_back((is_min ? k : -k) * node);
      }
      break;
    case Polarity::ConstraintSplit: {
      double worst = is_min ? 1e30 : -1e30;
      for (const Expr& a : args) {
        auto f = affine_form_of(a);
        worst = is_min ? std::min(worst, f->offset) : std::max(worst, f->offset);
      }
      if (is_min)
        s.m.constraints.push_back({s.fresh_constraint(), node, Rel::Ge,
                                   Expr::constant(worst - rng.range(1, 3))});
      else
        s.m.constraints.push_back({s.fresh_constraint(), node, Rel::Le,
                                   Expr::constant(worst + rng.range(1, 3))});
      break;
    }
  }
  finish(s);
  return s.m;
}

Model gen_abs_objective(Rng& rng) {
  Skeleton s = make_base(rng, 2, 3);
  std::set<std::string> used;
  const Expr t = fresh_args(s, rng, 1, &used)[0];
  s.obj_terms.push_back(rng.coeff(0.5, 3.0, 0.25) * Expr::abs(t - rng.range(1, 8)));
  finish(s);
  return s.m;
}

Model gen_abs_equality(Rng& rng) {
  Skeleton s = make_base(rng, 2, 3);
  std::set<std::string> used;
  const Expr t = fresh_args(s, rng, 1, &used)[0];
  double bound = 0.0;
  for (const auto& v : s.m.vars) bound += 3.0 * v.upper;
  s.m.vars.push_back({"yv", VarDomain::Continuous, 0.0, bound + 10.0});
  s.m.constraints.push_back({"eqabs", Expr::var("yv"), Rel::Eq,
                             Expr::abs(t - rng.range(1, 6))});
  s.obj_terms.push_back(qnz(rng, 0.5, 3.0) * Expr::var("yv"));
  finish(s);
  return s.m;
}

Model gen_abs_adverse(Rng& rng) {
  Skeleton s = make_base(rng, 2, 3);
  std::set<std::string> used;
  const Expr t = fresh_args(s, rng, 1, &used)[0];
  s.obj_terms.push_back(-rng.coeff(0.5, 3.0, 0.25) * Expr::abs(t - rng.range(1, 8)));
  finish(s);
  return s.m;
}

Model gen_fractional_lp(Rng& rng) {
  Model m;
  m.sense = rng.chance(0.5) ? Sense::Minimize : Sense::Maximize;
  for (int i = 0; i < 3; ++i)
    m.vars.push_back({"x" + std::to_string(i), VarDomain::Continuous, 0.0,
                      static_cast<double>(rng.range(2, 8))});
  for (int c = 0; c < 4; ++c) {
    std::vector<Expr> terms;
    for (int i = 0; i < 3; ++i)
      terms.push_back(qnz(rng, -2.0, 3.0) * Expr::var("x" + std::to_string(i)));
    m.constraints.push_back({"c" + std::to_string(c), Expr::sum(terms), Rel::Le,
                             Expr::constant(qnz(rng, 1.0, 10.0))});
  }
  std::vector<Expr> num_terms;
  std::vector<Expr> den_terms;
  for (int i = 0; i < 3; ++i) {
    num_terms.push_back(qnz(rng, -3.0, 3.0) * Expr::var("x" + std::to_string(i)));
    const double d = 0.25 * rng.range(0, 6);
    if (d != 0.0) den_terms.push_back(d * Expr::var("x" + std::to_string(i)));
  }
  num_terms.push_back(Expr::constant(qnz(rng, -4.0, 4.0)));
  den_terms.push_back(Expr::constant(qnz(rng, 0.5, 2.0)));
  m.objective = Expr::quot(Expr::sum(num_terms), Expr::sum(den_terms));
  m = normalize_model(std::move(m));
  m.validate();
  return m;
}

Model gen_monotone_binary(Rng& rng) {
  Model m;
  m.sense = rng.chance(0.5) ? Sense::Minimize : Sense::Maximize;
  const int n = rng.range(3, 5);
  std::vector<Expr> inner;
  std::vector<Expr> cap;
  int total_w = 0;
  for (int i = 0; i < n; ++i) {
    const std::string name = "b" + std::to_string(i);
    m.vars.push_back({name, VarDomain::Binary, 0.0, 1.0});
    inner.push_back(qnz(rng, 0.25, 1.5) * Expr::var(name));
    const int w = rng.range(1, 4);
    total_w += w;
    cap.push_back(static_cast<double>(w) * Expr::var(name));
  }
  const MonoFn fn = rng.chance(0.5) ? MonoFn::Exp : MonoFn::Sqrt;
  if (fn == MonoFn::Sqrt) inner.push_back(Expr::constant(qnz(rng, 0.5, 3.0)));
  m.objective = Expr::mono(fn, Expr::sum(inner));
  m.constraints.push_back({"cap", Expr::sum(cap), Rel::Le,
                           Expr::constant(rng.range(1, std::max(1, total_w - 1)))});
  m = normalize_model(std::move(m));
  m.validate();
  return m;
}

Model gen_random_milp(Rng& rng, int max_binaries) {
  Model m;
  m.sense = rng.chance(0.5) ? Sense::Minimize : Sense::Maximize;
  const int nb = rng.range(1, max_binaries);
  const int nc = rng.range(0, 2);
  std::vector<std::string> names;
  for (int i = 0; i < nb; ++i) {
    names.push_back("b" + std::to_string(i));
    m.vars.push_back({names.back(), VarDomain::Binary, 0.0, 1.0});
  }
  for (int i = 0; i < nc; ++i) {
    names.push_back("x" + std::to_string(i));
    m.vars.push_back({names.back(), VarDomain::Continuous, 0.0,
                      static_cast<double>(rng.range(2, 6))});
  }
  std::vector<Expr> obj;
  for (const auto& name : names) obj.push_back(qnz(rng, -4.0, 5.0) * Expr::var(name));
  m.objective = Expr::sum(obj);
  const int rows = rng.range(1, 3);
  for (int r = 0; r < rows; ++r) {
    std::vector<Expr> terms;
    for (const auto& name : names)
      if (rng.chance(0.8)) terms.push_back(qnz(rng, -3.0, 5.0) * Expr::var(name));
    if (terms.empty()) terms.push_back(Expr::var(names.front()));
    if (rng.chance(0.75))
      m.constraints.push_back({"c" + std::to_string(r), Expr::sum(terms), Rel::Le,
                               Expr::constant(qnz(rng, 0.5, 8.0))});
    else
      m.constraints.push_back({"c" + std::to_string(r), Expr::sum(terms), Rel::Ge,
                               Expr::constant(-qnz(rng, 0.5, 4.0))});
  }
  m = normalize_model(std::move(m));
  m.validate();
  return m;
}

Model gen_random_lp3(Rng& rng) {
  Model m;
  m.sense = rng.chance(0.5) ? Sense::Minimize : Sense::Maximize;
  for (int i = 0; i < 3; ++i) {
    const double hi = rng.range(3, 8);
    const double lo = rng.chance(0.25) ? -static_cast<double>(rng.range(1, 4)) : 0.0;
    m.vars.push_back({"x" + std::to_string(i), VarDomain::Continuous, lo, hi});
  }
  std::vector<Expr> obj;
  for (int i = 0; i < 3; ++i)
    obj.push_back(qnz(rng, -4.0, 4.0) * Expr::var("x" + std::to_string(i)));
  m.objective = Expr::sum(obj);
  const int rows = rng.range(2, 4);
  for (int r = 0; r < rows; ++r) {
    std::vector<Expr> terms;
    for (int i = 0; i < 3; ++i)
      if (rng.chance(0.8)) terms.push_back(qnz(rng, -3.0, 3.0) * Expr::var("x" + std::to_string(i)));
    if (terms.empty()) terms.push_back(Expr::var("x0"));
    const Rel rel = rng.chance(0.6) ? Rel::Le : Rel::Ge;
    m.constraints.push_back({"c" + std::to_string(r), Expr::sum(terms), rel,
                             Expr::constant(qnz(rng, -6.0, 10.0))});
  }
  m = normalize_model(std::move(m));
  m.validate();
  return m;
}

std::vector<GeneratedModel> gen_models(unsigned seed, int count, const GenMix& mix) {
  if (count < 1) throw InvalidArgument("gen_models: count must be positive");
  const auto has = [&](PatternKind k) { return mix.kind_counts.count(k) > 0; };
  if (has(PatternKind::LinearFractional) &&
      (has(PatternKind::Monotone) || has(PatternKind::Bilinear)))
    throw InvalidArgument("fractional models cannot carry monotone or bilinear patterns");
  if (has(PatternKind::Monotone) && has(PatternKind::LinearFractional))
    throw InvalidArgument("monotone and fractional transforms both claim the objective");

  static const PatternKind kAll[] = {PatternKind::Bilinear, PatternKind::Min,
                                     PatternKind::Max,      PatternKind::Abs,
                                     PatternKind::LinearFractional, PatternKind::Monotone};
  Rng rng(seed);
  std::vector<GeneratedModel> out;
  for (int idx = 0; idx < count; ++idx) {
    GenMix local = mix;
    if (local.kind_counts.empty())
      local.kind_counts[kAll[static_cast<size_t>(idx) % 6]] = 1;

    GeneratedModel gen;
    if (local.kind_counts.count(PatternKind::LinearFractional)) {
      Skeleton s;  // constraint-route extras share the fractional model's vars
      s.m = gen_fractional_lp(rng);
      s.nvars = 3;
      s.next_constraint = static_cast<int>(s.m.constraints.size());
      gen.planted.push_back({PatternKind::LinearFractional, "objective"});
      std::set<std::string> used;
      plant_constraints(s, rng, local, &gen, &used);
      gen.model = normalize_model(std::move(s.m));
      gen.model.validate();
    } else {
      Skeleton s = make_base(rng, 2, 4);
      std::set<std::string> used;
      if (local.kind_counts.count(PatternKind::Monotone)) {
        // wrap an affine objective; everything else goes to constraints
        const MonoFn fn = rng.chance(0.5) ? MonoFn::Exp : MonoFn::Sqrt;
        std::vector<Expr> inner;
        for (int v = 0; v < s.nvars; ++v)
          inner.push_back(qnz(rng, 0.25, 1.0) * Expr::var("x" + std::to_string(v)));
        if (fn == MonoFn::Sqrt) inner.push_back(Expr::constant(qnz(rng, 0.5, 3.0)));
        s.obj_terms.clear();
        s.obj_terms.push_back(Expr::mono(fn, Expr::sum(inner)));
        gen.planted.push_back({PatternKind::Monotone, "objective"});
        plant_constraints(s, rng, local, &gen, &used);
      } else {
        int term_idx = s.nvars;
        for (const auto& [kind, n] : local.kind_counts) {
          for (int j = 0; j < n; ++j) {
            switch (kind) {
              case PatternKind::Abs: {
                const Expr t = fresh_args(s, rng, 1, &used)[0];
                const double k = rng.coeff(0.5, 3.0, 0.25);
                const double sign = rng.chance(0.7) ? 1.0 : -1.0;
                s.obj_terms.push_back(sign * k * Expr::abs(t - rng.range(1, 8)));
                gen.planted.push_back({kind, obj_term_path(term_idx++, true)});
                break;
              }
              case PatternKind::Min:
              case PatternKind::Max: {
                std::vector<Expr> args = fresh_args(s, rng, rng.range(2, 3), &used);
                const Expr node = kind == PatternKind::Min ? Expr::min_of(args)
                                                           : Expr::max_of(args);
                const double k = rng.coeff(0.5, 3.0, 0.25);
                const bool benign = rng.chance(0.7);
                const double sign = (kind == PatternKind::Min) == benign ? -1.0 : 1.0;
                s.obj_terms.push_back(sign * k * node);
                gen.planted.push_back({kind, obj_term_path(term_idx++, true)});
                break;
              }
              case PatternKind::Bilinear: {
                const std::string b = s.fresh_binary();
                s.m.vars.push_back({b, VarDomain::Binary, 0.0, 1.0});
                const double k = rng.coeff(0.5, 3.0, 0.25);
                if (rng.chance(0.5)) {
                  const std::string b2 = s.fresh_binary();
                  s.m.vars.push_back({b2, VarDomain::Binary, 0.0, 1.0});
                  s.obj_terms.push_back(k * (Expr::var(b) * Expr::var(b2)));
                } else {
                  const int v = rng.range(0, s.nvars - 1);
                  s.obj_terms.push_back(k *
                                        (Expr::var(b) * Expr::var("x" + std::to_string(v))));
                }
                gen.planted.push_back({kind, obj_term_path(term_idx++, false)});
                break;
              }
              default:
                break;
            }
          }
        }
      }
      finish(s);
      gen.model = s.m;
    }

    std::set<PatternKind> kinds;
    for (const auto& p : gen.planted) kinds.insert(p.kind);
    gen.annotation.expected_kinds.assign(kinds.begin(), kinds.end());
    gen.annotation.source = "generated seed=" + std::to_string(seed) + " idx=" +
                            std::to_string(idx);
    out.push_back(std::move(gen));
  }
  return out;
}

}  // namespace linform
