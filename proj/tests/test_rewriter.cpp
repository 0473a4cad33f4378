#include <cmath>

#include "doctest.h"
#include "linform/errors.hpp"
#include "linform/eval.hpp"
#include "linform/generator.hpp"
#include "linform/lp_format.hpp"
#include "linform/normalize.hpp"
#include "linform/oracle.hpp"
#include "linform/parser.hpp"
#include "linform/rewriter.hpp"
#include "linform/solver.hpp"
#include "linform/verify.hpp"

using namespace linform;

namespace {

Model parse_ok(const std::string& text) {
  const ParseResult r = parse_model(text);
  REQUIRE(r.ok());
  return *r.model;
}

// z-interval admitted by the four binary-product inequalities
std::pair<double, double> case_b_z_range(double b, double x, double L, double U) {
  const double lo = std::max(L * b, x - U * (1 - b));
  const double hi = std::min(U * b, x - L * (1 - b));
  return {lo, hi};
}

}  // namespace

TEST_CASE("case A truth table pins w = b1*b2") {
  // feasible interval for w under w <= b1, w <= b2, w >= b1+b2-1, w in [0,1]
  for (int b1 = 0; b1 <= 1; ++b1)
    for (int b2 = 0; b2 <= 1; ++b2) {
      const double lo = std::max(0.0, static_cast<double>(b1 + b2 - 1));
      const double hi = std::min({1.0, static_cast<double>(b1), static_cast<double>(b2)});
      CHECK(lo == hi);  // singleton
      CHECK(lo == static_cast<double>(b1 * b2));
    }

  // and through the actual rewrite + solver
  const Model m = parse_ok(
      "var a binary\nvar b binary\nvar x continuous [0, 3]\n"
      "minimize: x - 2*a*b\ns.t. c: a + b + x >= 1\n");
  const FixpointResult fx = run_fixpoint(m);
  const Solution sol = solve_milp(fx.model);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-2.0));  // a = b = 1, x = 0
}

TEST_CASE("case B grid exactness") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const double L = rng.real(-8.0, 4.0);
    const double U = L + rng.real(0.5, 9.0);
    for (int b = 0; b <= 1; ++b) {
      for (int g = 0; g <= 20; ++g) {
        const double x = L + (U - L) * g / 20.0;
        const auto [lo, hi] = case_b_z_range(b, x, L, U);
        CHECK(std::fabs(hi - lo) <= 1e-9);           // singleton
        CHECK(std::fabs(lo - b * x) <= 1e-9);        // equal to the product
      }
    }
  }
}

TEST_CASE("media-style discount objective keeps its optimum") {
  const Model m = parse_ok(
      "var x1 binary\nvar x2 binary\nvar x3 binary\nparam d = 3\n"
      "minimize: 5*x1 + 4*x2 + 6*x3 - d*x1*x2\n"
      "s.t. t1: x1 + x3 >= 1\ns.t. t2: x1 + x2 >= 1\ns.t. t3: x2 + x3 >= 1\n");
  const FixpointResult fx = run_fixpoint(m);
  REQUIRE(fx.trace.iterations.size() == 1);
  CHECK(fx.trace.iterations[0].kind == PatternKind::Bilinear);
  CHECK(fx.trace.iterations[0].aux_vars.size() == 1);
  CHECK(fx.trace.iterations[0].aux_constraints.size() == 3);
  const Solution sol = solve_milp(fx.model);
  const Solution truth = oracle_solve(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(truth.objective));
  CHECK(sol.objective == doctest::Approx(6.0));  // {x1, x2} with the discount
}

TEST_CASE("identical bilinear occurrences share one auxiliary") {
  const Model m = parse_ok(
      "var z binary\nvar x continuous [0, 10]\n"
      "minimize: 6*x - 2*z*x + 5*z\ns.t. c: x + 3*z*x >= 4\n");
  const FixpointResult fx = run_fixpoint(m);
  REQUIRE(fx.trace.iterations.size() == 1);
  CHECK(fx.trace.iterations[0].instances_replaced == 2);
  CHECK(fx.trace.iterations[0].aux_vars.size() == 1);  // shared z*x
}

TEST_CASE("whole-side min constraint splits into per-arg rows") {
  const Model m = parse_ok(
      "var t continuous [0, 20]\nvar x continuous [0, 6]\nvar y continuous [0, 6]\n"
      "maximize: t\ns.t. cap: t <= min(2*x + 3, 3*y + 1)\n");
  const FixpointResult fx = run_fixpoint(m);
  CHECK(fx.trace.iterations.size() == 1);
  CHECK(fx.trace.iterations[0].aux_vars.empty());
  CHECK(fx.model.constraints.size() == 2);
  const Solution sol = solve_milp(fx.model);
  const Solution truth = oracle_solve(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(truth.objective));
}

TEST_CASE("epigraph handles a minimized max objective") {
  const Model m = parse_ok(
      "var x continuous [0, 10]\n"
      "minimize: max(x + 1, 8 - x)\n");
  const FixpointResult fx = run_fixpoint(m);
  const Solution sol = solve_milp(fx.model);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(4.5));  // crossing point x = 3.5
}

TEST_CASE("adverse min uses a disjunction and matches the branch oracle") {
  // minimize the min directly: the hypograph alone would run away
  const Model m = parse_ok(
      "var x continuous [0, 4]\nvar y continuous [1, 3]\n"
      "minimize: min(x + 1, 2*y)\ns.t. c: x + y >= 2\n");
  const auto instances = detect_patterns(m);
  REQUIRE(instances.size() == 1);
  CHECK(instances[0].polarity == Polarity::Adverse);
  const FixpointResult fx = run_fixpoint(m);
  bool has_binary_selector = false;
  for (const auto& v : fx.trace.iterations[0].aux_vars)
    if (v.domain == VarDomain::Binary) has_binary_selector = true;
  CHECK(has_binary_selector);
  CHECK(!fx.trace.iterations[0].big_m_values.empty());

  // operator-level big-M derivations: nonnegative, one per value, tied to a
  // constraint and a finite source interval
  const RewriteStep step = rewrite_minmax(m, instances);
  REQUIRE(step.big_m_derivations.size() == step.big_m_values.size());
  for (const auto& d : step.big_m_derivations) {
    CHECK(d.m_value >= 0.0);
    CHECK(d.source_interval.is_finite());
    CHECK(step.model.find_constraint(d.constraint) != nullptr);
  }
  const Solution sol = solve_milp(fx.model);
  const Solution truth = oracle_solve(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(std::fabs(sol.objective - truth.objective) <= 1e-8);
}

TEST_CASE("a split alone would be wrong for the adverse min") {
  // 2-case enumeration on a tiny instance: sum >= min(m, f) is a disjunction,
  // so replacing it by both inequalities (conjunction) shrinks the set
  const Model original = parse_ok(
      "var x continuous [0, 4]\n"
      "minimize: x\ns.t. c: x >= min(3, 2*x - 2)\n");
  const Solution truth = oracle_solve(original);
  REQUIRE(truth.status == SolveStatus::Optimal);
  // branch enumeration: branch 1: x >= 3 & 3 <= 2x-2 -> x >= 3; branch 2:
  // x >= 2x-2 & 2x-2 <= 3 -> x <= 2; optimum min x = 0 via branch 2
  CHECK(truth.objective == doctest::Approx(0.0));

  const Model wrong_split = parse_ok(
      "var x continuous [0, 4]\n"
      "minimize: x\ns.t. c1: x >= 3\ns.t. c2: x >= 2*x - 2\n");
  const Solution wrong = solve_lp(wrong_split);
  // the conjunction demands x >= 3 and x <= 2 at once: not equivalent
  CHECK(wrong.status == SolveStatus::Infeasible);

  const FixpointResult fx = run_fixpoint(original);
  const Solution sol = solve_milp(fx.model);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(truth.objective));
}

TEST_CASE("all-binary min/max use the and/or rules regardless of polarity") {
  const Model m = parse_ok(
      "var a binary\nvar b binary\n"
      "minimize: 2*min(a, b) - max(a, b)\ns.t. c: a + b >= 1\n");
  const FixpointResult fx = run_fixpoint(m);
  // pinned encodings: no big-M anywhere, no selector binaries
  for (const auto& it : fx.trace.iterations) {
    CHECK(it.big_m_values.empty());
    for (const auto& v : it.aux_vars) CHECK(v.domain == VarDomain::Continuous);
  }
  const Solution sol = solve_milp(fx.model);
  const Solution truth = oracle_solve(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(truth.objective));
  CHECK(sol.objective == doctest::Approx(-1.0));  // one selected: min 0, max 1
}

TEST_CASE("benign abs objective rewrites to two inequalities") {
  const Model m = parse_ok(
      "var x1 continuous [0, 8]\nvar x2 continuous [0, 8]\nparam B = 25\n"
      "minimize: abs(2*x1 + 3*x2 - B)\n"
      "s.t. n1: 4*x1 + 2*x2 <= 40\n");
  const FixpointResult fx = run_fixpoint(m);
  REQUIRE(fx.trace.iterations.size() == 1);
  CHECK(fx.trace.iterations[0].aux_vars.size() == 1);
  CHECK(fx.trace.iterations[0].aux_constraints.size() == 2);
  const Solution sol = solve_milp(fx.model);
  const Solution truth = oracle_solve(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(std::fabs(sol.objective - truth.objective) <= 1e-8);
  CHECK(sol.objective == doctest::Approx(0.0));
}

TEST_CASE("fixed zero argument forces a zero abs in both encodings") {
  const Model benign = parse_ok(
      "var x continuous [2, 2]\nminimize: abs(x - 2)\n");
  const FixpointResult fb = run_fixpoint(benign);
  const Solution sb = solve_milp(fb.model);
  REQUIRE(sb.status == SolveStatus::Optimal);
  CHECK(sb.objective == doctest::Approx(0.0));

  const Model adverse = parse_ok(
      "var x continuous [2, 2]\nmaximize: abs(x - 2)\n");
  const FixpointResult fa = run_fixpoint(adverse);
  const Solution sa = solve_milp(fa.model);
  REQUIRE(sa.status == SolveStatus::Optimal);
  CHECK(sa.objective == doctest::Approx(0.0));
}

TEST_CASE("adverse abs matches a grid of evaluations") {
  // maximize |t| over t in [-2, 3]: binary encoding must track |t| exactly
  const Model m = parse_ok(
      "var t continuous [-2, 3]\nmaximize: abs(t)\n");
  const auto instances = detect_patterns(m);
  REQUIRE(instances.size() == 1);
  CHECK(instances[0].polarity == Polarity::Adverse);
  const FixpointResult fx = run_fixpoint(m);
  const Solution sol = solve_milp(fx.model);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(3.0));

  // grid check: fix t, the miniature MILP in (y, beta) must give y = |t|
  for (int g = 0; g <= 10; ++g) {
    const double t = -2.0 + 5.0 * g / 10.0;
    Model fixed = m;
    fixed.vars[0].lower = t;
    fixed.vars[0].upper = t;
    const FixpointResult ffx = run_fixpoint(fixed);
    const Solution fsol = solve_milp(ffx.model);
    REQUIRE(fsol.status == SolveStatus::Optimal);
    CHECK(fsol.objective == doctest::Approx(std::fabs(t)));
  }
}

TEST_CASE("equality-embedded abs uses the plus/minus parts") {
  Rng rng(9001);
  const Model m = gen_abs_equality(rng);
  const FixpointResult fx = run_fixpoint(m);
  REQUIRE(fx.trace.iterations.size() == 1);
  CHECK(fx.trace.iterations[0].aux_vars.size() == 2);  // the two parts
  const Solution sol = solve_milp(fx.model);
  const Solution truth = oracle_solve(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(std::fabs(sol.objective - truth.objective) <= 1e-8);
}

TEST_CASE("charnes-cooper transforms the blend ratio") {
  const Model m = parse_ok(
      "var x1 continuous [50, 1000]\nvar x2 continuous [50, 1000]\nvar x3 continuous [50, 1000]\n"
      "minimize: (4.5*x1 + 6*x2 + 5.2*x3) / (6.8*x1 + 8.2*x2 + 7.5*x3)\n"
      "s.t. heat: 6.8*x1 + 8.2*x2 + 7.5*x3 >= 7200\n"
      "s.t. mass: x1 + x2 + x3 = 1000\n");
  const FixpointResult fx = run_fixpoint(m);
  REQUIRE(fx.trace.fractional.has_value());
  const std::string lp = emit_lp(fx.model);  // fully linear
  CHECK(lp.find("_aux_frac_0") != std::string::npos);
  const Solution sol = solve_milp(fx.model);
  const Solution truth = dinkelbach(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  REQUIRE(truth.status == SolveStatus::Optimal);
  CHECK(std::fabs(sol.objective - truth.objective) <= 1e-8);

  // recovery: x = y / tau is feasible for the original model and reproduces
  // the transformed optimum as the original ratio
  const auto projected = project_onto_original(m, fx.trace, sol);
  CHECK(max_violation(m, projected) <= 1e-8);
  CHECK(std::fabs(evaluate_in(m, m.objective, projected) - sol.objective) <= 1e-8);
}

TEST_CASE("constant denominator degenerates to scaling") {
  Model m;
  m.vars.push_back({"x", VarDomain::Continuous, 0, 5});
  m.sense = Sense::Maximize;
  m.objective = Expr::quot(normalize(3.0 * Expr::var("x") + 1.0), Expr::constant(2.0));
  m.constraints.push_back({"c", Expr::var("x"), Rel::Le, Expr::constant(4.0)});
  // handed directly to the operator (normalization would fold the constant)
  PatternInstance inst;
  inst.kind = PatternKind::LinearFractional;
  inst.path = {ExprLocus::Root::Objective, "", {}};
  inst.args = {m.objective.child(0), m.objective.child(1)};
  const RewriteStep step = rewrite_fractional(m, {inst});
  const Solution sol = solve_lp(step.model);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx((3.0 * 4.0 + 1.0) / 2.0));
}

TEST_CASE("fractional guards") {
  const Model with_binary = parse_ok(
      "var x continuous [1, 5]\nvar b binary\n"
      "maximize: (x + b) / (x + 1)\n");
  const auto instances = detect_patterns(with_binary);
  REQUIRE(instances.size() == 1);
  CHECK_THROWS_AS(rewrite_fractional(with_binary, instances), FractionalWithIntegers);

  const Model embedded = parse_ok(
      "var x continuous [1, 5]\nminimize: x + (x + 1) / (x + 2)\n");
  const auto inst2 = detect_patterns(embedded);
  REQUIRE(inst2.size() == 1);
  CHECK_THROWS_AS(rewrite_fractional(embedded, inst2), FractionalNotIsolated);
}

TEST_CASE("monotone objective peels to its argument") {
  const Model m = parse_ok(
      "var x1 continuous [0, 10]\nvar x2 continuous [0, 10]\n"
      "minimize: exp(0.4*x1 + 0.6*x2)\n"
      "s.t. n1: 3*x1 + x2 >= 6\ns.t. n2: 2*x1 + 4*x2 >= 8\n");
  const FixpointResult fx = run_fixpoint(m);
  REQUIRE(fx.trace.post_solve.has_value());
  CHECK(fx.trace.post_solve->fn == MonoFn::Exp);
  CHECK(fx.trace.post_solve->increasing);
  const Solution sol = solve_milp(fx.model);
  const Solution truth = oracle_solve(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(std::exp(sol.objective) == doctest::Approx(truth.objective));
}

TEST_CASE("sqrt objective follows the same route") {
  const Model m = parse_ok(
      "var e1 continuous [0, 10]\nvar l1 continuous [0, 10]\n"
      "minimize: sqrt(2*e1 + 3*l1)\n"
      "s.t. bal: e1 + l1 >= 4\n");
  const FixpointResult fx = run_fixpoint(m);
  REQUIRE(fx.trace.post_solve.has_value());
  CHECK(fx.trace.post_solve->fn == MonoFn::Sqrt);
  const Solution sol = solve_milp(fx.model);
  const Solution truth = oracle_solve(m);
  CHECK(std::sqrt(sol.objective) == doctest::Approx(truth.objective));
}

TEST_CASE("log constraint inverts to an exponential bound") {
  const Model m = parse_ok(
      "var y continuous [1, 100]\n"
      "maximize: y\ns.t. lim: log(y) <= 3\n");
  const FixpointResult fx = run_fixpoint(m);
  const Solution sol = solve_milp(fx.model);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(std::exp(3.0)));
  // constraint rewrote in place: same name, linear sides
  CHECK(fx.model.constraints.size() == 1);
  CHECK(fx.model.constraints[0].name == "lim");
}

TEST_CASE("already linear input returns unchanged with an empty trace") {
  const Model m = parse_ok(
      "var x continuous [0, 5]\nminimize: 2*x\ns.t. c: x >= 1\n");
  const FixpointResult fx = run_fixpoint(m);
  CHECK(fx.trace.iterations.empty());
  CHECK(linear_models_match(m, fx.model, 1e-12));
}

TEST_CASE("two-pattern model takes two iterations") {
  const Model m = parse_ok(
      "var x1 continuous [0, 8]\nvar x2 continuous [0, 8]\nparam B = 35\n"
      "minimize: abs(2*x1 + 3*x2 - B)\n"
      "s.t. n1: 4*x1 + 2*x2 >= min(20, 4*x1 + 2*x2)\n"
      "s.t. n2: x1 + 5*x2 >= min(18, 4*x1 + 2*x2)\n"
      "s.t. n1u: 4*x1 + 2*x2 <= 40\ns.t. n2u: x1 + 5*x2 <= 30\n");
  const FixpointResult fx = run_fixpoint(m);
  CHECK(fx.trace.iterations.size() == 2);
  std::set<PatternKind> kinds;
  for (const auto& it : fx.trace.iterations) kinds.insert(it.kind);
  CHECK(kinds == std::set<PatternKind>{PatternKind::Abs, PatternKind::Min});
  const Solution sol = solve_milp(fx.model);
  const Solution truth = oracle_solve(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(std::fabs(sol.objective - truth.objective) <= 1e-6);
}

TEST_CASE("seeded random order reaches the same optimum") {
  const Model m = parse_ok(
      "var x1 continuous [0, 8]\nvar x2 continuous [0, 8]\nvar b binary\n"
      "minimize: abs(2*x1 + 3*x2 - 20) + 2*b*x1 + max(x1 - 4, x2 - 2)\n"
      "s.t. n1: x1 + x2 >= 3\n");
  const FixpointResult fixed = run_fixpoint(m, RewriteOrder::FixedPriority);
  const Solution ref = solve_milp(fixed.model);
  REQUIRE(ref.status == SolveStatus::Optimal);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const FixpointResult fx = run_fixpoint(m, RewriteOrder::SeededRandom, seed);
    const Solution sol = solve_milp(fx.model);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(std::fabs(sol.objective - ref.objective) <= 1e-9);
  }
}

TEST_CASE("progress and termination on generated models") {
  int done = 0;
  for (unsigned seed = 11; seed <= 14; ++seed) {
    const auto generated = gen_models(seed, 50);
    for (const auto& gen : generated) {
      const auto initial_kinds = applicable_kinds(gen.model);
      const FixpointResult fx = run_fixpoint(gen.model);
      CHECK(fx.trace.iterations.size() <= initial_kinds.size());
      CHECK(initial_kinds.size() <= 6);
      std::set<PatternKind> seen;
      for (const auto& it : fx.trace.iterations) {
        CHECK(it.instances_replaced >= 1);
        CHECK(!seen.count(it.kind));  // no kind ever reappears
        seen.insert(it.kind);
      }
      CHECK(applicable_kinds(fx.model).empty());
      (void)emit_lp(fx.model);  // accepted by the linearity gate
      ++done;
    }
  }
  CHECK(done == 200);
}

TEST_CASE("monotone constraints with out-of-image bounds resolve decidably") {
  // exp(g) <= -2 can never hold; exp(g) >= -2 always holds
  const Model never = parse_ok(
      "var x continuous [0, 5]\nminimize: x\ns.t. c: exp(0.5*x + 1) <= -2\n");
  const FixpointResult fn = run_fixpoint(never);
  CHECK(solve_milp(fn.model).status == SolveStatus::Infeasible);
  CHECK(oracle_solve(never).status == SolveStatus::Infeasible);

  const Model always = parse_ok(
      "var x continuous [1, 5]\nminimize: x\ns.t. c: exp(0.5*x + 1) >= -2\n");
  const FixpointResult fa = run_fixpoint(always);
  const Solution sol = solve_milp(fa.model);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0));

  const Model sqrt_eq = parse_ok(
      "var x continuous [0, 5]\nminimize: x\ns.t. c: sqrt(x) = -1\n");
  const FixpointResult fs = run_fixpoint(sqrt_eq);
  CHECK(solve_milp(fs.model).status == SolveStatus::Infeasible);
}

TEST_CASE("constraint-side monotone agrees with the oracle") {
  const Model m = parse_ok(
      "var y continuous [1, 100]\nmaximize: y\ns.t. lim: log(y) <= 3\n");
  const FixpointResult fx = run_fixpoint(m);
  const Solution sol = solve_milp(fx.model);
  const Solution truth = oracle_solve(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  REQUIRE(truth.status == SolveStatus::Optimal);
  CHECK(std::fabs(sol.objective - truth.objective) <= 1e-8);

  // monotone on the right-hand side, constant on the left
  const Model rhs = parse_ok(
      "var y continuous [1, 100]\nminimize: y\ns.t. lim: 2 <= log(y)\n");
  const FixpointResult fr = run_fixpoint(rhs);
  const Solution srhs = solve_milp(fr.model);
  REQUIRE(srhs.status == SolveStatus::Optimal);
  CHECK(srhs.objective == doctest::Approx(std::exp(2.0)));
  CHECK(std::fabs(srhs.objective - oracle_solve(rhs).objective) <= 1e-8);
}
