#include <cmath>
#include <random>

#include "doctest.h"
#include "linform/affinity.hpp"
#include "linform/errors.hpp"
#include "linform/eval.hpp"
#include "linform/normalize.hpp"

using namespace linform;

namespace {

Model two_var_model(double xlo = 0, double xhi = 10, double ylo = 0, double yhi = 10) {
  Model m;
  m.vars.push_back({"x", VarDomain::Continuous, xlo, xhi});
  m.vars.push_back({"y", VarDomain::Continuous, ylo, yhi});
  m.objective = Expr::constant(0);
  return m;
}

}  // namespace

TEST_CASE("affinity classes") {
  Model m = two_var_model();
  const Expr affine = normalize(3.0 * Expr::var("x") + 2.0 * Expr::var("y") - 1.0);
  const AffinityClass a = affinity_of(affine, m);
  REQUIRE(a.kind == AffinityKind::AffineInVars);
  CHECK(a.affine.coeffs.at("x") == doctest::Approx(3.0));
  CHECK(a.affine.coeffs.at("y") == doctest::Approx(2.0));
  CHECK(a.affine.offset == doctest::Approx(-1.0));

  CHECK(affinity_of(normalize(Expr::var("x") * Expr::var("y")), m).kind ==
        AffinityKind::NonlinearPattern);
  CHECK(affinity_of(normalize(Expr::abs(Expr::var("x"))), m).kind ==
        AffinityKind::NonlinearPattern);
  CHECK(affinity_of(Expr::constant(4.0), m).kind == AffinityKind::ConstantOnly);

  // parameters fold into coefficients before classification
  Model mp = m;
  mp.params.push_back({"p", 2.0});
  const Expr pe = normalize(Expr::prod({Expr::constant(5.0), Expr::param("p"), Expr::var("x")}),
                            mp.param_values());
  const AffinityClass ap = affinity_of(pe, mp);
  REQUIRE(ap.kind == AffinityKind::AffineInVars);
  CHECK(ap.affine.coeffs.at("x") == doctest::Approx(10.0));

  const Expr triple =
      normalize(Expr::prod({Expr::var("x"), Expr::var("y"), Expr::var("x")}));
  CHECK(affinity_of(triple, m).kind == AffinityKind::Unsupported);
}

TEST_CASE("interval examples") {
  Model m = two_var_model(0, 10);
  const Interval iv = interval_of(normalize(2.0 * Expr::var("x") - 3.0), m);
  CHECK(iv.lo == doctest::Approx(-3.0));
  CHECK(iv.hi == doctest::Approx(17.0));

  Model mb;
  mb.vars.push_back({"b", VarDomain::Binary, 0, 1});
  mb.vars.push_back({"x", VarDomain::Continuous, 2, 5});
  mb.objective = Expr::constant(0);
  const Interval iv2 = interval_of(normalize(Expr::var("b") + Expr::var("x")), mb);
  CHECK(iv2.lo == doctest::Approx(2.0));
  CHECK(iv2.hi == doctest::Approx(6.0));

  Model mu = two_var_model(0, std::numeric_limits<double>::infinity());
  const Expr unbounded = normalize(Expr::var("x") + 1.0);
  CHECK(!interval_of(unbounded, mu).is_finite());
  CHECK_THROWS_AS(finite_interval_of(unbounded, mu, "test"), UnboundedInterval);
}

TEST_CASE("interval soundness on random affine forms") {
  std::mt19937 rng(11);
  auto frac = [&]() { return static_cast<double>(rng() % 1000) / 999.0; };
  for (int i = 0; i < 1000; ++i) {
    Model m;
    const int nvars = 1 + static_cast<int>(rng() % 4);
    std::vector<Expr> terms;
    for (int v = 0; v < nvars; ++v) {
      const std::string name = "x" + std::to_string(v);
      const double lo = -5.0 + 10.0 * frac();
      const double hi = lo + 10.0 * frac();
      m.vars.push_back({name, VarDomain::Continuous, lo, hi});
      terms.push_back((-4.0 + 8.0 * frac()) * Expr::var(name));
    }
    terms.push_back(Expr::constant(-3.0 + 6.0 * frac()));
    m.objective = Expr::constant(0);
    const Expr e = normalize(Expr::sum(terms));
    const Interval iv = interval_of(e, m);
    for (int s = 0; s < 100; ++s) {
      std::map<std::string, double> point;
      for (const auto& v : m.vars) point[v.name] = v.lower + (v.upper - v.lower) * frac();
      const double value = evaluate(e, point);
      CHECK(value >= iv.lo - 1e-9);
      CHECK(value <= iv.hi + 1e-9);
    }
  }
}

TEST_CASE("affine classification implies affine evaluation") {
  std::mt19937 rng(13);
  auto frac = [&]() { return static_cast<double>(rng() % 1000) / 999.0; };
  Model m = two_var_model(-20, 20, -20, 20);
  for (int i = 0; i < 200; ++i) {
    const Expr e = normalize((-4.0 + 8.0 * frac()) * Expr::var("x") +
                             (-4.0 + 8.0 * frac()) * Expr::var("y") +
                             Expr::constant(-2.0 + 4.0 * frac()));
    REQUIRE(affinity_of(e, m).kind != AffinityKind::NonlinearPattern);
    std::map<std::string, double> a{{"x", -3.0 + 6.0 * frac()}, {"y", -3.0 + 6.0 * frac()}};
    std::map<std::string, double> b{{"x", -3.0 + 6.0 * frac()}, {"y", -3.0 + 6.0 * frac()}};
    std::map<std::string, double> ab{{"x", a["x"] + b["x"]}, {"y", a["y"] + b["y"]}};
    std::map<std::string, double> zero{{"x", 0.0}, {"y", 0.0}};
    const double lhs = evaluate(e, ab) - evaluate(e, a) - evaluate(e, b) + evaluate(e, zero);
    CHECK(std::fabs(lhs) <= 1e-9);
  }
}
