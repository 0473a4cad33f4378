#include <algorithm>

#include "doctest.h"
#include "linform/detector.hpp"
#include "linform/errors.hpp"
#include "linform/generator.hpp"
#include "linform/normalize.hpp"
#include "linform/parser.hpp"

using namespace linform;

namespace {

Model parse_ok(const std::string& text) {
  const ParseResult r = parse_model(text);
  REQUIRE(r.ok());
  return *r.model;
}

}  // namespace

TEST_CASE("synergy knapsack objective yields one min instance") {
  const Model m = parse_ok(
      "var x1 binary\nvar x2 binary\nvar x3 binary\nparam b = 2\n"
      "maximize: 3*x1 + 4*x2 + 5*x3 + b*min(x1, x2)\n"
      "s.t. cap: 2*x1 + 3*x2 + 4*x3 <= 5\n");
  const auto instances = detect_patterns(m);
  REQUIRE(instances.size() == 1);
  CHECK(instances[0].kind == PatternKind::Min);
  REQUIRE(instances[0].args.size() == 2);
  CHECK(structurally_equal(instances[0].args[0], Expr::var("x1")));
  CHECK(structurally_equal(instances[0].args[1], Expr::var("x2")));
}

TEST_CASE("exp objective yields one monotone instance") {
  const Model m = parse_ok(
      "var x1 continuous [0, 10]\nvar x2 continuous [0, 10]\n"
      "minimize: exp(0.4*x1 + 0.6*x2)\n"
      "s.t. n1: 3*x1 + x2 >= 6\n");
  const auto instances = detect_patterns(m);
  REQUIRE(instances.size() == 1);
  CHECK(instances[0].kind == PatternKind::Monotone);
  CHECK(locus_to_string(instances[0].path, m) == "objective");
}

TEST_CASE("linear models detect nothing") {
  const Model m = parse_ok(
      "var x continuous [0, 5]\nvar y continuous [0, 5]\n"
      "minimize: 2*x + 3*y\ns.t. c: x + y >= 2\n");
  CHECK(detect_patterns(m).empty());
  CHECK(applicable_kinds(m).empty());
}

TEST_CASE("polarity: abs minimized is benign") {
  const Model m = parse_ok(
      "var x continuous [0, 10]\nminimize: 2*abs(x - 4)\n");
  const auto instances = detect_patterns(m);
  REQUIRE(instances.size() == 1);
  CHECK(instances[0].polarity == Polarity::Benign);
}

TEST_CASE("polarity: whole-side max <= r splits") {
  const Model m = parse_ok(
      "var x continuous [0, 10]\nvar y continuous [0, 10]\n"
      "minimize: x + y\ns.t. c: max(x + 1, y + 2) <= 8\n");
  const auto instances = detect_patterns(m);
  REQUIRE(instances.size() == 1);
  CHECK(instances[0].kind == PatternKind::Max);
  CHECK(instances[0].polarity == Polarity::ConstraintSplit);
}

TEST_CASE("polarity: min as a >=-side lower bound is adverse") {
  // the diet-style coupling: sum >= min(const, other sum)
  const Model m = parse_ok(
      "var x1 continuous [0, 8]\nvar x2 continuous [0, 8]\n"
      "minimize: 2*x1 + 3*x2\n"
      "s.t. n2: x1 + 5*x2 >= min(18, 4*x1 + 2*x2)\n");
  const auto instances = detect_patterns(m);
  REQUIRE(instances.size() == 1);
  CHECK(instances[0].kind == PatternKind::Min);
  CHECK(instances[0].polarity == Polarity::Adverse);
  CHECK(locus_to_string(instances[0].path, m) == "constraint[n2].rhs");
}

TEST_CASE("polarity: maximized min of binaries still reports an instance") {
  const Model m = parse_ok(
      "var a binary\nvar b binary\nmaximize: a + b + 2*min(a, b)\n");
  const auto instances = detect_patterns(m);
  REQUIRE(instances.size() == 1);
  CHECK(instances[0].kind == PatternKind::Min);
  CHECK(instances[0].polarity == Polarity::Benign);  // pressure pulls the min up
}

TEST_CASE("applicable kinds for a two-pattern model") {
  const Model m = parse_ok(
      "var x1 continuous [0, 8]\nvar x2 continuous [0, 8]\nparam B = 35\n"
      "minimize: abs(2*x1 + 3*x2 - B)\n"
      "s.t. n1: 4*x1 + 2*x2 >= min(20, 4*x1 + 2*x2)\n"
      "s.t. n1u: 4*x1 + 2*x2 <= 40\n");
  const auto kinds = applicable_kinds(m);
  CHECK(kinds == std::set<PatternKind>{PatternKind::Abs, PatternKind::Min});
}

TEST_CASE("fractional objective detects when the denominator is provably positive") {
  const Model m = parse_ok(
      "var x1 continuous [50, 1000]\nvar x2 continuous [50, 1000]\n"
      "minimize: (4.5*x1 + 6*x2) / (6.8*x1 + 8.2*x2)\n"
      "s.t. q: x1 + x2 = 1000\n");
  const auto kinds = applicable_kinds(m);
  CHECK(kinds == std::set<PatternKind>{PatternKind::LinearFractional});
}

TEST_CASE("fractional with a zero-reaching denominator is unsupported") {
  const Model m = parse_ok(
      "var x continuous [0, 4]\nminimize: (x + 1) / x\n");
  CHECK_THROWS_AS(detect_patterns(m), UnsupportedNonlinearity);
}

TEST_CASE("continuous products are unsupported") {
  const Model m = parse_ok(
      "var x continuous [0, 4]\nvar y continuous [0, 4]\nminimize: x*y\n");
  CHECK_THROWS_AS(detect_patterns(m), UnsupportedNonlinearity);
}

TEST_CASE("three-factor products are unsupported") {
  const Model m = parse_ok(
      "var a binary\nvar b binary\nvar c binary\nminimize: a*b*c\n");
  CHECK_THROWS_AS(detect_patterns(m), UnsupportedNonlinearity);
}

TEST_CASE("nested patterns are unsupported") {
  const Model m = parse_ok(
      "var x continuous [0, 4]\nvar y continuous [0, 4]\n"
      "minimize: abs(min(x, y))\n");
  CHECK_THROWS_AS(detect_patterns(m), UnsupportedNonlinearity);
}

TEST_CASE("monotone off the top level is unsupported") {
  const Model m = parse_ok(
      "var x continuous [0, 4]\nminimize: 1 + exp(x)\n");
  CHECK_THROWS_AS(detect_patterns(m), UnsupportedNonlinearity);
}

TEST_CASE("log of a possibly non-positive argument is unsupported") {
  const Model m = parse_ok(
      "var x continuous [0, 4]\nminimize: log(x)\n");
  CHECK_THROWS_AS(detect_patterns(m), UnsupportedNonlinearity);
}

TEST_CASE("unbounded continuous factor in a binary product is unsupported") {
  const Model m = parse_ok(
      "var b binary\nvar x continuous\nminimize: b*x\n");
  CHECK_THROWS_AS(detect_patterns(m), UnsupportedNonlinearity);
}

TEST_CASE("parameter products are never flagged") {
  Rng rng(321);
  for (int i = 0; i < 200; ++i) {
    Model m = gen_param_product_model(rng);
    CHECK(detect_patterns(m).empty());
  }
}

TEST_CASE("detection recovers planted instances exactly") {
  int checked = 0;
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const auto generated = gen_models(seed, 100);
    for (const auto& gen : generated) {
      const auto instances = detect_patterns(gen.model);
      std::vector<std::pair<std::string, std::string>> found, planted;
      for (const auto& inst : instances)
        found.emplace_back(kind_name(inst.kind), locus_to_string(inst.path, gen.model));
      for (const auto& p : gen.planted) planted.emplace_back(kind_name(p.kind), p.path);
      std::sort(found.begin(), found.end());
      std::sort(planted.begin(), planted.end());
      CHECK(found == planted);
      ++checked;
    }
  }
  CHECK(checked == 500);
}

TEST_CASE("detection json shape") {
  const Model m = parse_ok(
      "var x continuous [0, 10]\nminimize: 2*abs(x - 4)\n");
  const std::string json = detection_json(m);
  CHECK(json.find("\"kind\": \"abs\"") != std::string::npos);
  CHECK(json.find("\"polarity\": \"benign\"") != std::string::npos);
  CHECK(json.find("\"path\": \"objective.factor[1]\"") != std::string::npos);
}
