#include <cmath>

#include "doctest.h"
#include "linform/eval.hpp"
#include "linform/generator.hpp"
#include "linform/normalize.hpp"
#include "linform/solver.hpp"
#include "support/oracles.hpp"

using namespace linform;

TEST_CASE("knapsack optimum equals exhaustive enumeration") {
  // 4 items, W = 7, v = (3,4,5,6), w = (2,3,4,5)
  Model m;
  const double values[] = {3, 4, 5, 6};
  const double weights[] = {2, 3, 4, 5};
  std::vector<Expr> obj, cap;
  for (int i = 0; i < 4; ++i) {
    const std::string name = "x" + std::to_string(i);
    m.vars.push_back({name, VarDomain::Binary, 0, 1});
    obj.push_back(values[i] * Expr::var(name));
    cap.push_back(weights[i] * Expr::var(name));
  }
  m.sense = Sense::Maximize;
  m.objective = Expr::sum(obj);
  m.constraints.push_back({"cap", Expr::sum(cap), Rel::Le, Expr::constant(7.0)});
  m = normalize_model(std::move(m));

  const Solution ref = testing::exhaustive_milp(m);  // 2^4 cases
  REQUIRE(ref.status == SolveStatus::Optimal);
  CHECK(ref.objective == doctest::Approx(9.0));

  const Solution s = solve_milp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(ref.objective));
}

TEST_CASE("single feasible point is returned") {
  Model m;
  m.vars.push_back({"a", VarDomain::Binary, 0, 1});
  m.vars.push_back({"b", VarDomain::Binary, 0, 1});
  m.sense = Sense::Minimize;
  m.objective = normalize(Expr::var("a") + Expr::var("b"));
  m.constraints.push_back({"c0", Expr::var("a"), Rel::Eq, Expr::constant(1.0)});
  m.constraints.push_back({"c1", normalize(Expr::var("a") + Expr::var("b")), Rel::Ge,
                           Expr::constant(2.0)});
  const Solution s = solve_milp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.assignment.at("a") == doctest::Approx(1.0));
  CHECK(s.assignment.at("b") == doctest::Approx(1.0));
}

TEST_CASE("integral transportation polytope solves at the root") {
  // supplies (5, 7), demands (4, 8); integral vertices
  Model m;
  for (const char* name : {"x00", "x01", "x10", "x11"})
    m.vars.push_back({name, VarDomain::Integer, 0, 12});
  m.sense = Sense::Minimize;
  m.objective = normalize(2.0 * Expr::var("x00") + 3.0 * Expr::var("x01") +
                          4.0 * Expr::var("x10") + 1.0 * Expr::var("x11"));
  m.constraints.push_back({"s0", normalize(Expr::var("x00") + Expr::var("x01")), Rel::Eq,
                           Expr::constant(5.0)});
  m.constraints.push_back({"s1", normalize(Expr::var("x10") + Expr::var("x11")), Rel::Eq,
                           Expr::constant(7.0)});
  m.constraints.push_back({"d0", normalize(Expr::var("x00") + Expr::var("x10")), Rel::Eq,
                           Expr::constant(4.0)});
  m.constraints.push_back({"d1", normalize(Expr::var("x01") + Expr::var("x11")), Rel::Eq,
                           Expr::constant(8.0)});
  const Solution s = solve_milp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  const Solution ref = testing::exhaustive_milp(m);
  CHECK(s.objective == doctest::Approx(ref.objective));
}

TEST_CASE("branch and bound matches exhaustive enumeration") {
  Rng rng(501);
  int optimal = 0;
  for (int i = 0; i < 300; ++i) {
    const Model m = gen_random_milp(rng, 12);
    const Solution mine = solve_milp(m);
    const Solution ref = testing::exhaustive_milp(m);
    REQUIRE(mine.status == ref.status);
    if (mine.status == SolveStatus::Optimal) {
      ++optimal;
      CHECK(std::fabs(mine.objective - ref.objective) <= 1e-9);
      CHECK(max_violation(m, mine.assignment) <= 1e-7);
      for (const auto& v : m.vars) {
        if (v.domain == VarDomain::Continuous) continue;
        const double x = mine.assignment.at(v.name);
        CHECK(std::fabs(x - std::round(x)) <= 1e-6);
      }
    }
  }
  CHECK(optimal > 200);
}
