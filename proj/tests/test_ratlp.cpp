#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vasco/lp.hpp>
#include <vasco/rational.hpp>

#include <random>

#include "support/oracles.hpp"

using namespace vasco;

namespace {

TEST_CASE("rational parsing and printing") {
  CHECK(*rat_from_string("2/4") == Rat(1, 2));
  CHECK(*rat_from_string("-6/4") == Rat(-3, 2));
  CHECK(*rat_from_string("7") == Rat(7));
  CHECK(!rat_from_string("1/0"));
  CHECK(!rat_from_string("a/b"));
  CHECK(!rat_from_string(""));
  CHECK(rat_to_string(Rat(3)) == "3");
  CHECK(rat_to_string(Rat(-1, 3)) == "-1/3");
  CHECK(rat_to_fraction_string(Rat(1)) == "1/1");
}

TEST_CASE("scale_to_integers uses the denominator lcm") {
  std::vector<Rat> v{Rat(1, 2), Rat(1, 3), Rat(5)};
  std::vector<Int> s = scale_to_integers(v);
  CHECK(s == std::vector<Int>{Int(3), Int(2), Int(30)});
  Int l = lcm_of_denominators(v);
  CHECK(l == 6);
  for (size_t i = 0; i < v.size(); ++i) CHECK(Rat(s[i]) / Rat(l) == v[i]);
}

TEST_CASE("simplex on pinned programs") {
  LinearProgram lp;
  lp.add_var(Rat(0));
  lp.objective = {Rat(1)};
  lp.add_row({Rat(1)}, Rel::Le, Rat(3));
  LpResult r = lp_solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == Rat(3));

  lp.rows[0].rhs = Rat(-1);  // x >= 0 and x <= -1
  CHECK(lp_solve(lp).status == LpStatus::Infeasible);

  LinearProgram ub;
  ub.add_var(Rat(0));
  ub.objective = {Rat(1)};
  LpResult u = lp_solve(ub);
  REQUIRE(u.status == LpStatus::Unbounded);
  REQUIRE(u.ray.size() == 1);
  CHECK(u.ray[0] > 0);
}

TEST_CASE("free variables and equalities") {
  // min x - y subject to x + y = 2, x - y >= -4, both free
  LinearProgram lp;
  lp.add_var();
  lp.add_var();
  lp.objective = {Rat(1), Rat(-1)};
  lp.maximize = false;
  lp.add_row({Rat(1), Rat(1)}, Rel::Eq, Rat(2));
  lp.add_row({Rat(1), Rat(-1)}, Rel::Ge, Rat(-4));
  LpResult r = lp_solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == Rat(-4));
  CHECK(r.point[0] + r.point[1] == Rat(2));
}

TEST_CASE("optimal points satisfy every row exactly") {
  std::mt19937_64 rng(421);
  for (int i = 0; i < 60; ++i) {
    LinearProgram lp = oracle::random_bounded_lp(rng);
    LpResult r = lp_solve(lp);
    if (r.status != LpStatus::Optimal) continue;
    Rat obj(0);
    for (int v = 0; v < lp.num_vars; ++v) obj += lp.objective[v] * r.point[v];
    CHECK(obj == r.value);
    for (const LpRow& row : lp.rows) {
      Rat lhs(0);
      for (int v = 0; v < lp.num_vars; ++v) lhs += row.coeffs[v] * r.point[v];
      if (row.rel == Rel::Le) CHECK(lhs <= row.rhs);
      if (row.rel == Rel::Ge) CHECK(lhs >= row.rhs);
      if (row.rel == Rel::Eq) CHECK(lhs == row.rhs);
    }
    for (int v = 0; v < lp.num_vars; ++v) CHECK(r.point[v] >= 0);
  }
}

TEST_CASE("simplex agrees with vertex enumeration") {
  std::mt19937_64 rng(422);
  for (int i = 0; i < 200; ++i) {
    LinearProgram lp = oracle::random_bounded_lp(rng);
    LpResult r = lp_solve(lp);
    std::optional<Rat> best = oracle::vertex_enumeration_optimum(lp);
    REQUIRE(r.status != LpStatus::Unbounded);  // the box row forbids it
    if (r.status == LpStatus::Optimal) {
      REQUIRE(best.has_value());
      CHECK(r.value == *best);
    } else {
      CHECK(!best.has_value());
    }
  }
}

TEST_CASE("lp_solve is deterministic") {
  std::mt19937_64 rng(423);
  LinearProgram lp = oracle::random_bounded_lp(rng);
  LpResult a = lp_solve(lp);
  LpResult b = lp_solve(lp);
  CHECK(a.status == b.status);
  CHECK(a.point == b.point);
}

TEST_CASE("linear system solver status trichotomy") {
  using Rows = std::vector<std::pair<std::vector<Rat>, Rat>>;
  LinSolveResult u = solve_linear_system(2, Rows{{{Rat(1), Rat(1)}, Rat(3)},
                                                 {{Rat(1), Rat(-1)}, Rat(1)}});
  REQUIRE(u.status == LinSolve::Unique);
  CHECK(u.x == std::vector<Rat>{Rat(2), Rat(1)});
  CHECK(solve_linear_system(2, Rows{{{Rat(1), Rat(1)}, Rat(3)},
                                    {{Rat(2), Rat(2)}, Rat(7)}}).status ==
        LinSolve::Inconsistent);
  CHECK(solve_linear_system(2, Rows{{{Rat(1), Rat(1)}, Rat(3)}}).status ==
        LinSolve::Underdetermined);
}

TEST_CASE("lp statistics accumulate and reset") {
  lp_stats_reset();
  CHECK(lp_stats().solves == 0);
  LinearProgram lp;
  lp.add_var(Rat(0));
  lp.objective = {Rat(1)};
  lp.add_row({Rat(1)}, Rel::Le, Rat(1));
  lp_solve(lp);
  CHECK(lp_stats().solves == 1);
  lp_stats_reset();
  CHECK(lp_stats().solves == 0);
}

}  // namespace
