#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vasco/simulator.hpp>

#include <cmath>

using namespace vasco;

namespace {

VassMdp rw1() {
  return parse_model(
      "counters: c\nstate p p\ntrans t_plus p p : 1 @ 1/2\ntrans t_minus p p : -1 @ 1/2\n");
}

VassMdp drain() {
  return parse_model("counters: c\nstate p n\ntrans t p p : -1\n");
}

VassMdp expo1() {
  return parse_model(
      "counters: x y\nstate p n\nstate q n\ntrans t1 p p : -1 2\ntrans t2 p q : 0 0\n"
      "trans t3 q q : 2 -1\ntrans t4 q p : 0 0\n");
}

TEST_CASE("the drain trajectory is fully determined") {
  TrajectoryStats s = run_trajectory(drain(), Strategy::uniform(), 5, 1000, 42);
  CHECK(s.terminated);
  CHECK(s.steps == 6);  // the killing step is counted
  CHECK(s.max_counter == std::vector<long long>{5});
  CHECK(s.transition_count == std::vector<long long>{6});
}

TEST_CASE("trajectories replay exactly under the same seed") {
  VassMdp m = rw1();
  for (uint64_t seed : {1ull, 7ull, 12345ull}) {
    TrajectoryStats a = run_trajectory(m, Strategy::uniform(), 50, 100000, seed);
    TrajectoryStats b = run_trajectory(m, Strategy::uniform(), 50, 100000, seed);
    CHECK(a.terminated == b.terminated);
    CHECK(a.steps == b.steps);
    CHECK(a.max_counter == b.max_counter);
    CHECK(a.transition_count == b.transition_count);
  }
}

TEST_CASE("distinct seeds explore distinct runs") {
  VassMdp m = rw1();
  TrajectoryStats a = run_trajectory(m, Strategy::uniform(), 50, 100000, 1);
  TrajectoryStats b = run_trajectory(m, Strategy::uniform(), 50, 100000, 2);
  CHECK(a.steps != b.steps);  // astronomically unlikely to collide
}

TEST_CASE("drain quantiles are exactly n plus one at every p") {
  VassMdp m = drain();
  for (const Rat& p : {Rat(1, 10), Rat(1, 2), Rat(9, 10), Rat(99, 100)})
    for (uint64_t seed : {1ull, 9ull}) {
      FpEstimate e = estimate_fp(m, Strategy::uniform(), Observable::length(), p, {8, 16, 32},
                                 30, 100000, seed);
      for (const FpPoint& pt : e.points) {
        REQUIRE(pt.value.has_value());
        CHECK(*pt.value == pt.n + 1);
        CHECK(pt.censored == 0);
      }
    }
}

TEST_CASE("quantiles are monotone in p on shared data") {
  VassMdp m = rw1();
  std::vector<long long> last;
  for (const Rat& p : {Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(9, 10)}) {
    FpEstimate e =
        estimate_fp(m, Strategy::uniform(), Observable::length(), p, {16, 32}, 40, 200000, 5);
    std::vector<long long> vals;
    for (const FpPoint& pt : e.points) {
      REQUIRE(pt.value.has_value());
      vals.push_back(*pt.value);
    }
    if (!last.empty())
      for (size_t i = 0; i < vals.size(); ++i) CHECK(vals[i] >= last[i]);
    last = vals;
  }
}

TEST_CASE("censoring is conservative: a bigger budget only resolves upward ranks") {
  // Censored trials rank as +infinity, so extending the budget replaces those
  // ranks with finite values: finite length quantiles are untouched (resolved
  // lengths exceed the old budget) and counter quantiles can only drop.
  VassMdp m = rw1();
  for (Observable obs : {Observable::length(), Observable::counter("c")}) {
    FpEstimate tight =
        estimate_fp(m, Strategy::uniform(), obs, Rat(1, 2), {16, 32}, 40, 2000, 11);
    FpEstimate loose =
        estimate_fp(m, Strategy::uniform(), obs, Rat(1, 2), {16, 32}, 40, 200000, 11);
    for (size_t i = 0; i < tight.points.size(); ++i) {
      CHECK(loose.points[i].censored <= tight.points[i].censored);
      if (!tight.points[i].value) continue;
      REQUIRE(loose.points[i].value.has_value());
      if (obs.kind == Observable::Kind::Length)
        CHECK(*loose.points[i].value == *tight.points[i].value);
      else
        CHECK(*loose.points[i].value <= *tight.points[i].value);
    }
  }
}

TEST_CASE("the shared-pass estimator equals the single-target calls") {
  VassMdp m = rw1();
  std::vector<Observable> targets = {Observable::length(), Observable::counter("c"),
                                     Observable::transition("t_plus")};
  std::vector<FpEstimate> multi =
      estimate_fp_multi(m, Strategy::uniform(), targets, Rat(3, 4), {8, 16}, 40, 100000, 21);
  REQUIRE(multi.size() == 3);
  for (size_t i = 0; i < targets.size(); ++i) {
    FpEstimate single =
        estimate_fp(m, Strategy::uniform(), targets[i], Rat(3, 4), {8, 16}, 40, 100000, 21);
    REQUIRE(multi[i].points.size() == single.points.size());
    for (size_t j = 0; j < single.points.size(); ++j) {
      CHECK(multi[i].points[j].value == single.points[j].value);
      CHECK(multi[i].points[j].censored == single.points[j].censored);
    }
  }
}

TEST_CASE("a grid point with every trial censored is an analysis error") {
  CHECK_THROWS_AS(estimate_fp(rw1(), Strategy::uniform(), Observable::length(), Rat(1, 2),
                              {1000}, 30, 10, 1),
                  AnalysisLimitError);
}

TEST_CASE("estimate_fp validates its inputs") {
  VassMdp m = rw1();
  CHECK_THROWS_AS(estimate_fp(m, Strategy::uniform(), Observable::length(), Rat(0), {8}, 30,
                              1000, 1),
                  ValidationError);
  CHECK_THROWS_AS(estimate_fp(m, Strategy::uniform(), Observable::length(), Rat(1), {8}, 30,
                              1000, 1),
                  ValidationError);
  CHECK_THROWS_AS(estimate_fp(m, Strategy::uniform(), Observable::length(), Rat(1, 2), {8}, 10,
                              1000, 1),
                  ValidationError);  // too few trials
  CHECK_THROWS_AS(estimate_fp(m, Strategy::uniform(), Observable::counter("nope"), Rat(1, 2),
                              {8}, 30, 1000, 1),
                  ValidationError);
}

TEST_CASE("strategies are validated against the model") {
  VassMdp e = expo1();
  CHECK_THROWS_AS(run_trajectory(e, Strategy::fixed({{0, 0}}), 5, 100, 1), ValidationError);
  CHECK_THROWS_AS(run_trajectory(e, Strategy::fixed({{0, 2}, {1, 2}}), 5, 100, 1),
                  ValidationError);  // t3 does not leave state p
  CHECK_THROWS_AS(run_trajectory(e, Strategy::phased({}), 5, 100, 1), ValidationError);
  CHECK_THROWS_AS(run_trajectory(e, Strategy::phased({{{{0, 0}, {1, 2}}, 0}}), 5, 100, 1),
                  ValidationError);  // zero budget
  TrajectoryStats ok = run_trajectory(e, Strategy::fixed({{0, 0}, {1, 2}}), 5, 100, 1);
  CHECK(ok.terminated);  // t1 alone drives x negative
  CHECK(ok.steps == 6);
}

TEST_CASE("overflow guard rejects runaway budgets") {
  VassMdp m = parse_model("counters: c\nstate p n\ntrans t p p : 4000000000000000000\n");
  CHECK_THROWS_AS(run_trajectory(m, Strategy::uniform(), 1, 10, 1), ValidationError);
}

TEST_CASE("phased schedules alternate and wrap") {
  VassMdp e = expo1();
  // pump y at p, then cross and pump x at q
  Strategy sched = Strategy::phased({
      {{{0, 0}, {1, 3}}, 5},  // t1 five times
      {{{0, 1}, {1, 2}}, 6},  // t2 once, then t3
  });
  TrajectoryStats s = run_trajectory(e, sched, 5, 11, 99);
  CHECK(!s.terminated);
  CHECK(s.transition_count == std::vector<long long>{5, 1, 5, 0});
  CHECK(s.max_counter == std::vector<long long>{10, 15});  // x: 2*5 after drain; y: 5+10
}

TEST_CASE("exponent fitting recovers exact power laws") {
  std::vector<std::pair<double, double>> pts;
  for (double n : {8.0, 16.0, 32.0, 64.0}) pts.push_back({n, 3.0 * n * n});
  ExponentFit f = fit_exponent(pts);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(f.std_error == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(f.points_used == 4);

  CHECK_THROWS_AS(fit_exponent({{8.0, 1.0}, {16.0, 2.0}}), ValidationError);
  CHECK_THROWS_AS(fit_exponent({{8.0, 1.0}, {8.0, 2.0}, {16.0, 3.0}}), ValidationError);
  CHECK_THROWS_AS(fit_exponent({{8.0, -1.0}, {16.0, 2.0}, {32.0, 3.0}}), ValidationError);
}

TEST_CASE("the symmetric walk fits a quadratic length and linear counter") {
  // the 0.9 length quantile sits near 64n^2 with a heavy tail, so the fit
  // needs a wide grid, enough trials, and a budget above the n=128 quantile
  VassMdp m = rw1();
  FpEstimate len = estimate_fp(m, Strategy::uniform(), Observable::length(), Rat(9, 10),
                               {8, 32, 128}, 300, 2500000, 3);
  REQUIRE(len.fit.has_value());
  CHECK(std::abs(len.fit->slope - 2.0) < 0.35);
  FpEstimate cnt = estimate_fp(m, Strategy::uniform(), Observable::counter("c"), Rat(9, 10),
                               {8, 32, 128}, 300, 2500000, 3);
  REQUIRE(cnt.fit.has_value());
  CHECK(std::abs(cnt.fit->slope - 1.0) < 0.35);
}

TEST_CASE("report validation on a deterministic model is exact") {
  VassMdp m = drain();
  ClassificationResult report = full_classification(m);
  ValidationBudget budget;
  budget.n_grid = {8, 16, 32};
  budget.trials = 30;
  budget.max_steps = 1000;
  budget.seed = 17;
  std::vector<ItemValidation> items = validate_report(m, report, budget);
  REQUIRE(!items.empty());
  for (const ItemValidation& iv : items) CHECK(iv.outcome == ValidationOutcome::Pass);

  ClassificationResult lie = report;
  lie.counter_est[0].degree = 3;  // claim the counter is cubic
  std::vector<ItemValidation> bad = validate_report(m, lie, budget);
  bool failed = false;
  for (const ItemValidation& iv : bad)
    if (iv.target.kind == Observable::Kind::Counter && iv.outcome == ValidationOutcome::Fail)
      failed = true;
  CHECK(failed);
}

TEST_CASE("report validation confirms the symmetric walk's claims") {
  VassMdp m = rw1();
  ClassificationResult report = full_classification(m);
  ValidationBudget budget;
  budget.n_grid = {8, 32, 128};  // quantile noise is heavy-tailed: keep the grid wide
  budget.trials = 300;
  budget.max_steps = 2500000;
  budget.seed = 17;
  std::vector<ItemValidation> items = validate_report(m, report, budget);
  REQUIRE(items.size() == 3);
  for (const ItemValidation& iv : items) CHECK(iv.outcome == ValidationOutcome::Pass);
}

TEST_CASE("doubling models validate through a phased schedule") {
  VassMdp e = expo1();
  ClassificationResult report = full_classification(e);
  ValidationBudget budget;
  budget.n_grid = {4, 6, 8, 10, 12};
  budget.trials = 30;
  budget.max_steps = 20000;
  budget.seed = 23;
  // tuned to n = 12: each phase empties one counter into the other
  budget.extra.push_back(Strategy::phased({
      {{{0, 0}, {1, 3}}, 12},
      {{{0, 1}, {1, 2}}, 37},
      {{{0, 0}, {1, 3}}, 73},
      {{{0, 1}, {1, 2}}, 145},
      {{{0, 0}, {1, 3}}, 289},
      {{{0, 1}, {1, 2}}, 577},
  }));
  std::vector<ItemValidation> items = validate_report(e, report, budget);
  int passes = 0;
  for (const ItemValidation& iv : items) {
    CHECK(iv.outcome != ValidationOutcome::Fail);  // exponential checks are one-sided
    if (iv.outcome == ValidationOutcome::Pass) ++passes;
  }
  CHECK(passes > 0);
}

}  // namespace
