#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vasco/components.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "support/oracles.hpp"

using namespace vasco;

namespace {

VassMdp rw1() {
  return parse_model(
      "counters: c\nstate p p\ntrans t_plus p p : 1 @ 1/2\ntrans t_minus p p : -1 @ 1/2\n");
}

VassMdp expo1() {
  return parse_model(
      "counters: x y\nstate p n\nstate q n\ntrans t1 p p : -1 2\ntrans t2 p q : 0 0\n"
      "trans t3 q q : 2 -1\ntrans t4 q p : 0 0\n");
}

std::set<std::set<int>> supports(const std::vector<Component>& cs) {
  std::set<std::set<int>> out;
  for (const Component& c : cs) {
    std::set<int> s;
    for (size_t t = 0; t < c.flow.flow.size(); ++t)
      if (c.flow.flow[t] > 0) s.insert(static_cast<int>(t));
    out.insert(s);
  }
  return out;
}

TEST_CASE("multi-component algebra is exact") {
  MultiComponent a{{Rat(1), Rat(1)}}, b{{Rat(2), Rat(2)}};
  CHECK(mc_add(a, b).flow == std::vector<Rat>{Rat(3), Rat(3)});
  CHECK(mc_scale(Rat(1, 2), b).flow == std::vector<Rat>{Rat(1), Rat(1)});
  CHECK(mc_sub(b, a).flow == std::vector<Rat>{Rat(1), Rat(1)});
  CHECK_THROWS_AS(mc_sub(a, b), ValidationError);
}

TEST_CASE("effect of the symmetric walk flow is zero") {
  VassMdp m = rw1();
  MultiComponent x{{Rat(1), Rat(1)}};
  CHECK(is_multicomponent(m, x));
  CHECK(effect(m, x) == std::vector<Rat>{Rat(0)});
  MultiComponent bad{{Rat(1), Rat(2)}};  // breaks proportionality
  CHECK(!is_multicomponent(m, bad));
}

TEST_CASE("effect of the expo1 unit cycle flow") {
  MultiComponent x{{Rat(1), Rat(1), Rat(1), Rat(1)}};
  CHECK(effect(expo1(), x) == std::vector<Rat>{Rat(1), Rat(1)});
}

TEST_CASE("rw1 has exactly one component, the stationary distribution") {
  VassMdp m = rw1();
  std::vector<Component> cs = enumerate_components(m);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].center == 0);
  CHECK(cs[0].flow.flow == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
  CHECK(expected_return_effect(m, cs[0]) == std::vector<Rat>{Rat(0)});
}

TEST_CASE("expo1 components are the two loops and the crossing cycle") {
  std::vector<Component> cs = enumerate_components(expo1());
  std::set<std::set<int>> sup = supports(cs);
  CHECK(sup.count({0}));     // the t1 loop at p
  CHECK(sup.count({2}));     // the t3 loop at q
  CHECK(sup.count({1, 3}));  // the p->q->p crossing
  CHECK(sup.size() == cs.size());  // deduplicated by support
}

TEST_CASE("centered flow solves the return equations") {
  VassMdp m = rw1();
  MecDecomposition d = mec_decomposition(m);
  Component y = centered_flow(m, {}, d.mecs[0], 0);
  CHECK(y.flow.flow == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
}

TEST_CASE("counter behaviors on the fixtures") {
  VassMdp m = rw1();
  Component y = enumerate_components(m)[0];
  CounterBehavior cb = classify_counter_behavior(m, y, 0);
  CHECK(cb.verdict == CounterVerdict::ZeroUnbounded);
  CHECK(cb.expected_effect == Rat(0));

  VassMdp e = expo1();
  for (const Component& c : enumerate_components(e)) {
    if (c.flow.flow[0] <= 0) continue;  // want the t1 loop
    if (c.flow.flow[1] > 0) continue;
    CHECK(classify_counter_behavior(e, c, 0).verdict == CounterVerdict::Decreasing);
    CHECK(classify_counter_behavior(e, c, 1).verdict == CounterVerdict::Increasing);
  }
}

TEST_CASE("hat components have exactly zero effect") {
  std::mt19937_64 rng(441);
  for (int i = 0; i < 15; ++i) {
    VassMdp m = testgen::random_sc_model(rng, 2, 3, 6);
    for (const Component& y : enumerate_components(m)) {
      ComponentModel hat = hat_component(m, y);
      for (const Rat& e : effect(hat.model, hat.comp.flow)) CHECK(e == Rat(0));
      ComponentModel co = co_hat_component(m, y);
      std::vector<Rat> trend = expected_return_effect(m, y);
      std::vector<Rat> coeff = effect(co.model, co.comp.flow);
      for (size_t c = 0; c < trend.size(); ++c) CHECK(coeff[c] == trend[c] * Rat(co.scale));
    }
  }
}

TEST_CASE("recentering keeps the support and rescales the flow") {
  VassMdp e = expo1();
  for (const Component& c : enumerate_components(e)) {
    if (c.flow.flow[1] <= 0) continue;  // the crossing cycle
    Component r = recenter(e, c, 1);
    CHECK(r.center == 1);
    Rat outflow(0);
    for (int t : e.out[1]) outflow += r.flow.flow[t];
    CHECK(outflow == Rat(1));
    for (size_t t = 0; t < c.flow.flow.size(); ++t)
      CHECK((c.flow.flow[t] > 0) == (r.flow.flow[t] > 0));
  }
}

TEST_CASE("conical decomposition reconstructs random sums exactly") {
  std::mt19937_64 rng(442);
  int done = 0;
  while (done < 100) {
    VassMdp m = testgen::random_sc_model(rng, 2, 4, 7);
    std::vector<Component> cs;
    try {
      cs = enumerate_components(m);
    } catch (const AnalysisLimitError&) {
      continue;
    }
    if (cs.empty()) continue;
    MultiComponent x;
    x.flow.assign(m.num_transitions(), Rat(0));
    bool nonzero = false;
    for (const Component& y : cs) {
      Rat a(testgen::draw(rng, 0, 5));
      if (a != 0) nonzero = true;
      x = mc_add(x, mc_scale(a, y.flow));
    }
    if (!nonzero) continue;
    std::vector<std::pair<Rat, Component>> parts = conical_decomposition(m, x);
    MultiComponent back;
    back.flow.assign(m.num_transitions(), Rat(0));
    for (const auto& [coeff, y] : parts) back = mc_add(back, mc_scale(coeff, y.flow));
    CHECK(back.flow == x.flow);
    ++done;
  }
}

TEST_CASE("zero-bounded verdicts match simple-cycle enumeration") {
  std::mt19937_64 rng(443);
  int checked = 0;
  while (checked < 100) {
    VassMdp m = testgen::random_sc_model(rng, 2, 6, 9);
    std::vector<Component> cs;
    try {
      cs = enumerate_components(m);
    } catch (const AnalysisLimitError&) {
      continue;
    }
    for (const Component& y : cs) {
      for (int c = 0; c < m.num_counters(); ++c) {
        bool cycles_zero = oracle::all_support_cycles_zero(m, y, c);
        CounterVerdict v = classify_counter_behavior(m, y, c).verdict;
        CHECK((v == CounterVerdict::ZeroBounded) == cycles_zero);
      }
      ++checked;
    }
  }
}

TEST_CASE("the +1/-1 two-cycle splits the zero-boundedness modes") {
  VassMdp m = parse_model(
      "counters: c\nstate p n\nstate q n\ntrans up p q : 1\ntrans down q p : -1\n");
  MultiComponent x{{Rat(1), Rat(1)}};
  CHECK(!zero_bounded_multicomponent(m, x, 0, ZbMode::Literal));
  CHECK(zero_bounded_multicomponent(m, x, 0, ZbMode::Bounded));
}

TEST_CASE("selection cap trips the analysis guard") {
  VassMdp e = expo1();
  CHECK_THROWS_AS(enumerate_components(e, 1), AnalysisLimitError);
}

}  // namespace
