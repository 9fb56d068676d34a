#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vasco/constraints.hpp>

#include <algorithm>
#include <random>

#include "support/gen.hpp"

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

TEST_CASE("flow system on rw1: proportionality forces equal flow, zero effect") {
  VassMdp m = rw1();
  FlowSolution fs = maximal_flow_solution(m);
  CHECK(fs.flow[0] == fs.flow[1]);
  CHECK(fs.flow[0] > 0);
  CHECK(fs.strict_transitions == std::vector<int>{0, 1});
  CHECK(fs.strict_counters.empty());
  CHECK(net_effect(m, fs.flow) == std::vector<Rat>{Rat(0)});
}

TEST_CASE("flow system on expo1: everything grows") {
  VassMdp m = expo1();
  FlowSolution fs = maximal_flow_solution(m);
  CHECK(fs.strict_transitions == std::vector<int>{0, 1, 2, 3});
  CHECK(fs.strict_counters == std::vector<int>{0, 1});
  std::vector<Rat> eff = net_effect(m, fs.flow);
  CHECK(eff[0] > 0);
  CHECK(eff[1] > 0);
}

TEST_CASE("rank system on rw1: the counter itself is a rank function") {
  RankSolution rs = maximal_rank_solution(rw1());
  CHECK(rs.strict_counters == std::vector<int>{0});
  CHECK(rs.counter_weights[0] > 0);
  CHECK(rs.strict_nondet_transitions.empty());
  CHECK(rs.strict_prob_states.empty());  // expected rank change is zero
}

TEST_CASE("rank system on expo1: the loop pair blocks every weight") {
  RankSolution rs = maximal_rank_solution(expo1());
  CHECK(rs.counter_weights == std::vector<Int>{Int(0), Int(0)});
  CHECK(rs.state_offsets[0] == rs.state_offsets[1]);
  CHECK(rs.strict_counters.empty());
  CHECK(rs.strict_nondet_transitions.empty());
  CHECK(rs.strict_prob_states.empty());
}

TEST_CASE("dichotomy holds on the fixtures and fails when a side is zeroed") {
  VassMdp m = rw1();
  FlowSolution fs = maximal_flow_solution(m);
  RankSolution rs = maximal_rank_solution(m);
  CHECK(check_dichotomy(m, fs, rs));
  RankSolution zeroed = rs;
  zeroed.counter_weights[0] = 0;
  zeroed.strict_counters.clear();
  CHECK(!check_dichotomy(m, fs, zeroed));
  VassMdp e = expo1();
  CHECK(check_dichotomy(e, maximal_flow_solution(e), maximal_rank_solution(e)));
}

TEST_CASE("rank effects substitute exactly") {
  VassMdp m = rw1();
  RankFunction rf{{Int(1)}, {Int(0)}};
  CHECK(rank_effect(m, rf, 0) == Rat(1));
  CHECK(rank_effect(m, rf, 1) == Rat(-1));
  CHECK(expected_rank_effect(m, rf, 0) == Rat(0));
  VassMdp biased = parse_model(
      "counters: c\nstate p p\ntrans a p p : 1 @ 1/3\ntrans b p p : -1 @ 2/3\n");
  CHECK(expected_rank_effect(biased, rf, 0) == Rat(-1, 3));
}

TEST_CASE("maximal rank solutions never have positive rank effects") {
  std::mt19937_64 rng(431);
  for (int i = 0; i < 50; ++i) {
    VassMdp m = testgen::random_sc_model(rng);
    RankSolution rs = maximal_rank_solution(m);
    RankFunction rf{rs.counter_weights, rs.state_offsets};
    for (int t = 0; t < m.num_transitions(); ++t)
      if (!m.is_prob(m.transitions[t].src)) CHECK(rank_effect(m, rf, t) <= 0);
    for (int s = 0; s < m.num_states(); ++s)
      if (m.is_prob(s)) CHECK(expected_rank_effect(m, rf, s) <= 0);
  }
}

TEST_CASE("strict sets are stable under transition reordering") {
  std::mt19937_64 rng(432);
  for (int i = 0; i < 20; ++i) {
    VassMdp m = testgen::random_sc_model(rng);
    VassMdp perm = m;
    std::reverse(perm.transitions.begin(), perm.transitions.end());
    perm.finalize();
    auto names = [](const VassMdp& mm, const std::vector<int>& ts) {
      std::vector<std::string> out;
      for (int t : ts) out.push_back(mm.transitions[t].id);
      std::sort(out.begin(), out.end());
      return out;
    };
    FlowSolution a = maximal_flow_solution(m), b = maximal_flow_solution(perm);
    CHECK(a.strict_counters == b.strict_counters);
    CHECK(names(m, a.strict_transitions) == names(perm, b.strict_transitions));
    RankSolution ra = maximal_rank_solution(m), rb = maximal_rank_solution(perm);
    CHECK(ra.strict_counters == rb.strict_counters);
    CHECK(names(m, ra.strict_nondet_transitions) == names(perm, rb.strict_nondet_transitions));
    CHECK(ra.strict_prob_states == rb.strict_prob_states);
  }
}

TEST_CASE("dichotomy on random strongly connected models") {
  std::mt19937_64 rng(433);
  for (int i = 0; i < 50; ++i) {
    VassMdp m = testgen::random_sc_model(rng);
    CHECK(check_dichotomy(m, maximal_flow_solution(m), maximal_rank_solution(m)));
  }
}

}  // namespace
