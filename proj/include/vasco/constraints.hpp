#pragma once

#include "vasco/lp.hpp"
#include "vasco/model.hpp"

#include <vector>

namespace vasco {

// Maximal solution of the flow system: nonnegative transition flow with
// conservation at every state, proportionality at probabilistic states, and
// nonnegative net effect on every counter. "Strict" records which of the
// maximizable inequalities every optimal solution satisfies strictly.
struct FlowSolution {
  std::vector<Int> flow;                 // per transition
  std::vector<int> strict_counters;      // net effect > 0
  std::vector<int> strict_transitions;   // flow > 0
};

// Maximal solution of the rank system: nonnegative counter weights y and
// state offsets z such that every nondeterministic transition and every
// probabilistic state has nonpositive (expected) effect on the rank
// y . counters + z(state).
struct RankSolution {
  std::vector<Int> counter_weights;            // y, per counter
  std::vector<Int> state_offsets;              // z, per state
  std::vector<int> strict_counters;            // y > 0
  std::vector<int> strict_nondet_transitions;  // effect < 0
  std::vector<int> strict_prob_states;         // expected effect < 0
};

// Both builders accept models with dangling states (restrictions); such
// states simply contribute no constraints/flow. Solutions are integral: the
// per-inequality feasible solutions are summed and scaled by the common
// denominator, and the strict sets are re-derived from the sum. Closure of
// the systems under addition makes the strict sets independent of the
// particular optimal solution.
FlowSolution maximal_flow_solution(const VassMdp& m);
RankSolution maximal_rank_solution(const VassMdp& m);

// Net effect sum(flow(t) * update_t) per counter.
std::vector<Rat> net_effect(const VassMdp& m, const std::vector<Rat>& flow);
std::vector<Rat> net_effect(const VassMdp& m, const std::vector<Int>& flow);

// For every counter and every transition, a maximal solution pair certifies
// either growth (strict in the flow system) or a rank argument (strict in the
// rank system); false means the implementation broke an invariant.
bool check_dichotomy(const VassMdp& m, const FlowSolution& fs, const RankSolution& rs);

struct RankFunction {
  std::vector<Int> counter_weights;
  std::vector<Int> state_offsets;
};

// Effect of taking t on the rank value: z(dst) - z(src) + update . y.
Rat rank_effect(const VassMdp& m, const RankFunction& rf, int t);

// Probability-weighted effect over the outgoing transitions of a
// probabilistic state.
Rat expected_rank_effect(const VassMdp& m, const RankFunction& rf, int state);

}  // namespace vasco
