#pragma once

#include "vasco/graph.hpp"
#include "vasco/model.hpp"

#include <utility>
#include <vector>

namespace vasco {

// Nonnegative rational flow over transitions with conservation at every
// state and probability proportionality at probabilistic states.
struct MultiComponent {
  std::vector<Rat> flow;  // per transition
};

MultiComponent to_multicomponent(const std::vector<Int>& flow);
bool is_multicomponent(const VassMdp& m, const MultiComponent& x);

MultiComponent mc_add(const MultiComponent& a, const MultiComponent& b);
MultiComponent mc_scale(const Rat& a, const MultiComponent& x);
// Componentwise difference; throws ValidationError if any entry goes negative.
MultiComponent mc_sub(const MultiComponent& a, const MultiComponent& b);

// Net counter effect sum(x(t) * update_t).
std::vector<Rat> effect(const VassMdp& m, const MultiComponent& x);

// A multi-component whose support is a MEC of the chain induced by picking
// one transition per nondeterministic state, normalized so the center state
// has outgoing flow exactly 1.
struct Component {
  MultiComponent flow;
  int center = -1;
  std::vector<std::pair<int, int>> selection;  // nondet state -> chosen transition
  EndComponent mec;                            // support of the flow
};

// All components: per MEC of m, every memoryless-deterministic selection of
// in-MEC choices, then every MEC of the induced chain, centered at its
// smallest state; deduplicated (support determines the flow). Throws
// AnalysisLimitError when the selection count exceeds the cap.
std::vector<Component> enumerate_components(const VassMdp& m, long long selection_cap = 1000000);

// Unique flow with conservation, proportionality, and unit outflow at the
// center, on the chain the selection induces over the given end component.
Component centered_flow(const VassMdp& m, const std::vector<std::pair<int, int>>& selection,
                        const EndComponent& mec, int center);

// Expected counter change per return to the center; equals the effect of the
// flow because flow(t) is the expected number of uses of t per return.
std::vector<Rat> expected_return_effect(const VassMdp& m, const Component& y);

enum class CounterVerdict { Increasing, Decreasing, ZeroBounded, ZeroUnbounded };

struct CounterBehavior {
  CounterVerdict verdict = CounterVerdict::ZeroBounded;
  Rat expected_effect;
};

// Sign of the expected effect; at zero, ZeroBounded iff a state potential
// explains every support transition's update on c (no cycle can drift).
CounterBehavior classify_counter_behavior(const VassMdp& m, const Component& y, int c);

// Restriction of the model to a component's support with rebuilt updates.
// Updates are multiplied by `scale` (the common denominator of the trend) so
// they stay integral; this changes nothing about signs, zero-boundedness, or
// which effects vanish.
struct ComponentModel {
  VassMdp model;
  std::vector<int> kept;  // new transition index -> original transition index
  Component comp;         // the component over `model`'s indexing
  Int scale;
};

// Trend removed: center-incoming transitions lose the expected return effect,
// so the component's effect in the new model is exactly zero on every counter.
ComponentModel hat_component(const VassMdp& m, const Component& y);
// Trend only: center-incoming transitions carry the expected return effect,
// every other transition carries zero.
ComponentModel co_hat_component(const VassMdp& m, const Component& y);

// Same support, flow rescaled to unit outflow at q.
Component recenter(const VassMdp& m, const Component& y, int q);

// Exact conical sum over the components of the support restriction: greedy
// subtraction of each component at its largest feasible coefficient. A
// nonzero residue after the full pass is impossible and raises InternalError.
std::vector<std::pair<Rat, Component>> conical_decomposition(const VassMdp& m,
                                                             const MultiComponent& x,
                                                             long long selection_cap = 1000000);

// Which detrended behavior
// qualifies a component when testing zero-boundedness of a multi-component.
enum class ZbMode { Literal, Bounded };

// True iff the effect on c is zero and x is a conical combination of
// components whose detrended version is ZeroUnbounded on c (Literal) or
// ZeroBounded on c (Bounded). Existence over the qualifying subset is decided
// by linear-programming feasibility.
bool zero_bounded_multicomponent(const VassMdp& m, const MultiComponent& x, int c, ZbMode mode,
                                 long long selection_cap = 1000000);

}  // namespace vasco
