#pragma once

#include "vasco/components.hpp"
#include "vasco/constraints.hpp"
#include "vasco/graph.hpp"
#include "vasco/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vasco {

// TightPoly/LowerPoly/ExponentialLower/CapReached come out of the MDP
// pipeline (LowerPoly only while work is unresolved); Unbounded/ThetaN/ThetaN2
// are the Markov-chain verdicts.
enum class VerdictKind { TightPoly, LowerPoly, ExponentialLower, CapReached, Unbounded, ThetaN, ThetaN2 };

struct Estimate {
  VerdictKind kind = VerdictKind::LowerPoly;
  int degree = 1;  // polynomial degree for *Poly/CapReached, unused otherwise
  std::string provenance;
};

struct ClassifierOptions {
  int max_k = 16;
  ZbMode zb_mode = ZbMode::Literal;
  long long component_cap = 1000000;
};

// Working classification state. Items are either tight at `degree` or carry
// `degree` as a proven lower bound; every unresolved item sits at the same
// frontier degree (each step either closes an item or advances it).
struct ClassifierState {
  struct Item {
    bool tight = false;
    int degree = 1;
    std::string provenance = "every measure grows at least linearly";
  };
  std::vector<Item> counters;
  std::vector<Item> transitions;

  static ClassifierState fresh(const VassMdp& m);

  std::vector<int> transitions_at_least(int i) const;  // lower degree >= i
  std::vector<int> counters_tight_at(int j) const;
  std::vector<int> tight_counter_degrees() const;
  std::vector<int> tight_transition_degrees() const;
  std::optional<int> frontier() const;  // shared degree of unresolved items
  bool all_classified() const;
};

// One counter of a layered model: either a global original counter, or a
// local copy scoped to the transitions of one MEC of a coarser restriction.
struct LayerCounter {
  std::string name;
  int original = 0;
  std::optional<int> tight_degree;  // classification of the original, if any
  std::vector<char> scope;          // per base transition: does it act here?
};

// Base states and transitions with the counter table rebuilt: counters tight
// at degree j < i split into local copies per MEC of the restriction to
// transitions of lower degree >= i - j; everything else stays global.
struct LayeredModel {
  VassMdp model;
  int index = 1;
  std::vector<LayerCounter> counters;
  std::vector<std::optional<int>> global_of;  // base counter -> layer index
};

LayeredModel build_layer(const VassMdp& m, int i, const ClassifierState& st);
// Limit of the construction: every scope restriction converges to the set of
// still-unresolved transitions.
LayeredModel build_layer_infinity(const VassMdp& m, const ClassifierState& st);

// Transitions that can move the rank certificate of the depth-(k-l) layer
// restricted to transitions of degree >= k-l+1 and projected onto counters
// tight at degree <= l: nondeterministic transitions with nonzero rank
// effect, and whole bundles of probabilistic states whose expected effect or
// any single branch effect is nonzero. Returned in base transition ids.
std::vector<int> compute_R_set(const VassMdp& m, const ClassifierState& st, int l, int k);

struct StepOutcome {
  int k = 0;
  std::vector<int> x_values;                 // processed rank-projection depths
  std::vector<int> newly_tight_transitions;  // closed by the R-set union
  std::optional<int> t_star;
  std::vector<int> upper_counters;
  std::vector<int> upper_transitions;
  std::vector<int> lower_counters;
  std::vector<int> lower_transitions;
  std::vector<std::string> notes;
  std::string signature;  // structural fingerprint, used to detect stabilization
  bool progressed = false;
};

StepOutcome classify_step_k(const VassMdp& m, int k, ClassifierState& st,
                            const ClassifierOptions& opts);

struct CandidateSets {
  std::vector<int> aset;  // tight counter degrees
  std::vector<int> bset;  // tight transition degrees plus the open frontier
  std::vector<int> x1;
  std::vector<int> x2;
  std::vector<int> all;   // sorted union, values <= cap
};

CandidateSets candidate_sets(const ClassifierState& st, int cap);
std::vector<int> candidate_ks(const ClassifierState& st, int cap);

// True iff every counter either strictly grows under x or has all per-MEC
// restrictions of x zero-bounded on it; witnesses doubling behavior.
bool exponential_scheme_check(const VassMdp& m, const MultiComponent& x, ZbMode mode,
                              long long selection_cap = 1000000);

struct ClassificationResult {
  std::vector<Estimate> counter_est;
  std::vector<Estimate> transition_est;
  bool cap_reached = false;
  bool unresolved = false;
  CandidateSets final_candidates;
  std::vector<StepOutcome> steps;
  std::vector<std::string> notes;
  Int degree_bound;  // 2^d * 3^|T|
  int cap = 16;
};

ClassificationResult full_classification(const VassMdp& m, const ClassifierOptions& opts = {});

Estimate classify_observable(const VassMdp& m, const Observable& obs,
                             const ClassifierOptions& opts = {});

// ---- Markov chains ----

struct McVerdict {
  Estimate length;
  std::vector<Estimate> counters;
  std::vector<Estimate> transitions;  // meaningful for transitions in scope
  Component witness;
  std::vector<int> c_plus;  // counters the witness strictly grows
};

// Requires an effective Markov chain (every nondeterministic state has
// exactly one outgoing transition) that is strongly connected.
McVerdict classify_markov_chain(const VassMdp& m);

struct McMecReport {
  EndComponent mec;
  McVerdict verdict;
};

// Chains that are not strongly connected: each MEC classified on its own;
// transitions outside every MEC are used an asymptotically constant number
// of times.
struct McGeneralResult {
  std::vector<McMecReport> mecs;
  std::vector<int> transient_transitions;
};

McGeneralResult classify_markov_chain_general(const VassMdp& m);

}  // namespace vasco
