#pragma once

#include "vasco/rational.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace vasco {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated entry preconditions: not strongly connected, genuine
// nondeterminism where a chain is required, and similar.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resource guards tripping (component selection cap and similar).
struct AnalysisLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Broken internal invariants; reaching one of these is a bug, not bad input.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

enum class StateKind { Nondet, Prob };

struct Transition {
  std::string id;
  int src = 0;
  int dst = 0;
  std::vector<Int> update;  // one entry per counter
  Rat prob;                 // meaningful only when src is probabilistic
};

struct VassMdp {
  std::vector<std::string> counters;
  std::vector<std::string> states;
  std::vector<StateKind> kinds;
  std::vector<Transition> transitions;

  // Derived adjacency, rebuilt by finalize().
  std::vector<std::vector<int>> out;
  std::vector<std::vector<int>> in;

  int num_counters() const { return static_cast<int>(counters.size()); }
  int num_states() const { return static_cast<int>(states.size()); }
  int num_transitions() const { return static_cast<int>(transitions.size()); }
  bool is_prob(int s) const { return kinds[s] == StateKind::Prob; }

  int state_index(const std::string& name) const;        // -1 when absent
  int counter_index(const std::string& name) const;      // -1 when absent
  int transition_index(const std::string& id) const;     // -1 when absent

  void finalize();  // rebuild out/in
};

struct Configuration {
  int state = 0;
  std::vector<Int> counters;
};

struct Observable {
  enum class Kind { Length, Counter, Transition };
  Kind kind = Kind::Length;
  std::string name;  // counter name or transition id

  static Observable length() { return {Kind::Length, ""}; }
  static Observable counter(std::string c) { return {Kind::Counter, std::move(c)}; }
  static Observable transition(std::string t) { return {Kind::Transition, std::move(t)}; }
};

// Text format, '#' starts a comment:
//   counters: x y
//   state p n        (n = nondeterministic, p = probabilistic)
//   state q p
//   trans t1 p q : -1 2 @ 1/2
// The probability clause is required exactly when the source state is
// probabilistic. parse_model validates the result before returning it.
VassMdp parse_model(const std::string& text);

// Canonical form: counters line, then states, then transitions, single
// spaces, declaration order, probabilities printed as "a/b".
// serialize_model(parse_model(s)) is a fixed point byte for byte.
std::string serialize_model(const VassMdp& m);

// Structural invariants: nonempty state set, unique names, update arity,
// every state has an outgoing transition, probabilities positive and summing
// to exactly 1 per probabilistic state.
void validate_model(const VassMdp& m);

bool is_strongly_connected(const VassMdp& m);
void validate_strongly_connected(const VassMdp& m);  // throws PreconditionError

struct Restriction {
  VassMdp model;
  std::vector<int> kept;             // original transition index per new index
  std::vector<int> dangling_states;  // states that lost every outgoing transition
  bool strongly_connected = false;   // of the restricted transition graph
};

// Keep exactly the listed transitions. Probabilistic states are
// all-or-nothing: removing a proper subset of some probabilistic state's
// outgoing transitions is an error.
Restriction restrict_transitions(const VassMdp& m, const std::vector<int>& keep);

// Keep the listed counters (indices into m.counters), dropping update entries
// of the others. An empty list yields a zero-dimensional model.
VassMdp project_counters(const VassMdp& m, const std::vector<int>& keep);

struct CounterAddition {
  VassMdp model;
  int counter;  // index of the added counter
};

// Fresh counter with +1 on every transition; termination time shows up in it
// shifted by the start value.
CounterAddition add_step_counter(const VassMdp& m);

// Fresh counter with +1 on the given transition and 0 elsewhere.
CounterAddition add_transition_counter(const VassMdp& m, int t);

}  // namespace vasco
