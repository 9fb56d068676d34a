#include "vasco/classifier.hpp"

namespace vasco {

namespace {

void validate_chain(const VassMdp& m) {
  for (int s = 0; s < m.num_states(); ++s)
    if (!m.is_prob(s) && m.out[s].size() != 1)
      throw PreconditionError("state " + m.states[s] + " has genuine nondeterminism");
}

// Verdict for one counter of `model` under the return cycle y. The length
// and transition measures reduce to this through added counters, which are
// never zero-trend (their per-return effect is the positive visit count), so
// the fluctuation scan below is unaffected by the extension.
Estimate chain_estimate(const VassMdp& model, const Component& y, int c) {
  std::vector<Rat> delta = expected_return_effect(model, y);
  bool drain = false;
  for (const Rat& d : delta) drain = drain || d < 0;
  if (drain)
    return {VerdictKind::ThetaN, 1,
            "a counter drains per return cycle, ending the run in linear time"};
  if (delta[c] <= 0) return {VerdictKind::ThetaN, 1, "the return cycle does not grow it"};
  for (int c2 = 0; c2 < model.num_counters(); ++c2)
    if (classify_counter_behavior(model, y, c2).verdict == CounterVerdict::ZeroUnbounded)
      return {VerdictKind::ThetaN2, 2,
              "a zero-trend counter fluctuates unboundedly, ending the run within quadratic "
              "time"};
  return {VerdictKind::Unbounded, 0, "no counter can end the run"};
}

McVerdict scoped_verdict(const VassMdp& m, const EndComponent& ec) {
  std::vector<std::pair<int, int>> selection;
  for (int s : ec.states)
    if (!m.is_prob(s)) selection.emplace_back(s, m.out[s][0]);
  Component y = centered_flow(m, selection, ec, ec.states.front());

  McVerdict v;
  v.witness = y;
  std::vector<Rat> delta = expected_return_effect(m, y);
  for (int c = 0; c < m.num_counters(); ++c)
    if (delta[c] > 0) v.c_plus.push_back(c);

  v.counters.resize(m.num_counters());
  for (int c = 0; c < m.num_counters(); ++c) v.counters[c] = chain_estimate(m, y, c);

  {
    CounterAddition ca = add_step_counter(m);
    v.length = chain_estimate(ca.model, y, ca.counter);
  }

  v.transitions.assign(m.num_transitions(),
                       Estimate{VerdictKind::LowerPoly, 1, "outside this component's scope"});
  for (int t : ec.transitions) {
    CounterAddition ca = add_transition_counter(m, t);
    v.transitions[t] = chain_estimate(ca.model, y, ca.counter);
  }
  return v;
}

}  // namespace

McVerdict classify_markov_chain(const VassMdp& m) {
  validate_chain(m);
  validate_strongly_connected(m);
  EndComponent whole;
  for (int s = 0; s < m.num_states(); ++s) whole.states.push_back(s);
  for (int t = 0; t < m.num_transitions(); ++t) whole.transitions.push_back(t);
  return scoped_verdict(m, whole);
}

McGeneralResult classify_markov_chain_general(const VassMdp& m) {
  validate_chain(m);
  MecDecomposition md = mec_decomposition(m);
  McGeneralResult res;
  std::vector<char> recurrent(m.num_transitions(), 0);
  for (const EndComponent& ec : md.mecs) {
    res.mecs.push_back({ec, scoped_verdict(m, ec)});
    for (int t : ec.transitions) recurrent[t] = 1;
  }
  for (int t = 0; t < m.num_transitions(); ++t)
    if (!recurrent[t]) res.transient_transitions.push_back(t);
  return res;
}

}  // namespace vasco
