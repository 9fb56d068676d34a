#pragma once

#include <vasco/model.hpp>

#include <random>
#include <string>
#include <vector>

namespace testgen {

// rng() % k directly: the standard distributions are implementation-defined,
// and these draws should replay identically wherever the suite runs.
inline long long draw(std::mt19937_64& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(rng() % static_cast<unsigned long long>(hi - lo + 1));
}

// Valid strongly connected model: a covering cycle plus random extras, kinds
// and updates random, probabilities picked from the menu and normalized.
inline vasco::VassMdp random_sc_model(std::mt19937_64& rng, int max_counters = 3,
                                      int max_states = 4, int max_transitions = 8) {
  using namespace vasco;
  VassMdp m;
  const int d = static_cast<int>(draw(rng, 1, max_counters));
  const int s = static_cast<int>(draw(rng, 1, max_states));
  for (int c = 0; c < d; ++c) m.counters.push_back("c" + std::to_string(c));
  for (int i = 0; i < s; ++i) {
    m.states.push_back("s" + std::to_string(i));
    m.kinds.push_back(draw(rng, 0, 1) ? StateKind::Prob : StateKind::Nondet);
  }
  const int nt = static_cast<int>(draw(rng, s, max_transitions));
  for (int i = 0; i < nt; ++i) {
    Transition t;
    t.id = "t" + std::to_string(i);
    if (i < s) {
      t.src = i;
      t.dst = (i + 1) % s;
    } else {
      t.src = static_cast<int>(draw(rng, 0, s - 1));
      t.dst = static_cast<int>(draw(rng, 0, s - 1));
    }
    for (int c = 0; c < d; ++c) t.update.push_back(Int(draw(rng, -2, 2)));
    m.transitions.push_back(std::move(t));
  }
  static const Rat menu[] = {Rat(1, 4), Rat(1, 3), Rat(1, 2), Rat(2, 3), Rat(3, 4)};
  for (int st = 0; st < s; ++st) {
    if (m.kinds[st] != StateKind::Prob) continue;
    Rat sum(0);
    std::vector<int> outs;
    for (int t = 0; t < nt; ++t)
      if (m.transitions[t].src == st) {
        m.transitions[t].prob = menu[draw(rng, 0, 4)];
        sum += m.transitions[t].prob;
        outs.push_back(t);
      }
    for (int t : outs) m.transitions[t].prob /= sum;
  }
  m.finalize();
  return m;
}

}  // namespace testgen
