#include "vasco/components.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "vasco/lp.hpp"

namespace vasco {

namespace {

std::vector<int> support_of(const std::vector<Rat>& flow) {
  std::vector<int> supp;
  for (int t = 0; t < static_cast<int>(flow.size()); ++t)
    if (flow[t] != 0) supp.push_back(t);
  return supp;
}

}  // namespace

MultiComponent to_multicomponent(const std::vector<Int>& flow) {
  MultiComponent x;
  x.flow.reserve(flow.size());
  for (const Int& v : flow) x.flow.emplace_back(v);
  return x;
}

bool is_multicomponent(const VassMdp& m, const MultiComponent& x) {
  if (static_cast<int>(x.flow.size()) != m.num_transitions()) return false;
  for (const Rat& v : x.flow)
    if (v < 0) return false;
  for (int s = 0; s < m.num_states(); ++s) {
    Rat in(0), out(0);
    for (int t : m.in[s]) in += x.flow[t];
    for (int t : m.out[s]) out += x.flow[t];
    if (in != out) return false;
    if (m.is_prob(s))
      for (int t : m.out[s])
        if (x.flow[t] != m.transitions[t].prob * out) return false;
  }
  return true;
}

MultiComponent mc_add(const MultiComponent& a, const MultiComponent& b) {
  if (a.flow.size() != b.flow.size()) throw ValidationError("multi-component size mismatch");
  MultiComponent r = a;
  for (size_t i = 0; i < r.flow.size(); ++i) r.flow[i] += b.flow[i];
  return r;
}

MultiComponent mc_scale(const Rat& a, const MultiComponent& x) {
  if (a < 0) throw ValidationError("multi-component scale must be nonnegative");
  MultiComponent r = x;
  for (Rat& v : r.flow) v *= a;
  return r;
}

MultiComponent mc_sub(const MultiComponent& a, const MultiComponent& b) {
  if (a.flow.size() != b.flow.size()) throw ValidationError("multi-component size mismatch");
  MultiComponent r = a;
  for (size_t i = 0; i < r.flow.size(); ++i) {
    r.flow[i] -= b.flow[i];
    if (r.flow[i] < 0) throw ValidationError("multi-component difference has a negative entry");
  }
  return r;
}

std::vector<Rat> effect(const VassMdp& m, const MultiComponent& x) {
  std::vector<Rat> eff(m.num_counters(), Rat(0));
  for (int t = 0; t < m.num_transitions(); ++t)
    for (int c = 0; c < m.num_counters(); ++c)
      eff[c] += x.flow[t] * Rat(m.transitions[t].update[c]);
  return eff;
}

Component centered_flow(const VassMdp& m, const std::vector<std::pair<int, int>>& selection,
                        const EndComponent& mec, int center) {
  std::map<int, int> chosen(selection.begin(), selection.end());
  std::vector<char> in_mec_state(m.num_states(), 0);
  for (int s : mec.states) in_mec_state[s] = 1;
  if (center < 0 || center >= m.num_states() || !in_mec_state[center])
    throw ValidationError("center lies outside the end component");

  // The induced chain: the chosen transition at nondeterministic states, the
  // whole bundle at probabilistic ones.
  std::vector<int> chain;
  for (int t : mec.transitions) {
    int src = m.transitions[t].src;
    if (m.is_prob(src)) {
      chain.push_back(t);
    } else {
      auto it = chosen.find(src);
      if (it == chosen.end())
        throw ValidationError("selection is missing a nondeterministic state of the component");
      if (it->second == t) chain.push_back(t);
    }
  }
  EndComponent induced{mec.states, chain};
  if (!is_end_component(m, induced))
    throw ValidationError("selection does not induce the given end component");

  std::vector<int> col(m.num_transitions(), -1);
  for (int i = 0; i < static_cast<int>(chain.size()); ++i) col[chain[i]] = i;
  const int nv = static_cast<int>(chain.size());

  std::vector<std::pair<std::vector<Rat>, Rat>> rows;
  for (int s : mec.states) {
    std::vector<Rat> coef(nv, Rat(0));
    for (int t : m.in[s])
      if (col[t] >= 0) coef[col[t]] += 1;
    for (int t : m.out[s])
      if (col[t] >= 0) coef[col[t]] -= 1;
    rows.emplace_back(std::move(coef), Rat(0));
  }
  for (int s : mec.states) {
    if (!m.is_prob(s)) continue;
    for (int t : m.out[s]) {
      std::vector<Rat> coef(nv, Rat(0));
      coef[col[t]] += 1;
      for (int sib : m.out[s]) coef[col[sib]] -= m.transitions[t].prob;
      rows.emplace_back(std::move(coef), Rat(0));
    }
  }
  {
    std::vector<Rat> coef(nv, Rat(0));
    for (int t : m.out[center])
      if (col[t] >= 0) coef[col[t]] += 1;
    rows.emplace_back(std::move(coef), Rat(1));
  }

  LinSolveResult sol = solve_linear_system(nv, rows);
  if (sol.status != LinSolve::Unique)
    throw InternalError("centered flow system is not uniquely solvable on an end component");

  Component y;
  y.flow.flow.assign(m.num_transitions(), Rat(0));
  for (int i = 0; i < nv; ++i) {
    if (sol.x[i] <= 0) throw InternalError("centered flow vanishes on a component transition");
    y.flow.flow[chain[i]] = sol.x[i];
  }
  y.center = center;
  for (int s : mec.states)
    if (!m.is_prob(s)) y.selection.emplace_back(s, chosen.at(s));
  std::sort(y.selection.begin(), y.selection.end());
  y.mec.states = mec.states;
  y.mec.transitions = chain;
  std::sort(y.mec.states.begin(), y.mec.states.end());
  std::sort(y.mec.transitions.begin(), y.mec.transitions.end());
  return y;
}

std::vector<Component> enumerate_components(const VassMdp& m, long long selection_cap) {
  MecDecomposition md = mec_decomposition(m);
  std::vector<Component> found;
  std::set<std::vector<int>> seen_supports;
  Int processed = 0;

  for (const EndComponent& big : md.mecs) {
    std::vector<int> nondet_states;
    std::vector<std::vector<int>> choices;
    for (int s : big.states) {
      if (m.is_prob(s)) continue;
      std::vector<int> cs;
      for (int t : big.transitions)
        if (m.transitions[t].src == s) cs.push_back(t);
      nondet_states.push_back(s);
      choices.push_back(std::move(cs));
    }
    Int count = 1;
    for (const auto& cs : choices) count *= static_cast<int>(cs.size());
    processed += count;
    if (processed > selection_cap)
      throw AnalysisLimitError("component enumeration exceeds the selection cap of " +
                               std::to_string(selection_cap));

    std::vector<size_t> odo(choices.size(), 0);
    for (;;) {
      std::vector<bool> chain_mask(m.num_transitions(), false);
      std::vector<std::pair<int, int>> sel;
      for (size_t i = 0; i < choices.size(); ++i) {
        chain_mask[choices[i][odo[i]]] = true;
        sel.emplace_back(nondet_states[i], choices[i][odo[i]]);
      }
      for (int t : big.transitions)
        if (m.is_prob(m.transitions[t].src)) chain_mask[t] = true;

      MecDecomposition sub = mec_decomposition(m, chain_mask);
      for (const EndComponent& rec : sub.mecs) {
        std::vector<std::pair<int, int>> rec_sel;
        for (auto [s, t] : sel)
          if (std::binary_search(rec.states.begin(), rec.states.end(), s)) rec_sel.emplace_back(s, t);
        Component y = centered_flow(m, rec_sel, rec, rec.states.front());
        if (seen_supports.insert(y.mec.transitions).second) found.push_back(std::move(y));
      }

      size_t d = 0;
      while (d < odo.size() && ++odo[d] == choices[d].size()) odo[d++] = 0;
      if (d == odo.size() && !odo.empty()) break;
      if (odo.empty()) break;
    }
  }

  std::sort(found.begin(), found.end(), [](const Component& a, const Component& b) {
    if (a.mec.transitions.size() != b.mec.transitions.size())
      return a.mec.transitions.size() < b.mec.transitions.size();
    return a.mec.transitions < b.mec.transitions;
  });
  return found;
}

std::vector<Rat> expected_return_effect(const VassMdp& m, const Component& y) {
  return effect(m, y.flow);
}

CounterBehavior classify_counter_behavior(const VassMdp& m, const Component& y, int c) {
  CounterBehavior b;
  b.expected_effect = expected_return_effect(m, y)[c];
  if (b.expected_effect > 0) {
    b.verdict = CounterVerdict::Increasing;
    return b;
  }
  if (b.expected_effect < 0) {
    b.verdict = CounterVerdict::Decreasing;
    return b;
  }
  // Spanning-tree potential from the center; consistency on every support
  // transition means no cycle moves c.
  std::vector<std::optional<Rat>> phi(m.num_states());
  phi[y.center] = Rat(0);
  std::vector<int> frontier{y.center};
  while (!frontier.empty()) {
    int s = frontier.back();
    frontier.pop_back();
    for (int t : m.out[s]) {
      if (y.flow.flow[t] == 0) continue;
      int d = m.transitions[t].dst;
      if (!phi[d]) {
        phi[d] = *phi[s] + Rat(m.transitions[t].update[c]);
        frontier.push_back(d);
      }
    }
  }
  for (int t : y.mec.transitions) {
    const Transition& tr = m.transitions[t];
    if (!phi[tr.src] || !phi[tr.dst] || *phi[tr.dst] - *phi[tr.src] != Rat(tr.update[c])) {
      b.verdict = CounterVerdict::ZeroUnbounded;
      return b;
    }
  }
  b.verdict = CounterVerdict::ZeroBounded;
  return b;
}

namespace {

ComponentModel build_trend_split(const VassMdp& m, const Component& y, bool keep_base) {
  std::vector<Rat> delta = expected_return_effect(m, y);
  Int scale = lcm_of_denominators(delta);
  std::vector<Int> trend(delta.size());
  for (size_t c = 0; c < delta.size(); ++c) {
    Rat scaled = delta[c] * Rat(scale);
    trend[c] = numerator(scaled);
  }

  Restriction r = restrict_transitions(m, y.mec.transitions);
  ComponentModel out;
  out.kept = r.kept;
  out.scale = scale;
  out.model = std::move(r.model);
  for (Transition& t : out.model.transitions) {
    for (int c = 0; c < out.model.num_counters(); ++c) {
      Int base = keep_base ? t.update[c] * scale : Int(0);
      Int shift = t.dst == y.center ? trend[c] : Int(0);
      t.update[c] = keep_base ? base - shift : shift;
    }
  }

  out.comp.flow.flow.assign(out.model.num_transitions(), Rat(0));
  for (int j = 0; j < out.model.num_transitions(); ++j) out.comp.flow.flow[j] = y.flow.flow[out.kept[j]];
  out.comp.center = y.center;
  out.comp.selection = y.selection;
  std::vector<int> back(m.num_transitions(), -1);
  for (int j = 0; j < out.model.num_transitions(); ++j) back[out.kept[j]] = j;
  for (auto& [s, t] : out.comp.selection) t = back[t];
  out.comp.mec.states = y.mec.states;
  out.comp.mec.transitions.resize(out.model.num_transitions());
  for (int j = 0; j < out.model.num_transitions(); ++j) out.comp.mec.transitions[j] = j;
  return out;
}

}  // namespace

ComponentModel hat_component(const VassMdp& m, const Component& y) {
  ComponentModel out = build_trend_split(m, y, /*keep_base=*/true);
  for (const Rat& e : effect(out.model, out.comp.flow))
    if (e != 0) throw InternalError("detrended component kept a nonzero effect");
  return out;
}

ComponentModel co_hat_component(const VassMdp& m, const Component& y) {
  return build_trend_split(m, y, /*keep_base=*/false);
}

Component recenter(const VassMdp& m, const Component& y, int q) {
  if (!std::binary_search(y.mec.states.begin(), y.mec.states.end(), q))
    throw ValidationError("new center lies outside the component");
  Rat outflow(0);
  for (int t : m.out[q]) outflow += y.flow.flow[t];
  if (outflow <= 0) throw InternalError("component state has no outgoing flow");
  Component r = y;
  for (Rat& v : r.flow.flow) v /= outflow;
  r.center = q;
  return r;
}

namespace {

// Components of the restriction to supp(x), mapped back to m's transition ids.
std::vector<Component> support_components(const VassMdp& m, const MultiComponent& x,
                                          long long selection_cap) {
  Restriction r = restrict_transitions(m, support_of(x.flow));
  std::vector<Component> subs = enumerate_components(r.model, selection_cap);
  std::vector<Component> out;
  out.reserve(subs.size());
  for (Component& c : subs) {
    Component lifted;
    lifted.flow.flow.assign(m.num_transitions(), Rat(0));
    for (int j = 0; j < r.model.num_transitions(); ++j) lifted.flow.flow[r.kept[j]] = c.flow.flow[j];
    lifted.center = c.center;
    lifted.selection = c.selection;
    for (auto& [s, t] : lifted.selection) t = r.kept[t];
    lifted.mec.states = c.mec.states;
    for (int t : c.mec.transitions) lifted.mec.transitions.push_back(r.kept[t]);
    std::sort(lifted.mec.transitions.begin(), lifted.mec.transitions.end());
    out.push_back(std::move(lifted));
  }
  return out;
}

}  // namespace

std::vector<std::pair<Rat, Component>> conical_decomposition(const VassMdp& m,
                                                             const MultiComponent& x,
                                                             long long selection_cap) {
  if (!is_multicomponent(m, x)) throw ValidationError("input is not a multi-component");
  std::vector<std::pair<Rat, Component>> terms;
  std::vector<Rat> cur = x.flow;
  for (Component& y : support_components(m, x, selection_cap)) {
    std::optional<Rat> a;
    for (int t : y.mec.transitions) {
      Rat ratio = cur[t] / y.flow.flow[t];
      if (!a || ratio < *a) a = ratio;
    }
    if (!a || *a == 0) continue;
    for (int t : y.mec.transitions) cur[t] -= *a * y.flow.flow[t];
    terms.emplace_back(*a, std::move(y));
  }
  for (const Rat& v : cur)
    if (v != 0) throw InternalError("conical decomposition left a nonzero residue");
  return terms;
}

bool zero_bounded_multicomponent(const VassMdp& m, const MultiComponent& x, int c, ZbMode mode,
                                 long long selection_cap) {
  if (!is_multicomponent(m, x)) throw ValidationError("input is not a multi-component");
  std::vector<Rat> delta = effect(m, x);
  if (delta[c] != 0) return false;
  std::vector<int> supp = support_of(x.flow);
  if (supp.empty()) return true;

  std::vector<Component> comps = support_components(m, x, selection_cap);
  std::vector<Component> qualifying;
  for (Component& y : comps) {
    ComponentModel hat = hat_component(m, y);
    CounterVerdict v = classify_counter_behavior(hat.model, hat.comp, c).verdict;
    const CounterVerdict want =
        mode == ZbMode::Literal ? CounterVerdict::ZeroUnbounded : CounterVerdict::ZeroBounded;
    if (v == want) qualifying.push_back(std::move(y));
  }

  // Conical representability over the qualifying subset, as a feasibility LP.
  LinearProgram lp;
  for (size_t i = 0; i < qualifying.size(); ++i) lp.add_var(Rat(0));
  for (int t : supp) {
    std::vector<Rat> coef(qualifying.size(), Rat(0));
    for (size_t i = 0; i < qualifying.size(); ++i) coef[i] = qualifying[i].flow.flow[t];
    lp.add_row(coef, Rel::Eq, x.flow[t]);
  }
  return lp_feasible_point(lp).has_value();
}

}  // namespace vasco
