#include "vasco/classifier.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <set>
#include <sstream>

#include "vasco/lp.hpp"

namespace vasco {

namespace {

Int structural_degree_bound(const VassMdp& m) {
  return (Int(1) << m.num_counters()) * pow(Int(3), m.num_transitions());
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  return os.str();
}

}  // namespace

ClassifierState ClassifierState::fresh(const VassMdp& m) {
  ClassifierState st;
  st.counters.assign(m.num_counters(), Item{});
  st.transitions.assign(m.num_transitions(), Item{});
  return st;
}

std::vector<int> ClassifierState::transitions_at_least(int i) const {
  std::vector<int> out;
  for (int t = 0; t < static_cast<int>(transitions.size()); ++t)
    if (transitions[t].degree >= i) out.push_back(t);
  return out;
}

std::vector<int> ClassifierState::counters_tight_at(int j) const {
  std::vector<int> out;
  for (int c = 0; c < static_cast<int>(counters.size()); ++c)
    if (counters[c].tight && counters[c].degree == j) out.push_back(c);
  return out;
}

std::vector<int> ClassifierState::tight_counter_degrees() const {
  std::set<int> s;
  for (const Item& it : counters)
    if (it.tight) s.insert(it.degree);
  return {s.begin(), s.end()};
}

std::vector<int> ClassifierState::tight_transition_degrees() const {
  std::set<int> s;
  for (const Item& it : transitions)
    if (it.tight) s.insert(it.degree);
  return {s.begin(), s.end()};
}

std::optional<int> ClassifierState::frontier() const {
  std::optional<int> f;
  auto scan = [&](const std::vector<Item>& items) {
    for (const Item& it : items) {
      if (it.tight) continue;
      if (!f) f = it.degree;
      else if (*f != it.degree)
        throw InternalError("open items drifted to different frontier degrees");
    }
  };
  scan(counters);
  scan(transitions);
  return f;
}

bool ClassifierState::all_classified() const {
  auto open = [](const Item& it) { return !it.tight; };
  return std::none_of(counters.begin(), counters.end(), open) &&
         std::none_of(transitions.begin(), transitions.end(), open);
}

namespace {

// Shared body of the layer builders; `scope_for` names the transition set
// whose MECs split a counter that is tight at degree j.
LayeredModel build_layer_core(const VassMdp& m, int index, const ClassifierState& st,
                              const std::function<std::vector<int>(int)>& scope_for,
                              int copy_below) {
  LayeredModel L;
  L.index = index;
  L.global_of.assign(m.num_counters(), std::nullopt);
  for (int c = 0; c < m.num_counters(); ++c) {
    const ClassifierState::Item& it = st.counters[c];
    if (it.tight && it.degree <= copy_below) {
      Restriction r = restrict_transitions(m, scope_for(it.degree));
      MecDecomposition md = mec_decomposition(r.model);
      for (size_t bi = 0; bi < md.mecs.size(); ++bi) {
        LayerCounter lc;
        lc.name = m.counters[c] + "#" + std::to_string(bi);
        lc.original = c;
        lc.tight_degree = it.degree;
        lc.scope.assign(m.num_transitions(), 0);
        for (int tsub : md.mecs[bi].transitions) lc.scope[r.kept[tsub]] = 1;
        L.counters.push_back(std::move(lc));
      }
    } else {
      LayerCounter lc;
      lc.name = m.counters[c];
      lc.original = c;
      if (it.tight) lc.tight_degree = it.degree;
      lc.scope.assign(m.num_transitions(), 1);
      L.global_of[c] = static_cast<int>(L.counters.size());
      L.counters.push_back(std::move(lc));
    }
  }

  L.model.counters.clear();
  for (const LayerCounter& lc : L.counters) L.model.counters.push_back(lc.name);
  L.model.states = m.states;
  L.model.kinds = m.kinds;
  L.model.transitions = m.transitions;
  for (int t = 0; t < m.num_transitions(); ++t) {
    std::vector<Int> u(L.counters.size(), Int(0));
    for (size_t i = 0; i < L.counters.size(); ++i)
      if (L.counters[i].scope[t]) u[i] = m.transitions[t].update[L.counters[i].original];
    L.model.transitions[t].update = std::move(u);
  }
  L.model.finalize();
  return L;
}

}  // namespace

LayeredModel build_layer(const VassMdp& m, int i, const ClassifierState& st) {
  if (i < 1) throw ValidationError("layer index must be at least 1");
  auto scope = [&](int degree) { return st.transitions_at_least(i - degree); };
  return build_layer_core(m, i, st, scope, i - 1);
}

LayeredModel build_layer_infinity(const VassMdp& m, const ClassifierState& st) {
  std::vector<int> open;
  for (int t = 0; t < m.num_transitions(); ++t)
    if (!st.transitions[t].tight) open.push_back(t);
  auto scope = [open](int) { return open; };
  return build_layer_core(m, -1, st, scope, INT_MAX);
}

std::vector<int> compute_R_set(const VassMdp& m, const ClassifierState& st, int l, int k) {
  LayeredModel layer = build_layer(m, k - l, st);
  Restriction r = restrict_transitions(layer.model, st.transitions_at_least(k - l + 1));
  std::vector<int> keep;
  for (int i = 0; i < static_cast<int>(layer.counters.size()); ++i)
    if (layer.counters[i].tight_degree && *layer.counters[i].tight_degree <= l) keep.push_back(i);
  VassMdp proj = project_counters(r.model, keep);

  RankSolution rs = maximal_rank_solution(proj);
  RankFunction rf{rs.counter_weights, rs.state_offsets};
  std::set<int> out;
  for (int j = 0; j < proj.num_transitions(); ++j)
    if (!proj.is_prob(proj.transitions[j].src) && rank_effect(proj, rf, j) != 0)
      out.insert(r.kept[j]);
  for (int s = 0; s < proj.num_states(); ++s) {
    if (!proj.is_prob(s) || proj.out[s].empty()) continue;
    bool hit = expected_rank_effect(proj, rf, s) != 0;
    for (int j : proj.out[s]) hit = hit || rank_effect(proj, rf, j) != 0;
    if (hit)
      for (int j : proj.out[s]) out.insert(r.kept[j]);
  }
  return {out.begin(), out.end()};
}

CandidateSets candidate_sets(const ClassifierState& st, int cap) {
  CandidateSets cs;
  cs.aset = st.tight_counter_degrees();
  {
    std::vector<int> td = st.tight_transition_degrees();
    std::set<int> b(td.begin(), td.end());
    if (std::optional<int> f = st.frontier()) b.insert(*f);
    cs.bset.assign(b.begin(), b.end());
  }
  std::set<int> x1{1};
  for (int b : cs.bset) {
    x1.insert(b);
    for (int a : cs.aset) x1.insert(a + b);
  }
  std::set<int> x2;
  for (int r : cs.aset) {
    std::set<int> sr(cs.bset.begin(), cs.bset.end());
    for (int a : cs.aset)
      if (a <= r)
        for (int b : cs.bset) sr.insert(a + b);
    for (int s : sr) x2.insert(std::max(s + r, 2 * r));
  }
  cs.x1.assign(x1.begin(), x1.end());
  cs.x2.assign(x2.begin(), x2.end());
  std::set<int> all;
  for (int v : cs.x1)
    if (v >= 1 && v <= cap) all.insert(v);
  for (int v : cs.x2)
    if (v >= 1 && v <= cap) all.insert(v);
  cs.all.assign(all.begin(), all.end());
  return cs;
}

std::vector<int> candidate_ks(const ClassifierState& st, int cap) {
  return candidate_sets(st, cap).all;
}

StepOutcome classify_step_k(const VassMdp& m, int k, ClassifierState& st,
                            const ClassifierOptions& opts) {
  (void)opts;
  StepOutcome o;
  o.k = k;
  const Int bound = structural_degree_bound(m);

  std::vector<int> open_counters, open_transitions;
  for (int c = 0; c < m.num_counters(); ++c)
    if (!st.counters[c].tight) open_counters.push_back(c);
  for (int t = 0; t < m.num_transitions(); ++t)
    if (!st.transitions[t].tight) open_transitions.push_back(t);

  auto set_tight = [&](ClassifierState::Item& it, std::string prov) {
    if (it.tight) throw InternalError("attempt to reclassify a closed item");
    if (k < it.degree) throw InternalError("upper estimate fell below the proven lower bound");
    if (Int(k) > bound) throw InternalError("tight degree exceeds the structural bound");
    it.tight = true;
    it.degree = k;
    it.provenance = std::move(prov);
  };
  auto bump_lower = [&](ClassifierState::Item& it, std::string prov) {
    if (it.tight) throw InternalError("attempt to weaken a closed item");
    if (k + 1 <= it.degree) throw InternalError("lower estimate must strictly increase");
    it.degree = k + 1;
    it.provenance = std::move(prov);
  };

  // Rank-moving transitions across the admissible projection depths.
  const std::vector<int> aset = st.tight_counter_degrees();
  const std::vector<int> bset = st.tight_transition_degrees();
  std::set<int> xs;
  for (int a : aset) xs.insert(a);
  for (int b : bset) {
    xs.insert(k - b);
    for (int a : aset) xs.insert(k - a - b);
  }
  std::set<int> runion;
  for (int l : xs) {
    if (l < 1 || l > k / 2) continue;
    o.x_values.push_back(l);
    for (int t : compute_R_set(m, st, l, k)) runion.insert(t);
  }
  for (int t : runion) {
    if (st.transitions[t].tight) continue;
    if (st.transitions[t].degree == k) {
      set_tight(st.transitions[t],
                "moves the depth-projected rank certificate, so its uses cap out at degree " +
                    std::to_string(k));
      o.newly_tight_transitions.push_back(t);
    } else {
      o.notes.push_back("transition " + m.transitions[t].id +
                        " hit the rank-moving set below its frontier");
    }
  }

  // Certificates on the layer restricted to the still-open transition set.
  std::vector<int> that;
  for (int t : st.transitions_at_least(k))
    if (!runion.count(t)) that.push_back(t);
  LayeredModel layer = build_layer(m, k, st);
  Restriction r = restrict_transitions(layer.model, that);
  FlowSolution fs = maximal_flow_solution(r.model);
  RankSolution rs = maximal_rank_solution(r.model);
  if (!check_dichotomy(r.model, fs, rs))
    throw InternalError("growth/rank dichotomy failed on the working layer");

  {
    std::ostringstream sig;
    sig << "T=" << join_ints(that) << "|R=" << join_ints({runion.begin(), runion.end()})
        << "|X=" << join_ints(o.x_values);
    for (const LayerCounter& lc : layer.counters) {
      sig << "|C" << lc.original << ':'
          << (lc.tight_degree ? std::to_string(*lc.tight_degree) : "w") << ':';
      for (int t = 0; t < m.num_transitions(); ++t)
        if (lc.scope[t]) sig << t << '.';
    }
    sig << "|Ic=" << join_ints(fs.strict_counters);
    std::vector<int> si;
    for (int j : fs.strict_transitions) si.push_back(r.kept[j]);
    sig << "|It=" << join_ints(si);
    sig << "|IIc=" << join_ints(rs.strict_counters);
    si.clear();
    for (int j : rs.strict_nondet_transitions) si.push_back(r.kept[j]);
    sig << "|IIt=" << join_ints(si) << "|IIp=" << join_ints(rs.strict_prob_states);
    o.signature = sig.str();
  }

  // The degree the rank certificate bounds this round.
  std::optional<int> tstar;
  if (k == 1) {
    tstar = 1;
  } else if (!runion.empty()) {
    tstar = k;
  } else {
    int best = 0;
    for (int a : aset)
      for (int b : bset)
        if (a + b <= k) best = std::max(best, a + b);
    if (best > 0)
      tstar = best;
    else
      o.notes.push_back("no closed degrees combine at frontier " + std::to_string(k) +
                        "; upper bounds skipped this round");
  }
  o.t_star = tstar;
  const bool uppers_active = tstar && *tstar == k;
  if (tstar && *tstar < k)
    o.notes.push_back("closed degrees peak below the frontier; upper bounds skipped this round");

  for (int lc : rs.strict_counters) {
    int c = layer.counters[lc].original;
    if (layer.counters[lc].tight_degree || st.counters[c].tight) continue;
    if (!uppers_active)
      throw InternalError("rank certificate closed a counter in a round without upper bounds");
    set_tight(st.counters[c], "rank certificate caps growth at degree " + std::to_string(k));
    o.upper_counters.push_back(c);
  }
  {
    std::set<int> rank_strict;
    for (int j : rs.strict_nondet_transitions) rank_strict.insert(r.kept[j]);
    for (int s : rs.strict_prob_states)
      for (int j : r.model.out[s]) rank_strict.insert(r.kept[j]);
    for (int t : rank_strict) {
      if (st.transitions[t].tight) continue;
      if (!uppers_active)
        throw InternalError("rank certificate closed a transition in a round without upper bounds");
      set_tight(st.transitions[t],
                "strictly decreases the rank certificate, so its uses cap out at degree " +
                    std::to_string(k));
      o.upper_transitions.push_back(t);
    }
  }

  std::vector<Rat> eff = net_effect(r.model, fs.flow);
  for (int c : open_counters) {
    if (st.counters[c].tight) continue;
    std::optional<int> g = layer.global_of[c];
    if (g && eff[*g] > 0) {
      bump_lower(st.counters[c], "a growth witness pushes it past degree " + std::to_string(k));
      o.lower_counters.push_back(c);
    }
  }
  for (int j = 0; j < r.model.num_transitions(); ++j) {
    if (fs.flow[j] == 0) continue;
    int t = r.kept[j];
    if (st.transitions[t].tight) continue;
    bump_lower(st.transitions[t], "carried by a growth witness past degree " + std::to_string(k));
    o.lower_transitions.push_back(t);
  }

  for (int c : open_counters)
    if (!st.counters[c].tight && st.counters[c].degree != k + 1)
      throw InternalError("dichotomy left counter " + m.counters[c] + " unresolved at degree " +
                          std::to_string(k));
  for (int t : open_transitions)
    if (!st.transitions[t].tight && st.transitions[t].degree != k + 1)
      throw InternalError("dichotomy left transition " + m.transitions[t].id +
                          " unresolved at degree " + std::to_string(k));

  o.progressed = !o.newly_tight_transitions.empty() || !o.upper_counters.empty() ||
                 !o.upper_transitions.empty();
  return o;
}

bool exponential_scheme_check(const VassMdp& m, const MultiComponent& x, ZbMode mode,
                              long long selection_cap) {
  if (!is_multicomponent(m, x)) throw ValidationError("input is not a multi-component");
  std::vector<Rat> delta = effect(m, x);
  std::vector<int> supp;
  for (int t = 0; t < m.num_transitions(); ++t)
    if (x.flow[t] != 0) supp.push_back(t);
  Restriction r = restrict_transitions(m, supp);
  MecDecomposition md = mec_decomposition(r.model);
  for (int c = 0; c < m.num_counters(); ++c) {
    if (delta[c] > 0) continue;
    for (const EndComponent& b : md.mecs) {
      MultiComponent xb;
      xb.flow.assign(m.num_transitions(), Rat(0));
      for (int j : b.transitions) xb.flow[r.kept[j]] = x.flow[r.kept[j]];
      if (!zero_bounded_multicomponent(m, xb, c, mode, selection_cap)) return false;
    }
  }
  return true;
}

namespace {

Estimate tight_estimate(const ClassifierState::Item& it) {
  return Estimate{VerdictKind::TightPoly, it.degree, it.provenance};
}

void fill_result_from_state(const VassMdp& m, const ClassifierState& st, ClassificationResult& r) {
  r.counter_est.assign(m.num_counters(), Estimate{});
  r.transition_est.assign(m.num_transitions(), Estimate{});
  for (int c = 0; c < m.num_counters(); ++c)
    if (st.counters[c].tight) r.counter_est[c] = tight_estimate(st.counters[c]);
    else r.counter_est[c] = Estimate{VerdictKind::LowerPoly, st.counters[c].degree, st.counters[c].provenance};
  for (int t = 0; t < m.num_transitions(); ++t)
    if (st.transitions[t].tight) r.transition_est[t] = tight_estimate(st.transitions[t]);
    else r.transition_est[t] = Estimate{VerdictKind::LowerPoly, st.transitions[t].degree, st.transitions[t].provenance};
}

}  // namespace

ClassificationResult full_classification(const VassMdp& m, const ClassifierOptions& opts) {
  validate_strongly_connected(m);
  if (opts.max_k < 1) throw ValidationError("degree cap must be at least 1");

  ClassificationResult res;
  res.degree_bound = structural_degree_bound(m);
  const int cap =
      res.degree_bound < opts.max_k ? res.degree_bound.convert_to<int>() : opts.max_k;
  res.cap = cap;

  ClassifierState st = ClassifierState::fresh(m);
  int last_k = 0;
  std::optional<std::string> idle_sig;
  bool capped = false, stabilized = false;

  while (!st.all_classified()) {
    std::vector<int> ks = candidate_ks(st, cap);
    auto it = std::upper_bound(ks.begin(), ks.end(), last_k);
    if (it == ks.end()) {
      std::vector<int> full = candidate_ks(st, INT_MAX);
      if (std::upper_bound(full.begin(), full.end(), last_k) != full.end()) {
        capped = true;
        res.notes.push_back("the next candidate degree exceeds the cap of " + std::to_string(cap));
      }
      break;
    }
    StepOutcome o = classify_step_k(m, *it, st, opts);
    last_k = *it;
    res.steps.push_back(o);
    const StepOutcome& stored = res.steps.back();
    if (stored.progressed) {
      idle_sig.reset();
    } else if (idle_sig && *idle_sig == stored.signature) {
      stabilized = true;
      res.notes.push_back(
          "layer structure stabilized with no further progress; switching to the doubling "
          "analysis");
      break;
    } else {
      idle_sig = stored.signature;
    }
  }

  res.final_candidates = candidate_sets(st, cap);
  fill_result_from_state(m, st, res);

  if (st.all_classified()) return res;

  if (capped) {
    res.cap_reached = true;
    for (int c = 0; c < m.num_counters(); ++c)
      if (!st.counters[c].tight)
        res.counter_est[c] = Estimate{VerdictKind::CapReached, st.counters[c].degree,
                                      "analysis capped before resolution"};
    for (int t = 0; t < m.num_transitions(); ++t)
      if (!st.transitions[t].tight)
        res.transition_est[t] = Estimate{VerdictKind::CapReached, st.transitions[t].degree,
                                         "analysis capped before resolution"};
    return res;
  }

  // Doubling phase on the layer limit over the still-open transitions.
  (void)stabilized;
  LayeredModel inf = build_layer_infinity(m, st);
  std::vector<int> open;
  for (int t = 0; t < m.num_transitions(); ++t)
    if (!st.transitions[t].tight) open.push_back(t);
  Restriction r = restrict_transitions(inf.model, open);
  FlowSolution fs = maximal_flow_solution(r.model);
  MultiComponent x = to_multicomponent(fs.flow);
  const bool scheme = exponential_scheme_check(r.model, x, opts.zb_mode, opts.component_cap);
  bool leftovers = false;
  if (scheme) {
    std::vector<Rat> eff = net_effect(r.model, fs.flow);
    for (int c = 0; c < m.num_counters(); ++c) {
      if (st.counters[c].tight) continue;
      std::optional<int> g = inf.global_of[c];
      if (g && eff[*g] > 0)
        res.counter_est[c] =
            Estimate{VerdictKind::ExponentialLower, 0, "grown by a doubling scheme"};
      else
        leftovers = true;
    }
    for (int j = 0; j < r.model.num_transitions(); ++j) {
      int t = r.kept[j];
      if (st.transitions[t].tight) continue;
      if (fs.flow[j] > 0)
        res.transition_est[t] =
            Estimate{VerdictKind::ExponentialLower, 0, "carried by a doubling scheme"};
      else
        leftovers = true;
    }
    for (int t = 0; t < m.num_transitions(); ++t)
      if (!st.transitions[t].tight &&
          !std::binary_search(open.begin(), open.end(), t))
        leftovers = true;
    if (leftovers) {
      res.unresolved = true;
      res.notes.push_back("the doubling scheme does not cover every open item");
    }
  } else {
    res.unresolved = true;
    res.notes.push_back(
        "no doubling scheme covers the open items under the selected zero-boundedness mode");
  }
  return res;
}

Estimate classify_observable(const VassMdp& m, const Observable& obs,
                             const ClassifierOptions& opts) {
  switch (obs.kind) {
    case Observable::Kind::Counter: {
      int c = m.counter_index(obs.name);
      if (c < 0) throw ValidationError("unknown counter: " + obs.name);
      return full_classification(m, opts).counter_est[c];
    }
    case Observable::Kind::Transition: {
      int t = m.transition_index(obs.name);
      if (t < 0) throw ValidationError("unknown transition: " + obs.name);
      return full_classification(m, opts).transition_est[t];
    }
    case Observable::Kind::Length: {
      CounterAddition ca = add_step_counter(m);
      return full_classification(ca.model, opts).counter_est[ca.counter];
    }
  }
  throw InternalError("unhandled observable kind");
}

}  // namespace vasco
