#include "vasco/constraints.hpp"

#include <algorithm>

#include "vasco/rational.hpp"

namespace vasco {

namespace {

// Coefficients of z(dst) - z(src) + update . y over the variable layout
// [y_0..y_{C-1}, z_0..z_{S-1}] used by the rank system.
void add_effect_coeffs(const VassMdp& m, const Transition& t, std::vector<Rat>& coef, const Rat& weight) {
  const int nc = static_cast<int>(m.counters.size());
  for (int c = 0; c < nc; ++c) coef[c] += weight * Rat(t.update[c]);
  coef[nc + t.dst] += weight;
  coef[nc + t.src] -= weight;
}

std::vector<int> mask_to_list(const std::vector<char>& mask) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(mask.size()); ++i)
    if (mask[i]) out.push_back(i);
  return out;
}

}  // namespace

std::vector<Rat> net_effect(const VassMdp& m, const std::vector<Rat>& flow) {
  std::vector<Rat> eff(m.counters.size(), Rat(0));
  for (size_t t = 0; t < m.transitions.size(); ++t)
    for (size_t c = 0; c < m.counters.size(); ++c)
      eff[c] += flow[t] * Rat(m.transitions[t].update[c]);
  return eff;
}

std::vector<Rat> net_effect(const VassMdp& m, const std::vector<Int>& flow) {
  std::vector<Rat> f(flow.size());
  for (size_t i = 0; i < flow.size(); ++i) f[i] = Rat(flow[i]);
  return net_effect(m, f);
}

FlowSolution maximal_flow_solution(const VassMdp& m) {
  const int nt = static_cast<int>(m.transitions.size());
  const int nc = static_cast<int>(m.counters.size());

  LinearProgram base;
  for (int t = 0; t < nt; ++t) base.add_var(Rat(0));

  // Flow conservation at every state that touches a transition.
  for (int s = 0; s < static_cast<int>(m.states.size()); ++s) {
    if (m.out[s].empty() && m.in[s].empty()) continue;
    std::vector<Rat> coef(nt, Rat(0));
    for (int t : m.in[s]) coef[t] += 1;
    for (int t : m.out[s]) coef[t] -= 1;
    base.add_row(coef, Rel::Eq, Rat(0));
  }
  // Probabilistic states spread flow according to the transition
  // probabilities: x(t) = P(t) * total outflow.
  for (int s = 0; s < static_cast<int>(m.states.size()); ++s) {
    if (m.kinds[s] != StateKind::Prob || m.out[s].empty()) continue;
    for (int t : m.out[s]) {
      std::vector<Rat> coef(nt, Rat(0));
      coef[t] += 1;
      for (int sib : m.out[s]) coef[sib] -= m.transitions[t].prob;
      base.add_row(coef, Rel::Eq, Rat(0));
    }
  }
  // Nonnegative net effect on every counter.
  for (int c = 0; c < nc; ++c) {
    std::vector<Rat> coef(nt, Rat(0));
    for (int t = 0; t < nt; ++t) coef[t] += Rat(m.transitions[t].update[c]);
    base.add_row(coef, Rel::Ge, Rat(0));
  }

  // One feasibility probe per maximizable inequality; feasible probes are
  // summed so the result is strict exactly where some solution is.
  std::vector<Rat> sum(nt, Rat(0));
  std::vector<char> strict_c(nc, 0), strict_t(nt, 0);
  for (int c = 0; c < nc; ++c) {
    LinearProgram lp = base;
    std::vector<Rat> coef(nt, Rat(0));
    for (int t = 0; t < nt; ++t) coef[t] += Rat(m.transitions[t].update[c]);
    lp.add_row(coef, Rel::Ge, Rat(1));
    if (auto pt = lp_feasible_point(lp)) {
      strict_c[c] = 1;
      for (int t = 0; t < nt; ++t) sum[t] += (*pt)[t];
    }
  }
  for (int t = 0; t < nt; ++t) {
    LinearProgram lp = base;
    std::vector<Rat> coef(nt, Rat(0));
    coef[t] = 1;
    lp.add_row(coef, Rel::Ge, Rat(1));
    if (auto pt = lp_feasible_point(lp)) {
      strict_t[t] = 1;
      for (int u = 0; u < nt; ++u) sum[u] += (*pt)[u];
    }
  }

  FlowSolution fs;
  fs.flow = scale_to_integers(sum);
  const std::vector<Rat> eff = net_effect(m, fs.flow);
  for (int c = 0; c < nc; ++c)
    if ((eff[c] > 0) != static_cast<bool>(strict_c[c]))
      throw InternalError("flow system: strict counter set disagrees with summed solution");
  for (int t = 0; t < nt; ++t)
    if ((fs.flow[t] > 0) != static_cast<bool>(strict_t[t]))
      throw InternalError("flow system: strict transition set disagrees with summed solution");
  fs.strict_counters = mask_to_list(strict_c);
  fs.strict_transitions = mask_to_list(strict_t);
  return fs;
}

RankSolution maximal_rank_solution(const VassMdp& m) {
  const int nc = static_cast<int>(m.counters.size());
  const int ns = static_cast<int>(m.states.size());
  const int nv = nc + ns;  // layout: counter weights, then state offsets

  std::vector<int> nondet_ts;
  std::vector<int> prob_states;
  for (int t = 0; t < static_cast<int>(m.transitions.size()); ++t)
    if (m.kinds[m.transitions[t].src] == StateKind::Nondet) nondet_ts.push_back(t);
  for (int s = 0; s < ns; ++s)
    if (m.kinds[s] == StateKind::Prob && !m.out[s].empty()) prob_states.push_back(s);

  LinearProgram base;
  for (int v = 0; v < nv; ++v) base.add_var(Rat(0));
  for (int t : nondet_ts) {
    std::vector<Rat> coef(nv, Rat(0));
    add_effect_coeffs(m, m.transitions[t], coef, Rat(1));
    base.add_row(coef, Rel::Le, Rat(0));
  }
  for (int s : prob_states) {
    std::vector<Rat> coef(nv, Rat(0));
    for (int t : m.out[s]) add_effect_coeffs(m, m.transitions[t], coef, m.transitions[t].prob);
    base.add_row(coef, Rel::Le, Rat(0));
  }

  std::vector<Rat> sum(nv, Rat(0));
  std::vector<char> strict_c(nc, 0);
  std::vector<char> strict_nd(m.transitions.size(), 0);
  std::vector<char> strict_ps(ns, 0);
  auto accumulate = [&](const std::vector<Rat>& pt) {
    for (int v = 0; v < nv; ++v) sum[v] += pt[v];
  };
  for (int c = 0; c < nc; ++c) {
    LinearProgram lp = base;
    std::vector<Rat> coef(nv, Rat(0));
    coef[c] = 1;
    lp.add_row(coef, Rel::Ge, Rat(1));
    if (auto pt = lp_feasible_point(lp)) {
      strict_c[c] = 1;
      accumulate(*pt);
    }
  }
  for (int t : nondet_ts) {
    LinearProgram lp = base;
    std::vector<Rat> coef(nv, Rat(0));
    add_effect_coeffs(m, m.transitions[t], coef, Rat(1));
    lp.add_row(coef, Rel::Le, Rat(-1));
    if (auto pt = lp_feasible_point(lp)) {
      strict_nd[t] = 1;
      accumulate(*pt);
    }
  }
  for (int s : prob_states) {
    LinearProgram lp = base;
    std::vector<Rat> coef(nv, Rat(0));
    for (int t : m.out[s]) add_effect_coeffs(m, m.transitions[t], coef, m.transitions[t].prob);
    lp.add_row(coef, Rel::Le, Rat(-1));
    if (auto pt = lp_feasible_point(lp)) {
      strict_ps[s] = 1;
      accumulate(*pt);
    }
  }

  const std::vector<Int> scaled = scale_to_integers(sum);
  RankSolution rs;
  rs.counter_weights.assign(scaled.begin(), scaled.begin() + nc);
  rs.state_offsets.assign(scaled.begin() + nc, scaled.end());

  RankFunction rf{rs.counter_weights, rs.state_offsets};
  for (int c = 0; c < nc; ++c)
    if ((rs.counter_weights[c] > 0) != static_cast<bool>(strict_c[c]))
      throw InternalError("rank system: strict counter set disagrees with summed solution");
  for (int t : nondet_ts)
    if ((rank_effect(m, rf, t) < 0) != static_cast<bool>(strict_nd[t]))
      throw InternalError("rank system: strict transition set disagrees with summed solution");
  for (int s : prob_states)
    if ((expected_rank_effect(m, rf, s) < 0) != static_cast<bool>(strict_ps[s]))
      throw InternalError("rank system: strict state set disagrees with summed solution");
  rs.strict_counters = mask_to_list(strict_c);
  rs.strict_nondet_transitions = mask_to_list(strict_nd);
  rs.strict_prob_states = mask_to_list(strict_ps);
  return rs;
}

bool check_dichotomy(const VassMdp& m, const FlowSolution& fs, const RankSolution& rs) {
  std::vector<char> fc(m.counters.size(), 0), ft(m.transitions.size(), 0);
  std::vector<char> rc(m.counters.size(), 0), rt(m.transitions.size(), 0), rp(m.states.size(), 0);
  for (int c : fs.strict_counters) fc[c] = 1;
  for (int t : fs.strict_transitions) ft[t] = 1;
  for (int c : rs.strict_counters) rc[c] = 1;
  for (int t : rs.strict_nondet_transitions) rt[t] = 1;
  for (int s : rs.strict_prob_states) rp[s] = 1;
  for (size_t c = 0; c < m.counters.size(); ++c)
    if (!fc[c] && !rc[c]) return false;
  for (size_t t = 0; t < m.transitions.size(); ++t) {
    const int src = m.transitions[t].src;
    const bool ranked = m.kinds[src] == StateKind::Nondet ? static_cast<bool>(rt[t])
                                                          : static_cast<bool>(rp[src]);
    if (!ft[t] && !ranked) return false;
  }
  return true;
}

Rat rank_effect(const VassMdp& m, const RankFunction& rf, int t) {
  const Transition& tr = m.transitions[t];
  Rat e = Rat(rf.state_offsets[tr.dst] - rf.state_offsets[tr.src]);
  for (size_t c = 0; c < m.counters.size(); ++c) e += Rat(tr.update[c] * rf.counter_weights[c]);
  return e;
}

Rat expected_rank_effect(const VassMdp& m, const RankFunction& rf, int state) {
  Rat e(0);
  for (int t : m.out[state]) e += m.transitions[t].prob * rank_effect(m, rf, t);
  return e;
}

}  // namespace vasco
