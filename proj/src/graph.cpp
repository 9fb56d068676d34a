#include "vasco/graph.hpp"

#include <algorithm>
#include <set>

namespace vasco {

namespace {

struct TarjanScc {
  const VassMdp& m;
  const std::vector<bool>& alive_state;
  const std::vector<bool>& trans_mask;
  std::vector<int> index, low, comp;
  std::vector<bool> on_stack;
  std::vector<int> stack;
  int next_index = 0, next_comp = 0;

  TarjanScc(const VassMdp& m_, const std::vector<bool>& alive, const std::vector<bool>& mask)
      : m(m_), alive_state(alive), trans_mask(mask),
        index(m.num_states(), -1), low(m.num_states(), 0),
        comp(m.num_states(), -1), on_stack(m.num_states(), false) {}

  // Iterative Tarjan to keep deep chains off the call stack.
  void run(int root) {
    struct Frame { int v; std::size_t ei; };
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& f = frames.back();
      int v = f.v;
      bool descended = false;
      while (f.ei < m.out[v].size()) {
        int t = m.out[v][f.ei++];
        if (!trans_mask[t]) continue;
        int w = m.transitions[t].dst;
        if (!alive_state[w]) continue;
        if (index[w] < 0) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        for (;;) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = next_comp;
          if (w == v) break;
        }
        ++next_comp;
      }
      frames.pop_back();
      if (!frames.empty()) {
        int parent = frames.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
};

}  // namespace

std::vector<std::vector<int>> scc_of(const VassMdp& m, const std::vector<bool>& trans_mask) {
  std::vector<bool> alive(m.num_states(), true);
  TarjanScc tj(m, alive, trans_mask);
  for (int v = 0; v < m.num_states(); ++v)
    if (tj.index[v] < 0) tj.run(v);
  std::vector<std::vector<int>> comps(tj.next_comp);
  for (int v = 0; v < m.num_states(); ++v) comps[tj.comp[v]].push_back(v);
  return comps;
}

MecDecomposition mec_decomposition(const VassMdp& m) {
  return mec_decomposition(m, std::vector<bool>(m.num_transitions(), true));
}

MecDecomposition mec_decomposition(const VassMdp& m, const std::vector<bool>& init_mask) {
  std::vector<bool> alive(m.num_states(), true);
  std::vector<bool> mask = init_mask;
  bool changed = true;
  std::vector<int> comp_of(m.num_states(), -1);
  while (changed) {
    changed = false;
    TarjanScc tj(m, alive, mask);
    for (int v = 0; v < m.num_states(); ++v)
      if (alive[v] && tj.index[v] < 0) tj.run(v);
    comp_of.assign(m.num_states(), -1);
    for (int v = 0; v < m.num_states(); ++v)
      if (alive[v]) comp_of[v] = tj.comp[v];

    for (int v = 0; v < m.num_states(); ++v) {
      if (!alive[v]) continue;
      if (m.is_prob(v)) {
        bool escapes = false;
        for (int t : m.out[v]) {
          if (!mask[t]) continue;
          int w = m.transitions[t].dst;
          if (!alive[w] || comp_of[w] != comp_of[v]) {
            escapes = true;
            break;
          }
        }
        if (escapes) {
          alive[v] = false;
          for (int t : m.out[v]) mask[t] = false;
          changed = true;
        }
      } else {
        int kept = 0;
        for (int t : m.out[v]) {
          if (!mask[t]) continue;
          int w = m.transitions[t].dst;
          if (!alive[w] || comp_of[w] != comp_of[v]) {
            mask[t] = false;
            changed = true;
          } else {
            ++kept;
          }
        }
        if (kept == 0) {
          alive[v] = false;
          changed = true;
        }
      }
    }
    // Dropping states invalidates transitions into them.
    for (int t = 0; t < m.num_transitions(); ++t)
      if (mask[t] && (!alive[m.transitions[t].src] || !alive[m.transitions[t].dst])) {
        mask[t] = false;
        changed = true;
      }
  }

  // Remaining SCCs with at least one internal transition are the MECs.
  MecDecomposition d;
  d.state_mec.assign(m.num_states(), std::nullopt);
  d.transition_mec.assign(m.num_transitions(), std::nullopt);
  std::vector<std::vector<int>> groups;
  {
    std::set<int> comps;
    for (int v = 0; v < m.num_states(); ++v)
      if (alive[v]) comps.insert(comp_of[v]);
    for (int c : comps) {
      std::vector<int> states;
      for (int v = 0; v < m.num_states(); ++v)
        if (alive[v] && comp_of[v] == c) states.push_back(v);
      bool has_transition = false;
      for (int v : states)
        for (int t : m.out[v])
          if (mask[t]) has_transition = true;
      if (has_transition) groups.push_back(std::move(states));
    }
  }
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (const auto& states : groups) {
    EndComponent ec;
    ec.states = states;
    for (int v : states)
      for (int t : m.out[v])
        if (mask[t]) ec.transitions.push_back(t);
    std::sort(ec.transitions.begin(), ec.transitions.end());
    int idx = static_cast<int>(d.mecs.size());
    for (int v : ec.states) d.state_mec[v] = idx;
    for (int t : ec.transitions) d.transition_mec[t] = idx;
    d.mecs.push_back(std::move(ec));
  }
  return d;
}

bool is_end_component(const VassMdp& m, const EndComponent& ec) {
  if (ec.states.empty()) return false;
  std::vector<bool> in_c(m.num_states(), false);
  for (int v : ec.states) {
    if (v < 0 || v >= m.num_states()) return false;
    in_c[v] = true;
  }
  std::vector<bool> in_l(m.num_transitions(), false);
  for (int t : ec.transitions) {
    if (t < 0 || t >= m.num_transitions()) return false;
    in_l[t] = true;
    if (!in_c[m.transitions[t].src] || !in_c[m.transitions[t].dst]) return false;
  }
  for (int v : ec.states) {
    if (m.is_prob(v)) {
      for (int t : m.out[v])
        if (!in_l[t]) return false;
    } else {
      bool any = false;
      for (int t : m.out[v])
        if (in_l[t]) any = true;
      if (!any) return false;
    }
  }
  // Strong connectivity of (states, transitions).
  TarjanScc tj(m, in_c, in_l);
  tj.run(ec.states.front());
  for (int v : ec.states)
    if (tj.index[v] < 0 || tj.comp[v] != tj.comp[ec.states.front()]) return false;
  return true;
}

}  // namespace vasco
