#include "vasco/model.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>

namespace vasco {

int VassMdp::state_index(const std::string& name) const {
  for (int i = 0; i < num_states(); ++i)
    if (states[i] == name) return i;
  return -1;
}

int VassMdp::counter_index(const std::string& name) const {
  for (int i = 0; i < num_counters(); ++i)
    if (counters[i] == name) return i;
  return -1;
}

int VassMdp::transition_index(const std::string& id) const {
  for (int i = 0; i < num_transitions(); ++i)
    if (transitions[i].id == id) return i;
  return -1;
}

void VassMdp::finalize() {
  out.assign(num_states(), {});
  in.assign(num_states(), {});
  for (int t = 0; t < num_transitions(); ++t) {
    out[transitions[t].src].push_back(t);
    in[transitions[t].dst].push_back(t);
  }
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream is(line);
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      return false;
  return true;
}

std::optional<Int> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return std::nullopt;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
  try {
    return Int(s);
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace

VassMdp parse_model(const std::string& text) {
  VassMdp m;
  bool have_counters = false;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto toks = tokenize(raw);
    if (toks.empty()) continue;
    if (toks[0] == "counters:") {
      if (have_counters) throw ParseError(lineno, "duplicate counters line");
      if (!m.transitions.empty())
        throw ParseError(lineno, "counters line must precede transitions");
      have_counters = true;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (!valid_name(toks[i])) throw ParseError(lineno, "bad counter name '" + toks[i] + "'");
        if (m.counter_index(toks[i]) >= 0)
          throw ParseError(lineno, "duplicate counter '" + toks[i] + "'");
        m.counters.push_back(toks[i]);
      }
    } else if (toks[0] == "state") {
      if (toks.size() != 3) throw ParseError(lineno, "expected: state <name> <n|p>");
      if (!valid_name(toks[1])) throw ParseError(lineno, "bad state name '" + toks[1] + "'");
      if (m.state_index(toks[1]) >= 0)
        throw ParseError(lineno, "duplicate state '" + toks[1] + "'");
      StateKind k;
      if (toks[2] == "n")
        k = StateKind::Nondet;
      else if (toks[2] == "p")
        k = StateKind::Prob;
      else
        throw ParseError(lineno, "state kind must be 'n' or 'p'");
      m.states.push_back(toks[1]);
      m.kinds.push_back(k);
    } else if (toks[0] == "trans") {
      if (!have_counters) throw ParseError(lineno, "counters line must precede transitions");
      // trans <id> <src> <dst> : <ints...> [@ a/b]
      if (toks.size() < 5 || toks[4] != ":")
        throw ParseError(lineno, "expected: trans <id> <src> <dst> : <updates> [@ <a>/<b>]");
      Transition tr;
      tr.id = toks[1];
      if (!valid_name(tr.id)) throw ParseError(lineno, "bad transition id '" + tr.id + "'");
      if (m.transition_index(tr.id) >= 0)
        throw ParseError(lineno, "duplicate transition '" + tr.id + "'");
      tr.src = m.state_index(toks[2]);
      if (tr.src < 0) throw ParseError(lineno, "unknown state '" + toks[2] + "'");
      tr.dst = m.state_index(toks[3]);
      if (tr.dst < 0) throw ParseError(lineno, "unknown state '" + toks[3] + "'");
      std::size_t i = 5;
      while (i < toks.size() && toks[i] != "@") {
        auto v = parse_int(toks[i]);
        if (!v) throw ParseError(lineno, "bad update '" + toks[i] + "'");
        tr.update.push_back(*v);
        ++i;
      }
      if (tr.update.size() != m.counters.size())
        throw ParseError(lineno, "expected " + std::to_string(m.counters.size()) +
                                     " update entries, got " + std::to_string(tr.update.size()));
      const bool src_prob = m.is_prob(tr.src);
      if (i < toks.size()) {  // toks[i] == "@"
        if (i + 2 != toks.size())
          throw ParseError(lineno, "expected exactly one probability after '@'");
        if (!src_prob)
          throw ParseError(lineno, "probability given on a transition out of a nondeterministic state");
        auto p = rat_from_string(toks[i + 1]);
        if (!p || *p <= 0 || *p > 1)
          throw ParseError(lineno, "bad probability '" + toks[i + 1] + "'");
        tr.prob = *p;
      } else if (src_prob) {
        throw ParseError(lineno, "missing probability on a transition out of a probabilistic state");
      }
      m.transitions.push_back(std::move(tr));
    } else {
      throw ParseError(lineno, "unrecognized directive '" + toks[0] + "'");
    }
  }
  if (!have_counters) throw ParseError(lineno, "missing counters line");
  m.finalize();
  try {
    validate_model(m);
  } catch (const ValidationError& e) {
    throw ParseError(lineno, e.what());
  }
  return m;
}

std::string serialize_model(const VassMdp& m) {
  std::ostringstream os;
  os << "counters:";
  for (const auto& c : m.counters) os << " " << c;
  os << "\n";
  for (int s = 0; s < m.num_states(); ++s)
    os << "state " << m.states[s] << " " << (m.is_prob(s) ? "p" : "n") << "\n";
  for (const auto& t : m.transitions) {
    os << "trans " << t.id << " " << m.states[t.src] << " " << m.states[t.dst] << " :";
    for (const auto& u : t.update) os << " " << u;
    if (m.is_prob(t.src)) os << " @ " << rat_to_fraction_string(t.prob);
    os << "\n";
  }
  return os.str();
}

void validate_model(const VassMdp& m) {
  if (m.states.empty()) throw ValidationError("model has no states");
  if (m.kinds.size() != m.states.size()) throw ValidationError("state kind table out of sync");
  {
    std::set<std::string> seen;
    for (const auto& s : m.states)
      if (!seen.insert(s).second) throw ValidationError("duplicate state '" + s + "'");
    seen.clear();
    for (const auto& c : m.counters)
      if (!seen.insert(c).second) throw ValidationError("duplicate counter '" + c + "'");
    seen.clear();
    for (const auto& t : m.transitions)
      if (!seen.insert(t.id).second) throw ValidationError("duplicate transition '" + t.id + "'");
  }
  std::vector<Rat> prob_sum(m.num_states(), Rat(0));
  std::vector<int> out_deg(m.num_states(), 0);
  for (const auto& t : m.transitions) {
    if (t.src < 0 || t.src >= m.num_states() || t.dst < 0 || t.dst >= m.num_states())
      throw ValidationError("transition '" + t.id + "' references an unknown state");
    if (static_cast<int>(t.update.size()) != m.num_counters())
      throw ValidationError("transition '" + t.id + "' has wrong update arity");
    ++out_deg[t.src];
    if (m.is_prob(t.src)) {
      if (t.prob <= 0) throw ValidationError("transition '" + t.id + "' has non-positive probability");
      prob_sum[t.src] += t.prob;
    }
  }
  for (int s = 0; s < m.num_states(); ++s) {
    if (out_deg[s] == 0)
      throw ValidationError("state '" + m.states[s] + "' has no outgoing transition");
    if (m.is_prob(s) && prob_sum[s] != 1)
      throw ValidationError("probabilities out of state '" + m.states[s] +
                            "' sum to " + rat_to_string(prob_sum[s]) + ", expected 1");
  }
}

namespace {

// Tarjan-free two-pass reachability check is enough at this scale.
void dfs(int start, const std::vector<std::vector<int>>& adj, std::vector<bool>& seen) {
  std::vector<int> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
}

}  // namespace

bool is_strongly_connected(const VassMdp& m) {
  int n = m.num_states();
  if (n == 0) return false;
  std::vector<std::vector<int>> fwd(n), bwd(n);
  for (const auto& t : m.transitions) {
    fwd[t.src].push_back(t.dst);
    bwd[t.dst].push_back(t.src);
  }
  std::vector<bool> seen(n, false);
  dfs(0, fwd, seen);
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) return false;
  std::fill(seen.begin(), seen.end(), false);
  dfs(0, bwd, seen);
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

void validate_strongly_connected(const VassMdp& m) {
  if (!is_strongly_connected(m)) throw PreconditionError("model is not strongly connected");
}

Restriction restrict_transitions(const VassMdp& m, const std::vector<int>& keep) {
  std::vector<bool> keep_mask(m.num_transitions(), false);
  for (int t : keep) {
    if (t < 0 || t >= m.num_transitions())
      throw ValidationError("restriction references an unknown transition");
    keep_mask[t] = true;
  }
  for (int s = 0; s < m.num_states(); ++s) {
    if (!m.is_prob(s)) continue;
    int kept = 0;
    for (int t : m.out[s])
      if (keep_mask[t]) ++kept;
    if (kept != 0 && kept != static_cast<int>(m.out[s].size()))
      throw ValidationError("restriction removes a proper subset of probabilistic state '" +
                            m.states[s] + "' transitions");
  }
  Restriction r;
  r.model.counters = m.counters;
  r.model.states = m.states;
  r.model.kinds = m.kinds;
  for (int t = 0; t < m.num_transitions(); ++t)
    if (keep_mask[t]) {
      r.model.transitions.push_back(m.transitions[t]);
      r.kept.push_back(t);
    }
  r.model.finalize();
  for (int s = 0; s < m.num_states(); ++s)
    if (r.model.out[s].empty()) r.dangling_states.push_back(s);
  r.strongly_connected = is_strongly_connected(r.model);
  return r;
}

VassMdp project_counters(const VassMdp& m, const std::vector<int>& keep) {
  VassMdp p;
  p.states = m.states;
  p.kinds = m.kinds;
  for (int c : keep) {
    if (c < 0 || c >= m.num_counters())
      throw ValidationError("projection references an unknown counter");
    p.counters.push_back(m.counters[c]);
  }
  for (const auto& t : m.transitions) {
    Transition nt = t;
    nt.update.clear();
    for (int c : keep) nt.update.push_back(t.update[c]);
    p.transitions.push_back(std::move(nt));
  }
  p.finalize();
  return p;
}

namespace {

std::string fresh_counter_name(const VassMdp& m, const std::string& base) {
  if (m.counter_index(base) < 0) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (m.counter_index(cand) < 0) return cand;
  }
}

}  // namespace

CounterAddition add_step_counter(const VassMdp& m) {
  CounterAddition res;
  res.model = m;
  res.model.counters.push_back(fresh_counter_name(m, "sc"));
  for (auto& t : res.model.transitions) t.update.push_back(1);
  res.model.finalize();
  res.counter = res.model.num_counters() - 1;
  return res;
}

CounterAddition add_transition_counter(const VassMdp& m, int t) {
  if (t < 0 || t >= m.num_transitions())
    throw ValidationError("transition counter for an unknown transition");
  CounterAddition res;
  res.model = m;
  res.model.counters.push_back(fresh_counter_name(m, "tc_" + m.transitions[t].id));
  for (int i = 0; i < res.model.num_transitions(); ++i)
    res.model.transitions[i].update.push_back(i == t ? 1 : 0);
  res.model.finalize();
  res.counter = res.model.num_counters() - 1;
  return res;
}

}  // namespace vasco
