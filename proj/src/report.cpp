#include "vasco/report.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "vasco/lp.hpp"

#include "json.hpp"

namespace vasco {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string pad(const std::string& s, size_t w) {
  std::string out = s;
  while (out.size() < w) out.push_back(' ');
  return out;
}

std::string brace_list(const std::vector<std::string>& xs) {
  std::string out = "{";
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += xs[i];
  }
  return out + "}";
}

std::string brace_ints(const std::vector<int>& xs) {
  std::vector<std::string> s;
  for (int x : xs) s.push_back(std::to_string(x));
  return brace_list(s);
}

ordered_json estimate_json(const Estimate& e) {
  ordered_json j;
  j["kind"] = verdict_kind_name(e.kind);
  j["degree"] = e.degree;
  j["display"] = verdict_cell(e);
  j["provenance"] = e.provenance;
  return j;
}

ordered_json named_estimates(const std::vector<std::pair<std::string, Estimate>>& xs) {
  ordered_json arr = ordered_json::array();
  for (const auto& [name, est] : xs) {
    ordered_json j;
    j["name"] = name;
    j.update(estimate_json(est));
    arr.push_back(j);
  }
  return arr;
}

ordered_json header_json(const std::string& command, const std::string& hash) {
  ordered_json j;
  j["tool"] = kToolVersion;
  j["format"] = kFormatVersion;
  j["command"] = command;
  j["model_hash"] = hash;
  return j;
}

void estimate_rows(std::ostringstream& os,
                   const std::string& label_kind,
                   const std::vector<std::pair<std::string, Estimate>>& xs,
                   size_t label_w, size_t cell_w, const std::string& indent) {
  for (const auto& [name, est] : xs)
    os << indent << pad(label_kind + " " + name, label_w) << "  "
       << pad(verdict_cell(est), cell_w) << "  " << est.provenance << "\n";
}

size_t row_widths(const std::vector<std::pair<std::string, Estimate>>& xs,
                  const std::string& label_kind, size_t& label_w, size_t& cell_w) {
  for (const auto& [name, est] : xs) {
    label_w = std::max(label_w, label_kind.size() + 1 + name.size());
    cell_w = std::max(cell_w, verdict_cell(est).size());
  }
  return label_w;
}

}  // namespace

Rat parse_probability(const std::string& s) {
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    const std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    const std::string digits = head + tail;
    if (digits.empty() ||
        !std::all_of(digits.begin(), digits.end(),
                     [](unsigned char c) { return std::isdigit(c); }))
      throw ValidationError("cannot parse probability: " + s);
    Int den = 1;
    for (size_t i = 0; i < tail.size(); ++i) den *= 10;
    return Rat(Int(digits.empty() ? "0" : digits), den);
  }
  std::optional<Rat> r = rat_from_string(s);
  if (!r) throw ValidationError("cannot parse probability: " + s);
  return *r;
}

Observable parse_observable_spec(const std::string& s) {
  if (s == "length") return Observable::length();
  if (s.rfind("counter:", 0) == 0) return Observable::counter(s.substr(8));
  if (s.rfind("transition:", 0) == 0) return Observable::transition(s.substr(11));
  throw ValidationError("target must be length, counter:<name> or transition:<id>");
}

std::string model_hash(const VassMdp& m) {
  const std::string s = serialize_model(m);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string verdict_kind_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::TightPoly: return "TightPoly";
    case VerdictKind::LowerPoly: return "LowerPoly";
    case VerdictKind::ExponentialLower: return "ExponentialLower";
    case VerdictKind::CapReached: return "CapReached";
    case VerdictKind::Unbounded: return "Unbounded";
    case VerdictKind::ThetaN: return "ThetaN";
    case VerdictKind::ThetaN2: return "ThetaN2";
  }
  throw InternalError("unhandled verdict kind");
}

std::string verdict_cell(const Estimate& e) {
  auto poly = [](int d) { return d == 1 ? std::string("n") : "n^" + std::to_string(d); };
  switch (e.kind) {
    case VerdictKind::TightPoly: return "Theta(" + poly(e.degree) + ")";
    case VerdictKind::LowerPoly: return "at least " + poly(e.degree) + " (unresolved)";
    case VerdictKind::ExponentialLower: return "at least 2^(c*n)";
    case VerdictKind::CapReached: return "at least " + poly(e.degree) + " (cap reached)";
    case VerdictKind::Unbounded: return "unbounded";
    case VerdictKind::ThetaN: return "Theta(n)";
    case VerdictKind::ThetaN2: return "Theta(n^2)";
  }
  throw InternalError("unhandled verdict kind");
}

AnalyzeReport make_analyze_report(const VassMdp& m, const ClassifierOptions& opts) {
  AnalyzeReport r;
  r.hash = model_hash(m);
  lp_stats_reset();
  ClassificationResult base = full_classification(m, opts);
  CounterAddition ca = add_step_counter(m);
  ClassificationResult len = full_classification(ca.model, opts);
  r.lp_solves = lp_stats().solves;

  r.length = len.counter_est[ca.counter];
  for (int c = 0; c < m.num_counters(); ++c)
    r.counters.emplace_back(m.counters[c], base.counter_est[c]);
  for (int t = 0; t < m.num_transitions(); ++t)
    r.transitions.emplace_back(m.transitions[t].id, base.transition_est[t]);

  r.cap_reached = base.cap_reached || len.cap_reached;
  r.unresolved = base.unresolved || len.unresolved;
  r.cap = base.cap;
  r.degree_bound = base.degree_bound.str();
  r.final_candidates = base.final_candidates;
  r.steps = base.steps;
  r.notes = base.notes;
  for (const std::string& n : len.notes) r.notes.push_back("length measure: " + n);

  auto open = [](const Estimate& e) {
    return e.kind == VerdictKind::LowerPoly || e.kind == VerdictKind::CapReached;
  };
  bool any_open = open(r.length);
  for (const auto& [name, est] : r.counters) any_open = any_open || open(est);
  for (const auto& [name, est] : r.transitions) any_open = any_open || open(est);
  r.exit_code = any_open ? 3 : 0;
  return r;
}

std::string render_text(const AnalyzeReport& r) {
  std::ostringstream os;
  os << "model " << r.hash << "\n";
  os << "degree bound " << r.degree_bound << "; candidate cap " << r.cap << "\n\n";
  size_t label_w = std::string("length").size(), cell_w = 0;
  cell_w = std::max(cell_w, verdict_cell(r.length).size());
  row_widths(r.counters, "counter", label_w, cell_w);
  row_widths(r.transitions, "transition", label_w, cell_w);
  os << pad("length", label_w) << "  " << pad(verdict_cell(r.length), cell_w) << "  "
     << r.length.provenance << "\n";
  estimate_rows(os, "counter", r.counters, label_w, cell_w, "");
  estimate_rows(os, "transition", r.transitions, label_w, cell_w, "");
  os << "\ncandidates: A=" << brace_ints(r.final_candidates.aset)
     << " B=" << brace_ints(r.final_candidates.bset)
     << " X1=" << brace_ints(r.final_candidates.x1)
     << " X2=" << brace_ints(r.final_candidates.x2) << "\n";
  os << "steps run: " << r.steps.size();
  if (!r.steps.empty()) {
    os << " (k=";
    for (size_t i = 0; i < r.steps.size(); ++i) os << (i ? "," : "") << r.steps[i].k;
    os << ")";
  }
  os << "; lp solves: " << r.lp_solves << "\n";
  for (const std::string& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

std::string render_json(const AnalyzeReport& r) {
  ordered_json j = header_json("analyze", r.hash);
  j["length"] = estimate_json(r.length);
  j["counters"] = named_estimates(r.counters);
  j["transitions"] = named_estimates(r.transitions);
  j["cap"] = r.cap;
  j["cap_reached"] = r.cap_reached;
  j["unresolved"] = r.unresolved;
  j["degree_bound"] = r.degree_bound;
  ordered_json cand;
  cand["aset"] = r.final_candidates.aset;
  cand["bset"] = r.final_candidates.bset;
  cand["x1"] = r.final_candidates.x1;
  cand["x2"] = r.final_candidates.x2;
  cand["all"] = r.final_candidates.all;
  j["candidates"] = cand;
  ordered_json steps = ordered_json::array();
  for (const StepOutcome& o : r.steps) {
    ordered_json s;
    s["k"] = o.k;
    s["x_values"] = o.x_values;
    if (o.t_star) s["t_star"] = *o.t_star;
    else s["t_star"] = nullptr;
    auto names_of = [&](const std::vector<int>& idx, bool trans) {
      ordered_json arr = ordered_json::array();
      for (int i : idx) arr.push_back(trans ? r.transitions[i].first : r.counters[i].first);
      return arr;
    };
    s["newly_tight_transitions"] = names_of(o.newly_tight_transitions, true);
    s["upper_counters"] = names_of(o.upper_counters, false);
    s["upper_transitions"] = names_of(o.upper_transitions, true);
    s["lower_counters"] = names_of(o.lower_counters, false);
    s["lower_transitions"] = names_of(o.lower_transitions, true);
    s["notes"] = o.notes;
    steps.push_back(s);
  }
  j["steps"] = steps;
  j["lp_solves"] = r.lp_solves;
  j["notes"] = r.notes;
  j["exit_code"] = r.exit_code;
  return j.dump(2) + "\n";
}

McReport make_mc_report(const VassMdp& m) {
  McReport r;
  r.hash = model_hash(m);
  r.strongly_connected = is_strongly_connected(m);
  auto section_of = [&](const EndComponent& ec, const McVerdict& v) {
    McReport::Section sec;
    for (int s : ec.states) sec.states.push_back(m.states[s]);
    sec.length = v.length;
    for (int c = 0; c < m.num_counters(); ++c)
      sec.counters.emplace_back(m.counters[c], v.counters[c]);
    for (int t : ec.transitions)
      sec.transitions.emplace_back(m.transitions[t].id, v.transitions[t]);
    for (int c : v.c_plus) sec.c_plus.push_back(m.counters[c]);
    return sec;
  };
  if (r.strongly_connected) {
    McVerdict v = classify_markov_chain(m);
    EndComponent whole;
    for (int s = 0; s < m.num_states(); ++s) whole.states.push_back(s);
    for (int t = 0; t < m.num_transitions(); ++t) whole.transitions.push_back(t);
    r.sections.push_back(section_of(whole, v));
  } else {
    McGeneralResult g = classify_markov_chain_general(m);
    for (const McMecReport& mr : g.mecs) r.sections.push_back(section_of(mr.mec, mr.verdict));
    for (int t : g.transient_transitions) r.transient.push_back(m.transitions[t].id);
  }
  return r;
}

std::string render_text(const McReport& r) {
  std::ostringstream os;
  os << "model " << r.hash << "\n";
  for (size_t i = 0; i < r.sections.size(); ++i) {
    const McReport::Section& sec = r.sections[i];
    os << "component " << (i + 1) << ": states " << brace_list(sec.states) << "\n";
    size_t label_w = std::string("length").size(), cell_w = verdict_cell(sec.length).size();
    row_widths(sec.counters, "counter", label_w, cell_w);
    row_widths(sec.transitions, "transition", label_w, cell_w);
    os << "  " << pad("length", label_w) << "  " << pad(verdict_cell(sec.length), cell_w) << "  "
       << sec.length.provenance << "\n";
    estimate_rows(os, "counter", sec.counters, label_w, cell_w, "  ");
    estimate_rows(os, "transition", sec.transitions, label_w, cell_w, "  ");
    os << "  growing counters: " << brace_list(sec.c_plus) << "\n";
  }
  if (!r.strongly_connected)
    os << "transient transitions: " << brace_list(r.transient)
       << " (used an asymptotically constant number of times)\n";
  return os.str();
}

std::string render_json(const McReport& r) {
  ordered_json j = header_json("mc-classify", r.hash);
  j["strongly_connected"] = r.strongly_connected;
  ordered_json secs = ordered_json::array();
  for (const McReport::Section& sec : r.sections) {
    ordered_json s;
    s["states"] = sec.states;
    s["length"] = estimate_json(sec.length);
    s["counters"] = named_estimates(sec.counters);
    s["transitions"] = named_estimates(sec.transitions);
    s["growing_counters"] = sec.c_plus;
    secs.push_back(s);
  }
  j["components"] = secs;
  j["transient_transitions"] = r.transient;
  j["exit_code"] = r.exit_code;
  return j.dump(2) + "\n";
}

SimulateReport make_simulate_report(const VassMdp& m, const FpEstimate& est,
                                    const std::string& strategy_desc, long long max_steps) {
  SimulateReport r;
  r.hash = model_hash(m);
  switch (est.target.kind) {
    case Observable::Kind::Length: r.target = "length"; break;
    case Observable::Kind::Counter: r.target = "counter:" + est.target.name; break;
    case Observable::Kind::Transition: r.target = "transition:" + est.target.name; break;
  }
  r.strategy = strategy_desc;
  r.p = est.p;
  r.trials = est.trials;
  r.max_steps = max_steps;
  r.points = est.points;
  r.fit = est.fit;
  r.notes.push_back(
      "quantiles maximize only over the supplied strategy; lower-bound checks are one-sided");
  return r;
}

std::string render_text(const SimulateReport& r) {
  std::ostringstream os;
  os << "model " << r.hash << "\n";
  os << "target " << r.target << "  p " << rat_to_string(r.p) << "  trials " << r.trials
     << "  max_steps " << r.max_steps << "  strategy " << r.strategy << "\n";
  os << pad("n", 12) << pad("value", 14) << "censored\n";
  for (const FpPoint& pt : r.points)
    os << pad(std::to_string(pt.n), 12)
       << pad(pt.value ? std::to_string(*pt.value) : "censored", 14) << pt.censored << "\n";
  if (r.fit)
    os << "slope " << fmt_double(r.fit->slope) << " +/- " << fmt_double(r.fit->std_error)
       << " over " << r.fit->points_used << " points\n";
  else
    os << "slope not fitted (need 3 finite points at distinct n)\n";
  for (const std::string& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

std::string render_json(const SimulateReport& r) {
  ordered_json j = header_json("simulate", r.hash);
  j["target"] = r.target;
  j["strategy"] = r.strategy;
  j["p"] = rat_to_string(r.p);
  j["trials"] = r.trials;
  j["max_steps"] = r.max_steps;
  ordered_json pts = ordered_json::array();
  for (const FpPoint& pt : r.points) {
    ordered_json pj;
    pj["n"] = pt.n;
    if (pt.value) pj["value"] = *pt.value;
    else pj["value"] = nullptr;
    pj["censored"] = pt.censored;
    pts.push_back(pj);
  }
  j["points"] = pts;
  if (r.fit) {
    ordered_json f;
    f["slope"] = r.fit->slope;
    f["std_error"] = r.fit->std_error;
    f["points_used"] = r.fit->points_used;
    j["fit"] = f;
  } else {
    j["fit"] = nullptr;
  }
  j["notes"] = r.notes;
  j["exit_code"] = r.exit_code;
  return j.dump(2) + "\n";
}

DecomposeReport make_decompose_report(const VassMdp& m, const MultiComponent& x,
                                      long long selection_cap) {
  DecomposeReport r;
  r.hash = model_hash(m);
  std::vector<std::pair<Rat, Component>> parts = conical_decomposition(m, x, selection_cap);
  MultiComponent sum;
  sum.flow.assign(m.num_transitions(), Rat(0));
  for (const auto& [a, y] : parts) {
    DecomposeReport::Part p;
    p.coefficient = rat_to_string(a);
    p.center = m.states[y.center];
    for (int t : y.mec.transitions) p.support.push_back(m.transitions[t].id);
    r.parts.push_back(std::move(p));
    sum = mc_add(sum, mc_scale(a, y.flow));
  }
  r.exact = sum.flow == x.flow;
  return r;
}

std::string render_text(const DecomposeReport& r) {
  std::ostringstream os;
  os << "model " << r.hash << "\n";
  for (size_t i = 0; i < r.parts.size(); ++i)
    os << "part " << (i + 1) << ": coefficient " << r.parts[i].coefficient << ", center "
       << r.parts[i].center << ", support " << brace_list(r.parts[i].support) << "\n";
  os << (r.exact ? "reconstruction exact\n" : "reconstruction MISMATCH\n");
  return os.str();
}

std::string render_json(const DecomposeReport& r) {
  ordered_json j = header_json("decompose", r.hash);
  ordered_json parts = ordered_json::array();
  for (const DecomposeReport::Part& p : r.parts) {
    ordered_json pj;
    pj["coefficient"] = p.coefficient;
    pj["center"] = p.center;
    pj["support"] = p.support;
    parts.push_back(pj);
  }
  j["parts"] = parts;
  j["exact"] = r.exact;
  j["exit_code"] = r.exit_code;
  return j.dump(2) + "\n";
}

MecListReport make_mec_report(const VassMdp& m) {
  MecListReport r;
  r.hash = model_hash(m);
  MecDecomposition md = mec_decomposition(m);
  std::vector<char> covered(m.num_transitions(), 0);
  for (const EndComponent& ec : md.mecs) {
    MecListReport::Mec mr;
    for (int s : ec.states) mr.states.push_back(m.states[s]);
    for (int t : ec.transitions) {
      mr.transitions.push_back(m.transitions[t].id);
      covered[t] = 1;
    }
    r.mecs.push_back(std::move(mr));
  }
  for (int t = 0; t < m.num_transitions(); ++t)
    if (!covered[t]) r.transient.push_back(m.transitions[t].id);
  return r;
}

std::string render_text(const MecListReport& r) {
  std::ostringstream os;
  os << "model " << r.hash << "\n";
  for (size_t i = 0; i < r.mecs.size(); ++i)
    os << "mec " << (i + 1) << ": states " << brace_list(r.mecs[i].states) << " transitions "
       << brace_list(r.mecs[i].transitions) << "\n";
  os << "transient transitions: " << brace_list(r.transient) << "\n";
  return os.str();
}

std::string render_json(const MecListReport& r) {
  ordered_json j = header_json("mec", r.hash);
  ordered_json mecs = ordered_json::array();
  for (const MecListReport::Mec& mr : r.mecs) {
    ordered_json mj;
    mj["states"] = mr.states;
    mj["transitions"] = mr.transitions;
    mecs.push_back(mj);
  }
  j["mecs"] = mecs;
  j["transient_transitions"] = r.transient;
  j["exit_code"] = r.exit_code;
  return j.dump(2) + "\n";
}

}  // namespace vasco
