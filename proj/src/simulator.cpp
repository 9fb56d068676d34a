#include "vasco/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace vasco {

Strategy Strategy::fixed(std::map<int, int> ch) {
  Strategy s;
  s.kind = Kind::FixedCmd;
  s.choice = std::move(ch);
  return s;
}

Strategy Strategy::phased(std::vector<std::pair<std::map<int, int>, long long>> ph) {
  Strategy s;
  s.kind = Kind::PhasedSchedule;
  s.phases = std::move(ph);
  return s;
}

namespace {

void validate_selection(const VassMdp& m, const std::map<int, int>& choice) {
  for (int s = 0; s < m.num_states(); ++s) {
    if (m.is_prob(s)) continue;
    auto it = choice.find(s);
    if (it == choice.end())
      throw ValidationError("strategy leaves state " + m.states[s] + " without a choice");
    int t = it->second;
    if (t < 0 || t >= m.num_transitions() || m.transitions[t].src != s)
      throw ValidationError("strategy picks a non-outgoing transition at state " + m.states[s]);
  }
}

}  // namespace

void validate_strategy(const VassMdp& m, const Strategy& s) {
  switch (s.kind) {
    case Strategy::Kind::UniformRandom:
      return;
    case Strategy::Kind::FixedCmd:
      validate_selection(m, s.choice);
      return;
    case Strategy::Kind::PhasedSchedule:
      if (s.phases.empty()) throw ValidationError("phased schedule must have at least one phase");
      for (const auto& [choice, budget] : s.phases) {
        validate_selection(m, choice);
        if (budget < 1) throw ValidationError("phase budgets must be positive");
      }
      return;
  }
  throw InternalError("unhandled strategy kind");
}

uint64_t derive_seed(uint64_t master, uint64_t index) {
  uint64_t z = master + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

// Uniform draw from [0, n) by rejecting the tail of the generator range, so
// results depend only on the seed, not on library internals.
uint64_t bounded_draw(std::mt19937_64& g, uint64_t n) {
  if (n <= 1) return 0;
  const uint64_t limit = (std::numeric_limits<uint64_t>::max() / n) * n;
  uint64_t r = g();
  while (r >= limit) r = g();
  return r % n;
}

// Everything the stepping loop touches, precomputed in machine integers.
struct SimTables {
  std::vector<std::vector<long long>> upd;  // per transition, per counter
  std::vector<int> dst;
  std::vector<uint64_t> den;                 // per state; 0 for nondeterministic
  std::vector<std::vector<uint64_t>> cum;    // cumulative numerators over out[s]
  Strategy::Kind kind = Strategy::Kind::UniformRandom;
  std::vector<int> fixed_choice;             // per state, FixedCmd
  std::vector<std::vector<int>> phase_choice;
  std::vector<long long> budgets;
};

SimTables build_tables(const VassMdp& m, const Strategy& strat, long long n0_max,
                       long long max_steps) {
  if (max_steps < 1) throw ValidationError("max_steps must be at least 1");
  if (n0_max < 0) throw ValidationError("initial counter value must be nonnegative");
  validate_strategy(m, strat);

  Int max_abs = 0;
  for (const Transition& t : m.transitions)
    for (const Int& u : t.update) max_abs = std::max(max_abs, Int(abs(u)));
  if (Int(n0_max) + Int(max_steps) * max_abs >= (Int(1) << 62))
    throw ValidationError("counter range exceeds 64-bit arithmetic; lower max_steps");

  SimTables tb;
  tb.kind = strat.kind;
  tb.upd.resize(m.num_transitions());
  tb.dst.resize(m.num_transitions());
  for (int t = 0; t < m.num_transitions(); ++t) {
    tb.dst[t] = m.transitions[t].dst;
    for (const Int& u : m.transitions[t].update)
      tb.upd[t].push_back(u.convert_to<long long>());
  }
  tb.den.assign(m.num_states(), 0);
  tb.cum.resize(m.num_states());
  const Int u64_max(std::numeric_limits<uint64_t>::max());
  for (int s = 0; s < m.num_states(); ++s) {
    if (!m.is_prob(s)) continue;
    std::vector<Rat> probs;
    for (int t : m.out[s]) probs.push_back(m.transitions[t].prob);
    Int d = lcm_of_denominators(probs);
    if (d > u64_max) throw ValidationError("probability denominators too large to sample");
    tb.den[s] = d.convert_to<uint64_t>();
    uint64_t acc = 0;
    for (const Rat& p : probs) {
      Int scaled = numerator(p) * (d / denominator(p));
      acc += scaled.convert_to<uint64_t>();
      tb.cum[s].push_back(acc);
    }
  }
  if (strat.kind == Strategy::Kind::FixedCmd) {
    tb.fixed_choice.assign(m.num_states(), -1);
    for (const auto& [s, t] : strat.choice)
      if (s >= 0 && s < m.num_states()) tb.fixed_choice[s] = t;
  } else if (strat.kind == Strategy::Kind::PhasedSchedule) {
    for (const auto& [choice, budget] : strat.phases) {
      std::vector<int> ch(m.num_states(), -1);
      for (const auto& [s, t] : choice)
        if (s >= 0 && s < m.num_states()) ch[s] = t;
      tb.phase_choice.push_back(std::move(ch));
      tb.budgets.push_back(budget);
    }
  }
  return tb;
}

TrajectoryStats run_with_tables(const VassMdp& m, const SimTables& tb, long long n0,
                                long long max_steps, uint64_t seed, int start_state) {
  if (start_state < 0 || start_state >= m.num_states())
    throw ValidationError("start state out of range");
  std::mt19937_64 g(seed);
  const int C = m.num_counters();
  std::vector<long long> ctr(C, n0), maxc(C, n0);
  std::vector<long long> tcount(m.num_transitions(), 0);
  int state = start_state;
  size_t phase = 0;
  long long left = tb.budgets.empty() ? 0 : tb.budgets[0];

  TrajectoryStats ts;
  ts.seed = seed;
  long long step = 0;
  while (step < max_steps) {
    ++step;
    int t;
    if (tb.den[state]) {
      const uint64_t r = bounded_draw(g, tb.den[state]);
      const std::vector<uint64_t>& cum = tb.cum[state];
      size_t i = 0;
      while (r >= cum[i]) ++i;
      t = m.out[state][i];
    } else if (tb.kind == Strategy::Kind::UniformRandom) {
      const std::vector<int>& out = m.out[state];
      t = out[bounded_draw(g, out.size())];
    } else if (tb.kind == Strategy::Kind::FixedCmd) {
      t = tb.fixed_choice[state];
    } else {
      t = tb.phase_choice[phase][state];
    }
    ++tcount[t];
    bool dead = false;
    const std::vector<long long>& u = tb.upd[t];
    for (int c = 0; c < C; ++c) {
      ctr[c] += u[c];
      dead = dead || ctr[c] < 0;
    }
    if (dead) {
      ts.terminated = true;
      break;
    }
    for (int c = 0; c < C; ++c) maxc[c] = std::max(maxc[c], ctr[c]);
    state = tb.dst[t];
    if (tb.kind == Strategy::Kind::PhasedSchedule && --left == 0) {
      phase = (phase + 1) % tb.budgets.size();
      left = tb.budgets[phase];
    }
  }
  ts.steps = step;
  ts.max_counter = std::move(maxc);
  ts.transition_count = std::move(tcount);
  return ts;
}

struct ObservableRef {
  Observable::Kind kind = Observable::Kind::Length;
  int index = -1;
};

ObservableRef resolve_observable(const VassMdp& m, const Observable& obs) {
  ObservableRef ref;
  ref.kind = obs.kind;
  switch (obs.kind) {
    case Observable::Kind::Length:
      break;
    case Observable::Kind::Counter:
      ref.index = m.counter_index(obs.name);
      if (ref.index < 0) throw ValidationError("unknown counter: " + obs.name);
      break;
    case Observable::Kind::Transition:
      ref.index = m.transition_index(obs.name);
      if (ref.index < 0) throw ValidationError("unknown transition: " + obs.name);
      break;
  }
  return ref;
}

long long observe(const TrajectoryStats& ts, const ObservableRef& ref) {
  switch (ref.kind) {
    case Observable::Kind::Length:
      return ts.steps;
    case Observable::Kind::Counter:
      return ts.max_counter[ref.index];
    case Observable::Kind::Transition:
      return ts.transition_count[ref.index];
  }
  throw InternalError("unhandled observable kind");
}

int order_index(const Rat& p, int trials) {
  // ceil(p * trials), 1-based
  Int num = numerator(p) * trials;
  Int idx = (num + denominator(p) - 1) / denominator(p);
  return idx.convert_to<int>();
}

// Order statistic with censored trials ranking as +infinity.
std::optional<long long> order_statistic(std::vector<long long>& finite, int censored,
                                         const Rat& p) {
  const int trials = static_cast<int>(finite.size()) + censored;
  const int k = order_index(p, trials);
  if (k > static_cast<int>(finite.size())) return std::nullopt;
  std::sort(finite.begin(), finite.end());
  return finite[k - 1];
}

}  // namespace

TrajectoryStats run_trajectory(const VassMdp& m, const Strategy& strat, long long n0,
                               long long max_steps, uint64_t seed, int start_state) {
  SimTables tb = build_tables(m, strat, n0, max_steps);
  return run_with_tables(m, tb, n0, max_steps, seed, start_state);
}

std::vector<FpEstimate> estimate_fp_multi(const VassMdp& m, const Strategy& strat,
                                          const std::vector<Observable>& targets, const Rat& p,
                                          const std::vector<long long>& n_list, int trials,
                                          long long max_steps, uint64_t seed, int start_state) {
  if (p <= 0 || p >= 1)
    throw ValidationError("probability level must be strictly between 0 and 1");
  if (trials < 30) throw ValidationError("need at least 30 trials");
  if (n_list.empty()) throw ValidationError("need at least one initial value");
  if (targets.empty()) throw ValidationError("need at least one observable");
  std::vector<ObservableRef> refs;
  for (const Observable& t : targets) refs.push_back(resolve_observable(m, t));
  long long n_max = *std::max_element(n_list.begin(), n_list.end());
  SimTables tb = build_tables(m, strat, n_max, max_steps);

  std::vector<FpEstimate> out(targets.size());
  for (size_t i = 0; i < targets.size(); ++i) {
    out[i].target = targets[i];
    out[i].p = p;
    out[i].trials = trials;
  }
  for (long long n : n_list) {
    if (n < 0) throw ValidationError("initial counter values must be nonnegative");
    const uint64_t sn = derive_seed(seed, static_cast<uint64_t>(n));
    // one trajectory per trial; trials depend only on (seed, n, trial), so
    // every observable reads the same runs
    std::vector<std::vector<long long>> finite(targets.size());
    int censored = 0;
    for (int trial = 0; trial < trials; ++trial) {
      TrajectoryStats ts =
          run_with_tables(m, tb, n, max_steps, derive_seed(sn, trial), start_state);
      if (!ts.terminated) {
        ++censored;  // the value kept growing when the budget ran out
      } else {
        for (size_t i = 0; i < refs.size(); ++i) finite[i].push_back(observe(ts, refs[i]));
      }
    }
    if (censored == trials)
      throw AnalysisLimitError("every trial censored at n=" + std::to_string(n) +
                               "; increase max_steps");
    for (size_t i = 0; i < refs.size(); ++i) {
      FpPoint pt;
      pt.n = n;
      pt.censored = censored;
      pt.value = order_statistic(finite[i], censored, p);
      out[i].points.push_back(pt);
    }
  }

  for (FpEstimate& est : out) {
    std::vector<std::pair<double, double>> pts;
    std::vector<long long> seen;
    for (const FpPoint& pt : est.points) {
      if (!pt.value || *pt.value <= 0 || pt.n <= 0) continue;
      if (std::find(seen.begin(), seen.end(), pt.n) != seen.end()) continue;
      seen.push_back(pt.n);
      pts.emplace_back(static_cast<double>(pt.n), static_cast<double>(*pt.value));
    }
    if (pts.size() >= 3) est.fit = fit_exponent(pts);
  }
  return out;
}

FpEstimate estimate_fp(const VassMdp& m, const Strategy& strat, const Observable& target,
                       const Rat& p, const std::vector<long long>& n_list, int trials,
                       long long max_steps, uint64_t seed, int start_state) {
  return std::move(
      estimate_fp_multi(m, strat, {target}, p, n_list, trials, max_steps, seed, start_state)[0]);
}

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw ValidationError("exponent fit needs at least 3 points");
  std::vector<double> xs, ys;
  for (const auto& [n, v] : points) {
    if (!(n > 0) || !(v > 0)) throw ValidationError("exponent fit needs positive data");
    xs.push_back(std::log(n));
    ys.push_back(std::log(v));
  }
  {
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError("exponent fit needs distinct n values");
  }
  const int n = static_cast<int>(xs.size());
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  ExponentFit fit;
  fit.slope = sxy / sxx;
  const double a = my - fit.slope * mx;
  double ss = 0;
  for (int i = 0; i < n; ++i) {
    const double e = ys[i] - a - fit.slope * xs[i];
    ss += e * e;
  }
  fit.std_error = std::sqrt(std::max(0.0, ss / (n - 2)) / sxx);
  fit.points_used = n;
  return fit;
}

namespace {

std::vector<Strategy> enumerate_fixed(const VassMdp& m, int cap) {
  std::vector<int> nondet;
  for (int s = 0; s < m.num_states(); ++s)
    if (!m.is_prob(s)) nondet.push_back(s);
  std::vector<Strategy> out;
  if (nondet.empty()) return out;
  std::vector<size_t> odo(nondet.size(), 0);
  while (static_cast<int>(out.size()) < cap) {
    std::map<int, int> choice;
    for (size_t i = 0; i < nondet.size(); ++i)
      choice[nondet[i]] = m.out[nondet[i]][odo[i]];
    out.push_back(Strategy::fixed(std::move(choice)));
    size_t d = 0;
    while (d < odo.size() && ++odo[d] == m.out[nondet[d]].size()) odo[d++] = 0;
    if (d == odo.size()) break;
  }
  return out;
}

double two_point_slope(const std::vector<std::pair<double, double>>& pts) {
  // Least-squares slope of log v on log n without the 3-point floor.
  double mx = 0, my = 0;
  for (const auto& [n, v] : pts) {
    mx += std::log(n);
    my += std::log(v);
  }
  mx /= pts.size();
  my /= pts.size();
  double sxx = 0, sxy = 0;
  for (const auto& [n, v] : pts) {
    sxx += (std::log(n) - mx) * (std::log(n) - mx);
    sxy += (std::log(n) - mx) * (std::log(v) - my);
  }
  return sxy / sxx;
}

}  // namespace

std::vector<ItemValidation> validate_report(const VassMdp& m, const ClassificationResult& report,
                                            const ValidationBudget& budget) {
  std::vector<Strategy> strategies{Strategy::uniform()};
  for (Strategy& s : enumerate_fixed(m, budget.cmd_cap)) strategies.push_back(std::move(s));
  for (const Strategy& s : budget.extra) {
    validate_strategy(m, s);
    strategies.push_back(s);
  }
  std::vector<long long> grid = budget.n_grid;
  std::sort(grid.begin(), grid.end());

  // One pass of trajectories per strategy; every item reads the same runs.
  long long n_max = grid.empty() ? 0 : grid.back();
  std::vector<std::vector<std::vector<TrajectoryStats>>> runs(strategies.size());
  for (size_t si = 0; si < strategies.size(); ++si) {
    SimTables tb = build_tables(m, strategies[si], n_max, budget.max_steps);
    runs[si].resize(grid.size());
    for (size_t ni = 0; ni < grid.size(); ++ni) {
      const uint64_t sn = derive_seed(budget.seed, static_cast<uint64_t>(grid[ni]));
      for (int trial = 0; trial < budget.trials; ++trial)
        runs[si][ni].push_back(run_with_tables(m, tb, grid[ni], budget.max_steps,
                                               derive_seed(sn, trial), budget.start_state));
    }
  }

  auto points_for = [&](size_t si, const ObservableRef& ref)
      -> std::pair<std::vector<std::pair<double, double>>, std::vector<int>> {
    std::vector<std::pair<double, double>> pts;
    std::vector<int> censored(grid.size(), 0);
    for (size_t ni = 0; ni < grid.size(); ++ni) {
      std::vector<long long> finite;
      for (const TrajectoryStats& ts : runs[si][ni])
        if (!ts.terminated)
          ++censored[ni];
        else
          finite.push_back(observe(ts, ref));
      if (finite.empty()) continue;
      std::optional<long long> v = order_statistic(finite, censored[ni], budget.p);
      if (v && *v > 0 && grid[ni] > 0)
        pts.emplace_back(static_cast<double>(grid[ni]), static_cast<double>(*v));
    }
    return {pts, censored};
  };

  auto validate_item = [&](const Observable& target, const Estimate& claimed) {
    ItemValidation iv;
    iv.target = target;
    iv.claimed = claimed.kind;
    iv.claimed_degree = claimed.degree;
    ObservableRef ref = resolve_observable(m, target);
    if (claimed.kind == VerdictKind::TightPoly) {
      std::optional<double> best;
      for (size_t si = 0; si < strategies.size(); ++si) {
        auto [pts, censored] = points_for(si, ref);
        if (pts.size() < 3) continue;
        double slope = fit_exponent(pts).slope;
        if (!best || slope > *best) best = slope;
      }
      iv.best_slope = best;
      if (!best) {
        iv.outcome = ValidationOutcome::Inconclusive;
        iv.detail = "no strategy produced enough finite points to fit";
      } else if (std::abs(*best - claimed.degree) <= 0.35) {
        iv.outcome = ValidationOutcome::Pass;
        iv.detail = "best fitted exponent " + std::to_string(*best);
      } else {
        iv.outcome = ValidationOutcome::Fail;
        iv.detail = "best fitted exponent " + std::to_string(*best) + " vs claimed degree " +
                    std::to_string(claimed.degree);
      }
    } else if (claimed.kind == VerdictKind::ExponentialLower) {
      bool pass = false;
      std::string how;
      for (size_t si = 0; si < strategies.size() && !pass; ++si) {
        auto [pts, censored] = points_for(si, ref);
        if (pts.size() >= 4) {
          const size_t half = pts.size() / 2;
          std::vector<std::pair<double, double>> lo(pts.begin(), pts.begin() + half);
          std::vector<std::pair<double, double>> hi(pts.begin() + half, pts.end());
          if (lo.size() >= 2 && hi.size() >= 2) {
            double dslope = two_point_slope(hi) - two_point_slope(lo);
            iv.best_slope = two_point_slope(hi);
            if (dslope >= 0.5) {
              pass = true;
              how = "exponent accelerates across the grid";
            }
          }
        }
        if (!pass && !grid.empty()) {
          bool monotone = true;
          for (size_t ni = 1; ni < censored.size(); ++ni)
            monotone = monotone && censored[ni] >= censored[ni - 1];
          if (monotone && censored.back() * 2 >= budget.trials) {
            pass = true;
            how = "runs outgrow the step budget as n rises";
          }
        }
      }
      if (pass) {
        iv.outcome = ValidationOutcome::Pass;
        iv.detail = how;
      } else {
        iv.outcome = ValidationOutcome::Inconclusive;
        iv.detail = "no enumerated strategy exhibits the growth; the check is one-sided";
      }
    } else {
      iv.outcome = ValidationOutcome::Inconclusive;
      iv.detail = "unresolved verdicts are not cross-checked";
    }
    return iv;
  };

  std::vector<ItemValidation> out;
  for (int c = 0; c < m.num_counters(); ++c)
    out.push_back(validate_item(Observable::counter(m.counters[c]), report.counter_est[c]));
  for (int t = 0; t < m.num_transitions(); ++t)
    out.push_back(
        validate_item(Observable::transition(m.transitions[t].id), report.transition_est[t]));
  return out;
}

}  // namespace vasco
