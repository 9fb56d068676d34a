#pragma once

#include "vasco/classifier.hpp"
#include "vasco/model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vasco {

// UniformRandom picks uniformly among outgoing transitions; FixedCmd follows
// one counterless-memoryless-deterministic selection; PhasedSchedule cycles
// through a list of such selections, each for a step budget.
struct Strategy {
  enum class Kind { UniformRandom, FixedCmd, PhasedSchedule };
  Kind kind = Kind::UniformRandom;
  std::map<int, int> choice;  // FixedCmd: nondeterministic state -> transition
  std::vector<std::pair<std::map<int, int>, long long>> phases;  // PhasedSchedule

  static Strategy uniform() { return {}; }
  static Strategy fixed(std::map<int, int> ch);
  static Strategy phased(std::vector<std::pair<std::map<int, int>, long long>> ph);
};

// Every nondeterministic state mapped to one of its outgoing transitions;
// schedules nonempty with positive budgets.
void validate_strategy(const VassMdp& m, const Strategy& s);

struct TrajectoryStats {
  bool terminated = false;  // false = censored at max_steps
  long long steps = 0;      // the terminal step counts
  std::vector<long long> max_counter;        // includes the initial configuration,
                                             // excludes the terminal one
  std::vector<long long> transition_count;   // the terminal step counts
  uint64_t seed = 0;
};

// Stable per-trial seed stream (splitmix-style mix of master and index).
uint64_t derive_seed(uint64_t master, uint64_t index);

// All counters start at n0 in start_state. Deterministic given the seed; the
// run stops at the first step that would drive a counter negative (that step
// is counted) or after max_steps.
TrajectoryStats run_trajectory(const VassMdp& m, const Strategy& strat, long long n0,
                               long long max_steps, uint64_t seed, int start_state = 0);

struct FpPoint {
  long long n = 0;
  std::optional<long long> value;  // empty when the order statistic is censored
  int censored = 0;                // trials that hit max_steps
};

struct ExponentFit {
  double slope = 0;
  double std_error = 0;
  int points_used = 0;
};

struct FpEstimate {
  Observable target;
  Rat p;
  int trials = 0;
  std::vector<FpPoint> points;
  std::optional<ExponentFit> fit;  // over finite positive points, when >= 3
};

// Per n, the ceil(p * trials)-th order statistic of the observable over
// independent trajectories seeded derive_seed(derive_seed(seed, n), trial);
// censored trials rank as +infinity. Requires 0 < p < 1 and trials >= 30;
// a grid point with every trial censored is an error (increase max_steps).
FpEstimate estimate_fp(const VassMdp& m, const Strategy& strat, const Observable& target,
                       const Rat& p, const std::vector<long long>& n_list, int trials,
                       long long max_steps, uint64_t seed, int start_state = 0);

// Same estimate for several observables out of one shared trajectory pass;
// each result is identical to the corresponding single-target call.
std::vector<FpEstimate> estimate_fp_multi(const VassMdp& m, const Strategy& strat,
                                          const std::vector<Observable>& targets, const Rat& p,
                                          const std::vector<long long>& n_list, int trials,
                                          long long max_steps, uint64_t seed,
                                          int start_state = 0);

// Least-squares slope of log(value) against log(n) with its standard error.
// Requires >= 3 points, distinct n, all values positive.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points);

struct ValidationBudget {
  Rat p = Rat(9, 10);
  std::vector<long long> n_grid = {8, 16, 32, 64, 128};
  int trials = 100;
  long long max_steps = 1000000;
  int cmd_cap = 64;                  // deterministic selections enumerated
  std::vector<Strategy> extra;       // e.g. phased schedules for doubling models
  uint64_t seed = 1;
  int start_state = 0;
};

enum class ValidationOutcome { Pass, Fail, Inconclusive };

struct ItemValidation {
  Observable target;
  VerdictKind claimed = VerdictKind::LowerPoly;
  int claimed_degree = 0;
  ValidationOutcome outcome = ValidationOutcome::Inconclusive;
  std::optional<double> best_slope;  // of the fastest-growing strategy
  std::string detail;
};

// Empirical cross-check of a classification: each tight item's best fitted
// exponent over UniformRandom, enumerated deterministic selections, and the
// extra strategies must land within 0.35 of the claimed degree; exponential
// items need a slope increasing across grid halves by >= 0.5 or monotone
// censoring blowup. The check only maximizes over these strategy families,
// so it is one-sided: growth beyond them is invisible and yields
// Inconclusive, never Fail, unless a tight claim's own fit contradicts it.
std::vector<ItemValidation> validate_report(const VassMdp& m, const ClassificationResult& report,
                                            const ValidationBudget& budget);

}  // namespace vasco
