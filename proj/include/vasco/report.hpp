#pragma once

#include "vasco/classifier.hpp"
#include "vasco/simulator.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vasco {

inline constexpr const char* kToolVersion = "vasco 0.1.0";
inline constexpr int kFormatVersion = 1;

// 16 hex digits of FNV-1a over the canonical serialization.
std::string model_hash(const VassMdp& m);

// "9/10", "0.9" and "1" all parse; throws ValidationError otherwise.
Rat parse_probability(const std::string& s);

// "length", "counter:<name>" or "transition:<id>"; names are not resolved
// against any model here.
Observable parse_observable_spec(const std::string& s);

// Fixed ASCII verdict strings ("Theta(n^2)", "at least 2^(c*n)", ...).
std::string verdict_cell(const Estimate& e);
std::string verdict_kind_name(VerdictKind k);

// Every command renders text and JSON from one report value, so the two
// views cannot diverge. JSON field order is fixed; no timestamps anywhere.

struct AnalyzeReport {
  std::string hash;
  Estimate length;
  std::vector<std::pair<std::string, Estimate>> counters;
  std::vector<std::pair<std::string, Estimate>> transitions;
  bool cap_reached = false;
  bool unresolved = false;
  int cap = 0;
  std::string degree_bound;
  CandidateSets final_candidates;
  std::vector<StepOutcome> steps;
  std::vector<std::string> notes;
  std::uint64_t lp_solves = 0;
  int exit_code = 0;  // 0, or 3 when capped/unresolved
};

// Runs the full pipeline on m plus a step-counter extension for the length
// measure; exit code 3 when either run leaves an item open.
AnalyzeReport make_analyze_report(const VassMdp& m, const ClassifierOptions& opts = {});
std::string render_text(const AnalyzeReport& r);
std::string render_json(const AnalyzeReport& r);

struct McReport {
  std::string hash;
  bool strongly_connected = true;
  struct Section {
    std::vector<std::string> states;
    Estimate length;
    std::vector<std::pair<std::string, Estimate>> counters;
    std::vector<std::pair<std::string, Estimate>> transitions;  // in-scope only
    std::vector<std::string> c_plus;
  };
  std::vector<Section> sections;
  std::vector<std::string> transient;  // used an asymptotically constant number of times
  int exit_code = 0;
};

McReport make_mc_report(const VassMdp& m);
std::string render_text(const McReport& r);
std::string render_json(const McReport& r);

struct SimulateReport {
  std::string hash;
  std::string target;
  std::string strategy;
  Rat p;
  int trials = 0;
  long long max_steps = 0;
  std::vector<FpPoint> points;
  std::optional<ExponentFit> fit;
  std::vector<std::string> notes;
  int exit_code = 0;
};

SimulateReport make_simulate_report(const VassMdp& m, const FpEstimate& est,
                                    const std::string& strategy_desc, long long max_steps);
std::string render_text(const SimulateReport& r);
std::string render_json(const SimulateReport& r);

struct DecomposeReport {
  std::string hash;
  struct Part {
    std::string coefficient;
    std::string center;
    std::vector<std::string> support;
  };
  std::vector<Part> parts;
  bool exact = false;  // conical reconstruction re-verified
  int exit_code = 0;
};

DecomposeReport make_decompose_report(const VassMdp& m, const MultiComponent& x,
                                      long long selection_cap = 1000000);
std::string render_text(const DecomposeReport& r);
std::string render_json(const DecomposeReport& r);

struct MecListReport {
  std::string hash;
  struct Mec {
    std::vector<std::string> states;
    std::vector<std::string> transitions;
  };
  std::vector<Mec> mecs;
  std::vector<std::string> transient;
  int exit_code = 0;
};

MecListReport make_mec_report(const VassMdp& m);
std::string render_text(const MecListReport& r);
std::string render_json(const MecListReport& r);

}  // namespace vasco
