#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vasco/model.hpp"
#include "vasco/report.hpp"
#include "vasco/simulator.hpp"

namespace py = pybind11;

namespace {

using namespace vasco;

VassMdp model_from(const std::string& text) { return parse_model(text); }

ClassifierOptions options_from(int max_k, const std::string& zb_mode) {
  ClassifierOptions opts;
  opts.max_k = max_k;
  if (zb_mode == "literal")
    opts.zb_mode = ZbMode::Literal;
  else if (zb_mode == "bounded")
    opts.zb_mode = ZbMode::Bounded;
  else
    throw ValidationError("zb_mode must be literal or bounded");
  return opts;
}

std::map<int, int> selection_from(const VassMdp& m, const py::dict& d) {
  std::map<int, int> out;
  for (auto item : d) {
    const std::string state = py::cast<std::string>(item.first);
    const std::string tid = py::cast<std::string>(item.second);
    int s = m.state_index(state);
    if (s < 0) throw ValidationError("unknown state: " + state);
    int t = m.transition_index(tid);
    if (t < 0) throw ValidationError("unknown transition: " + tid);
    out[s] = t;
  }
  return out;
}

Strategy strategy_from(const VassMdp& m, const py::object& spec) {
  if (py::isinstance<py::str>(spec)) {
    if (py::cast<std::string>(spec) == "uniform") return Strategy::uniform();
    throw ValidationError("string strategies must be 'uniform'");
  }
  if (py::isinstance<py::dict>(spec))
    return Strategy::fixed(selection_from(m, py::cast<py::dict>(spec)));
  if (py::isinstance<py::list>(spec) || py::isinstance<py::tuple>(spec)) {
    std::vector<std::pair<std::map<int, int>, long long>> phases;
    for (auto phase : py::cast<py::sequence>(spec)) {
      auto pair = py::cast<py::sequence>(phase);
      phases.emplace_back(selection_from(m, py::cast<py::dict>(pair[0])),
                          py::cast<long long>(pair[1]));
    }
    return Strategy::phased(std::move(phases));
  }
  throw ValidationError("strategy must be 'uniform', a selection dict, or a phase list");
}

int start_from(const VassMdp& m, const std::string& name) {
  if (name.empty()) return 0;
  int s = m.state_index(name);
  if (s < 0) throw ValidationError("unknown state: " + name);
  return s;
}

}  // namespace

PYBIND11_MODULE(_vasco, mod) {
  mod.doc() = "asymptotic termination/counter/transition complexity of VASS MDPs";
  mod.attr("__version__") = "0.1.0";

  py::register_exception<ParseError>(mod, "ModelParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(mod, "ModelValidationError", PyExc_ValueError);
  py::register_exception<PreconditionError>(mod, "PreconditionFailure", PyExc_ValueError);
  py::register_exception<AnalysisLimitError>(mod, "AnalysisLimit", PyExc_RuntimeError);

  mod.def(
      "canonical_form",
      [](const std::string& text) { return serialize_model(model_from(text)); },
      py::arg("text"), "Parse, validate and reserialize a model in canonical form.");

  mod.def(
      "model_hash", [](const std::string& text) { return model_hash(model_from(text)); },
      py::arg("text"));

  mod.def(
      "analyze_json",
      [](const std::string& text, int max_k, const std::string& zb_mode) {
        return render_json(make_analyze_report(model_from(text), options_from(max_k, zb_mode)));
      },
      py::arg("text"), py::arg("max_k") = 16, py::arg("zb_mode") = "literal",
      "Classify every measure of a strongly connected model; returns the JSON report.");

  mod.def(
      "mc_classify_json",
      [](const std::string& text) { return render_json(make_mc_report(model_from(text))); },
      py::arg("text"), "Classify a model with no genuine nondeterminism as a Markov chain.");

  mod.def(
      "mec_json",
      [](const std::string& text) { return render_json(make_mec_report(model_from(text))); },
      py::arg("text"));

  mod.def(
      "decompose_json",
      [](const std::string& text, const std::map<std::string, std::string>& flow) {
        VassMdp m = model_from(text);
        MultiComponent x;
        x.flow.assign(m.num_transitions(), Rat(0));
        for (const auto& [tid, value] : flow) {
          int t = m.transition_index(tid);
          if (t < 0) throw ValidationError("unknown transition: " + tid);
          std::optional<Rat> r = rat_from_string(value);
          if (!r) throw ValidationError("cannot parse flow value: " + value);
          x.flow[t] = *r;
        }
        return render_json(make_decompose_report(m, x));
      },
      py::arg("text"), py::arg("flow"),
      "Conically decompose a flow given as {transition id: rational string}.");

  mod.def(
      "simulate_json",
      [](const std::string& text, const std::string& target, const std::string& p,
         const std::vector<long long>& n_list, int trials, long long max_steps,
         const py::object& strategy, uint64_t seed, const std::string& start) {
        VassMdp m = model_from(text);
        Strategy strat = strategy_from(m, strategy);
        FpEstimate est = estimate_fp(m, strat, parse_observable_spec(target),
                                     parse_probability(p), n_list, trials, max_steps, seed,
                                     start_from(m, start));
        std::string desc = py::isinstance<py::str>(strategy)
                               ? py::cast<std::string>(strategy)
                               : std::string(py::isinstance<py::dict>(strategy) ? "cmd" : "phased");
        return render_json(make_simulate_report(m, est, desc, max_steps));
      },
      py::arg("text"), py::arg("target"), py::arg("p"), py::arg("n_list"), py::arg("trials"),
      py::arg("max_steps"), py::arg("strategy") = "uniform", py::arg("seed") = uint64_t{1},
      py::arg("start") = "",
      "Estimate the fixed-probability bound of one observable over an n grid.");

  mod.def(
      "run_trajectory",
      [](const std::string& text, const py::object& strategy, long long n0, long long max_steps,
         uint64_t seed, const std::string& start) {
        VassMdp m = model_from(text);
        TrajectoryStats ts =
            run_trajectory(m, strategy_from(m, strategy), n0, max_steps, seed, start_from(m, start));
        py::dict out;
        out["terminated"] = ts.terminated;
        out["steps"] = ts.steps;
        py::dict maxc;
        for (int c = 0; c < m.num_counters(); ++c) maxc[py::str(m.counters[c])] = ts.max_counter[c];
        out["max_counter"] = maxc;
        py::dict tc;
        for (int t = 0; t < m.num_transitions(); ++t)
          tc[py::str(m.transitions[t].id)] = ts.transition_count[t];
        out["transition_count"] = tc;
        return out;
      },
      py::arg("text"), py::arg("strategy"), py::arg("n0"), py::arg("max_steps"), py::arg("seed"),
      py::arg("start") = "", "Run one seeded trajectory and return its statistics.");
}
