#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vasco/report.hpp"
#include "vasco/simulator.hpp"

namespace {

using namespace vasco;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + out_path);
  out << text;
}

// Lines "key=value", '#' comments. Shared by strategy and flow files.
std::vector<std::pair<std::string, std::string>> parse_kv_lines(const std::string& text,
                                                               const std::string& what) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(what + " line " + std::to_string(lineno) + ": expected key=value");
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}

std::map<int, int> parse_cmd_file(const VassMdp& m, const std::string& path) {
  std::map<int, int> choice;
  for (const auto& [state, tid] : parse_kv_lines(read_file(path), "strategy file")) {
    int s = m.state_index(state);
    if (s < 0) throw ValidationError("strategy file names unknown state: " + state);
    int t = m.transition_index(tid);
    if (t < 0) throw ValidationError("strategy file names unknown transition: " + tid);
    choice[s] = t;
  }
  return choice;
}

std::string dirname_of(const std::string& path) {
  auto slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string() : path.substr(0, slash + 1);
}

Strategy parse_strategy_spec(const VassMdp& m, const std::string& spec) {
  if (spec == "uniform") return Strategy::uniform();
  if (spec.rfind("cmd:", 0) == 0) return Strategy::fixed(parse_cmd_file(m, spec.substr(4)));
  if (spec.rfind("phased:", 0) == 0) {
    const std::string path = spec.substr(7);
    const std::string base = dirname_of(path);
    std::vector<std::pair<std::map<int, int>, long long>> phases;
    std::istringstream in(read_file(path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      std::string file;
      long long budget = 0;
      if (!(ls >> file)) continue;
      if (!(ls >> budget))
        throw ValidationError("phased file line " + std::to_string(lineno) +
                              ": expected <cmd-file> <steps>");
      const std::string resolved =
          (!file.empty() && file[0] == '/') ? file : base + file;
      phases.emplace_back(parse_cmd_file(m, resolved), budget);
    }
    return Strategy::phased(std::move(phases));
  }
  throw ValidationError("strategy must be uniform, cmd:<file> or phased:<file>");
}

int start_index(const VassMdp& m, const std::string& name) {
  if (name.empty()) return 0;
  int s = m.state_index(name);
  if (s < 0) throw ValidationError("unknown start state: " + name);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asymptotic termination/counter/transition complexity of VASS MDPs"};
  app.set_version_flag("--version", std::string(kToolVersion) + " (report format " +
                                        std::to_string(kFormatVersion) + ")");
  app.require_subcommand(1);

  std::string model_path, out_path, format = "text";
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("file", model_path, "model file")->required();
    cmd->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--out", out_path, "write the report here instead of stdout");
  };

  int max_k = 16;
  std::string zb_mode = "literal";
  CLI::App* analyze = app.add_subcommand("analyze", "classify every measure");
  add_common(analyze);
  analyze->add_option("--max-k", max_k, "candidate degree cap");
  analyze->add_option("--zb-mode", zb_mode, "zero-boundedness reading used by doubling checks")
      ->check(CLI::IsMember({"literal", "bounded"}));

  CLI::App* mc = app.add_subcommand("mc-classify", "classify a Markov chain");
  add_common(mc);

  std::string target = "length", p_str = "9/10", strategy_spec = "uniform", n_list_str,
              start_name;
  int trials = 100;
  long long max_steps = 1000000;
  uint64_t seed = 1;
  CLI::App* simulate = app.add_subcommand("simulate", "estimate a fixed-probability bound");
  add_common(simulate);
  simulate->add_option("--target", target, "length, counter:<name> or transition:<id>");
  simulate->add_option("--p", p_str, "probability level in (0,1)");
  simulate->add_option("--n-list", n_list_str, "comma-separated initial counter values")
      ->required();
  simulate->add_option("--trials", trials, "trajectories per grid point");
  simulate->add_option("--max-steps", max_steps, "censoring budget per trajectory");
  simulate->add_option("--strategy", strategy_spec, "uniform, cmd:<file> or phased:<file>");
  simulate->add_option("--seed", seed, "master seed");
  simulate->add_option("--start", start_name, "start state (default: first declared)");

  std::string flow_path;
  CLI::App* decompose = app.add_subcommand("decompose", "conically decompose a flow");
  add_common(decompose);
  decompose->add_option("--flow", flow_path, "file of transition-id=rational lines")->required();

  CLI::App* mec = app.add_subcommand("mec", "list maximal end components");
  add_common(mec);

  CLI::App* validate = app.add_subcommand("validate", "parse and check a model");
  validate->add_option("file", model_path, "model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const bool json = format == "json";
    if (analyze->parsed()) {
      VassMdp m = parse_model(read_file(model_path));
      ClassifierOptions opts;
      opts.max_k = max_k;
      opts.zb_mode = zb_mode == "bounded" ? ZbMode::Bounded : ZbMode::Literal;
      AnalyzeReport r = make_analyze_report(m, opts);
      emit(json ? render_json(r) : render_text(r), out_path);
      return r.exit_code;
    }
    if (mc->parsed()) {
      VassMdp m = parse_model(read_file(model_path));
      McReport r = make_mc_report(m);
      emit(json ? render_json(r) : render_text(r), out_path);
      return r.exit_code;
    }
    if (simulate->parsed()) {
      VassMdp m = parse_model(read_file(model_path));
      std::vector<long long> ns;
      {
        std::istringstream ss(n_list_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
          if (tok.empty()) continue;
          ns.push_back(std::stoll(tok));
        }
      }
      Strategy strat = parse_strategy_spec(m, strategy_spec);
      FpEstimate est = estimate_fp(m, strat, parse_observable_spec(target),
                                   parse_probability(p_str), ns, trials, max_steps, seed,
                                   start_index(m, start_name));
      SimulateReport r = make_simulate_report(m, est, strategy_spec, max_steps);
      emit(json ? render_json(r) : render_text(r), out_path);
      return r.exit_code;
    }
    if (decompose->parsed()) {
      VassMdp m = parse_model(read_file(model_path));
      MultiComponent x;
      x.flow.assign(m.num_transitions(), Rat(0));
      for (const auto& [tid, value] : parse_kv_lines(read_file(flow_path), "flow file")) {
        int t = m.transition_index(tid);
        if (t < 0) throw ValidationError("flow file names unknown transition: " + tid);
        std::optional<Rat> r = rat_from_string(value);
        if (!r) throw ValidationError("cannot parse flow value: " + value);
        x.flow[t] = *r;
      }
      DecomposeReport r = make_decompose_report(m, x);
      emit(json ? render_json(r) : render_text(r), out_path);
      return r.exit_code;
    }
    if (mec->parsed()) {
      VassMdp m = parse_model(read_file(model_path));
      MecListReport r = make_mec_report(m);
      emit(json ? render_json(r) : render_text(r), out_path);
      return r.exit_code;
    }
    if (validate->parsed()) {
      VassMdp m = parse_model(read_file(model_path));
      std::cout << "OK " << model_hash(m) << "\n";
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const AnalysisLimitError& e) {
    std::cerr << "analysis limit: " << e.what() << "\n";
    return 1;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
