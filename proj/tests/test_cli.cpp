#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// Paths are injected by the build so the suite can run from any directory.
#ifndef VASCO_CLI_PATH
#error "VASCO_CLI_PATH must be defined"
#endif

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run(const std::string& args) {
  std::string cmd = std::string(VASCO_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string model(const std::string& name) {
  return std::string(VASCO_MODELS_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string golden(const std::string& name) {
  return slurp(std::string(VASCO_GOLDEN_DIR) + "/" + name);
}

TEST_CASE("analyze output matches the golden reports byte for byte") {
  CmdResult text = run("analyze " + model("rw1.vass"));
  CHECK(text.exit_code == 0);
  CHECK(text.out == golden("rw1.analyze.txt"));

  CmdResult json = run("analyze " + model("rw1.vass") + " --format json");
  CHECK(json.exit_code == 0);
  CHECK(json.out == golden("rw1.analyze.json"));

  CmdResult expo = run("analyze " + model("expo1.vass"));
  CHECK(expo.exit_code == 0);
  CHECK(expo.out == golden("expo1.analyze.txt"));
}

TEST_CASE("unresolved items surface through the exit code") {
  CmdResult r = run("analyze " + model("twocycle.vass"));
  CHECK(r.exit_code == 3);
  CHECK(r.out == golden("twocycle.analyze.txt"));

  // under the relaxed zero-boundedness reading the doubling analysis closes it
  CmdResult relaxed = run("analyze " + model("twocycle.vass") + " --zb-mode bounded");
  CHECK(relaxed.exit_code == 0);
  CHECK(relaxed.out.find("2^(c*n)") != std::string::npos);
  CHECK(relaxed.out.find("unresolved") == std::string::npos);
}

TEST_CASE("mc-classify matches its goldens") {
  CmdResult text = run("mc-classify " + model("rw1.vass"));
  CHECK(text.exit_code == 0);
  CHECK(text.out == golden("rw1.mc.txt"));

  CmdResult json = run("mc-classify " + model("rw1.vass") + " --format json");
  CHECK(json.exit_code == 0);
  CHECK(json.out == golden("rw1.mc.json"));
}

TEST_CASE("simulate is reproducible down to the byte") {
  std::string args = "simulate " + model("loop-minus.vass") +
                     " --target length --p 1/2 --n-list 8,16,32 --trials 30"
                     " --max-steps 1000 --seed 5";
  CmdResult r = run(args);
  CHECK(r.exit_code == 0);
  CHECK(r.out == golden("loop-minus.simulate.txt"));
  CmdResult again = run(args);
  CHECK(again.out == r.out);
}

TEST_CASE("decompose reports the conical parts") {
  std::string flow = std::string(VASCO_DATA_DIR) + "/expo1.flow";
  CmdResult text = run("decompose " + model("expo1.vass") + " --flow " + flow);
  CHECK(text.exit_code == 0);
  CHECK(text.out == golden("expo1.decompose.txt"));
  CmdResult json = run("decompose " + model("expo1.vass") + " --flow " + flow + " --format json");
  CHECK(json.exit_code == 0);
  CHECK(json.out == golden("expo1.decompose.json"));
}

TEST_CASE("mec listing matches its golden") {
  CmdResult r = run("mec " + model("rw1.vass"));
  CHECK(r.exit_code == 0);
  CHECK(r.out == golden("rw1.mec.txt"));
}

TEST_CASE("validate prints the model hash") {
  CmdResult r = run("validate " + model("rw1.vass"));
  CHECK(r.exit_code == 0);
  CHECK(r.out == "OK 6f0b07eae3918517\n");
}

TEST_CASE("version string is pinned") {
  CmdResult r = run("--version");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "vasco 0.1.0 (report format 1)\n");
}

TEST_CASE("failure modes map to distinct exit codes") {
  CmdResult parse = run("analyze " + std::string(VASCO_DATA_DIR) + "/bad.vass");
  CHECK(parse.exit_code == 1);

  CmdResult precond = run("analyze " + model("twocomponent-disconnected.vass"));
  CHECK(precond.exit_code == 2);

  // the chain classifier handles the disconnected model component-wise instead
  CmdResult mc = run("mc-classify " + model("twocomponent-disconnected.vass"));
  CHECK(mc.exit_code == 0);

  CmdResult usage = run("no-such-subcommand");
  CHECK(usage.exit_code == 1);

  CmdResult missing = run("analyze " + model("does-not-exist.vass"));
  CHECK(missing.exit_code == 1);
}

TEST_CASE("--out writes the same bytes to a file") {
  std::string tmp = std::string(VASCO_DATA_DIR) + "/.out_check.json";
  CmdResult r = run("analyze " + model("rw1.vass") + " --format json --out " + tmp);
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(tmp) == golden("rw1.analyze.json"));
  std::remove(tmp.c_str());
}

}  // namespace
