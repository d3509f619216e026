#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "vcsim/demos.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

// Runs the installed binary with stderr folded into stdout.
CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(VCSIM_CLI_PATH) + " " + args + " 2>&1";
  CliResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) {
    res.output.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

fs::path demo_file(const std::string& name) {
  return fs::path(VCSIM_DEMO_DIR) / (name + ".scn");
}

fs::path temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("vcsim_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("shipped scenario files match the built-in sources") {
  for (const std::string& name : vcsim::demo_names()) {
    CAPTURE(name);
    CHECK(slurp(demo_file(name)) == vcsim::demo_scenario_text(name));
  }
}

TEST_CASE("check exits 0 on clean input and 1 on broken input") {
  CHECK(run_cli("check " + demo_file("savings").string()).exit_code == 0);

  const fs::path dir = temp_dir("check");
  const fs::path bad = dir / "bad.scn";
  std::ofstream(bad) << "scenario \"bad\" {\n  cycle c {\n}\n";
  const CliResult r = run_cli("check " + bad.string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("error:") != std::string::npos);

  CHECK(run_cli("check " + (dir / "missing.scn").string()).exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("fmt is idempotent through the command line") {
  const CliResult once = run_cli("fmt " + demo_file("bankchain").string());
  REQUIRE(once.exit_code == 0);

  const fs::path dir = temp_dir("fmt");
  const fs::path canon = dir / "canon.scn";
  std::ofstream(canon) << once.output;
  const CliResult twice = run_cli("fmt " + canon.string());
  CHECK(twice.exit_code == 0);
  CHECK(twice.output == once.output);
  fs::remove_all(dir);
}

TEST_CASE("run writes the full CSV bundle") {
  const fs::path dir = temp_dir("run");
  const CliResult r =
      run_cli("run " + demo_file("savings").string() + " --out " + dir.string());
  REQUIRE(r.exit_code == 0);

  const std::string cycle = slurp(dir / "cycle_acct.csv");
  CHECK(cycle.rfind("tick,time,va,ve,vl,vg", 0) == 0);

  // the account balance after the first interest payment, start of tick 12
  const std::string agent = slurp(dir / "agent_saver.csv");
  CHECK(agent.rfind("tick,time,stock", 0) == 0);
  CHECK(agent.find("\n12,12.000000,990.000000\n") != std::string::npos);

  CHECK(fs::exists(dir / "pools.csv"));
  CHECK(fs::exists(dir / "policies.json"));
  CHECK(fs::exists(dir / "events.json"));
  fs::remove_all(dir);
}

TEST_CASE("run emits one document in json mode") {
  const fs::path dir = temp_dir("runjson");
  const CliResult r = run_cli("run " + demo_file("shale").string() + " --out " +
                              dir.string() + " --format json");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("event subsidy_cross at tick 334") != std::string::npos);
  const std::string doc = slurp(dir / "run.json");
  CHECK(doc.front() == '{');
  CHECK(doc.find("\"subsidy_cross\"") != std::string::npos);
  CHECK(!fs::exists(dir / "pools.csv"));
  fs::remove_all(dir);
}

TEST_CASE("run --seed overrides the scenario's seed in the record") {
  const fs::path dir = temp_dir("runseed");
  const CliResult r = run_cli("run " + demo_file("lln").string() + " --out " +
                              dir.string() + " --format json --seed 99");
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(dir / "run.json").find("\"seed\": 99") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("detect locates a peak in a hand-written rate table") {
  // vg rate 5 - t sampled at dt = 0.1: the running gain peaks at t = 5
  const fs::path dir = temp_dir("detect");
  const fs::path csv = dir / "rates.csv";
  {
    std::ofstream out(csv);
    out << "tick,time,va,ve,vl,vg\n";
    char line[128];
    for (int k = 0; k < 80; ++k) {
      const double t = 0.1 * k;
      std::snprintf(line, sizeof line, "%d,%.6f,%.6f,0,0,%.6f\n", k, t, 5.0 - t,
                    5.0 - t);
      out << line;
    }
  }
  const CliResult r =
      run_cli("detect " + csv.string() + " --detector max_vg --cumulate");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("\"tick\": 50") != std::string::npos);
  CHECK(r.output.find("\"time\": 5.05") != std::string::npos);

  // without --cumulate these columns are levels, not rates; the peak moves
  const CliResult missing =
      run_cli("detect " + csv.string() + " --detector max_vg --col vg=nope");
  CHECK(missing.exit_code == 1);
  CHECK(missing.output.find("nope") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("the demo driver reports its claims") {
  const CliResult listed = run_cli("demo --list");
  REQUIRE(listed.exit_code == 0);
  for (const std::string& name : vcsim::demo_names()) {
    CHECK(listed.output.find(name) != std::string::npos);
  }

  const CliResult savings = run_cli("demo savings");
  REQUIRE(savings.exit_code == 0);
  CHECK(savings.output.find("[PASS]") != std::string::npos);
  CHECK(savings.output.find("[FAIL]") == std::string::npos);

  CHECK(run_cli("demo no_such_demo").exit_code == 2);
}
