// vcsim -- deterministic simulator of conservation-accounted value cycles.
//
// Subcommands: check, fmt, run, detect, demo. Exit codes: 0 success,
// 1 scenario/data problems (reported as diagnostics), 2 usage or I/O errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vcsim/check.hpp"
#include "vcsim/demos.hpp"
#include "vcsim/detectors.hpp"
#include "vcsim/engine.hpp"
#include "vcsim/format.hpp"
#include "vcsim/market.hpp"
#include "vcsim/output.hpp"
#include "vcsim/parse.hpp"

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_diagnostics(const std::vector<vcsim::Diagnostic>& diags) {
  for (const vcsim::Diagnostic& d : diags) {
    std::cerr << vcsim::render_diagnostic(d) << "\n";
  }
}

// Parses a scenario file and prints all diagnostics; nullopt means errors.
std::optional<vcsim::ScenarioAst> load_scenario(const std::string& path, int& exit_code) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read '" << path << "'\n";
    exit_code = 2;
    return std::nullopt;
  }
  vcsim::ParseResult parsed = vcsim::parse_scenario(*text);
  print_diagnostics(parsed.diagnostics);
  if (!parsed.ok()) {
    exit_code = 1;
    return std::nullopt;
  }
  return std::move(parsed.ast);
}

int cmd_check(const std::string& path) {
  int exit_code = 0;
  auto ast = load_scenario(path, exit_code);
  if (!ast) return exit_code;
  print_diagnostics(vcsim::check_scenario(*ast));
  std::cout << "ok: scenario '" << ast->name << "', " << ast->cycles.size()
            << " cycle(s), horizon " << ast->horizon << "\n";
  return 0;
}

int cmd_fmt(const std::string& path, bool write) {
  int exit_code = 0;
  auto ast = load_scenario(path, exit_code);
  if (!ast) return exit_code;
  std::string canonical = vcsim::format_scenario(*ast);
  if (write) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << path << "'\n";
      return 2;
    }
    out << canonical;
  } else {
    std::cout << canonical;
  }
  return 0;
}

int cmd_run(const std::string& path, const std::string& out_dir, const std::string& format,
            std::optional<std::int64_t> seed_override) {
  int exit_code = 0;
  auto ast = load_scenario(path, exit_code);
  if (!ast) return exit_code;
  if (seed_override) ast->seed = *seed_override;
  print_diagnostics(vcsim::check_scenario(*ast));

  try {
    vcsim::Simulation sim(*ast);
    vcsim::SimulationResult result = sim.run();
    std::vector<vcsim::Event> events = vcsim::run_scenario_detectors(*ast, result);
    print_diagnostics(result.notes);
    vcsim::write_run_outputs(*ast, result, events, out_dir, format == "json");

    std::cout << "ran '" << ast->name << "': " << ast->horizon << " ticks at dt "
              << vcsim::format_micro(ast->dt_micro) << ", " << result.cycles.size()
              << " cycle(s), " << result.policy_log.size() << " policy action(s), "
              << events.size() << " event(s)\n";
    for (const vcsim::Event& ev : events) {
      std::cout << "event " << vcsim::detector_kind_name(ev.kind) << " at tick "
                << ev.tick << " (t = " << ev.time << ")\n";
    }
    std::cout << "outputs in " << out_dir << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_detect(const std::string& path, const std::string& detector_name,
               const std::vector<std::string>& col_specs, double tol, bool has_tol,
               bool cumulate) {
  auto kind = vcsim::detector_kind_from_name(detector_name);
  if (!kind) {
    std::cerr << "error: unknown detector '" << detector_name
              << "' (expected max_vg, stable_market, subsidy_cross or gov_optimum)\n";
    return 1;
  }

  // Detector input name -> CSV column; engine cycle files work unmapped for
  // the single-cycle detectors.
  std::map<std::string, std::string> cols;
  switch (*kind) {
    case vcsim::DetectorKind::max_vg:
      cols = {{"vg", "vg"}, {"va", "va"}, {"vl", "vl"}};
      break;
    case vcsim::DetectorKind::stable_market:
      cols = {{"va", "va"}, {"vl", "vl"}};
      break;
    case vcsim::DetectorKind::subsidy_cross:
      cols = {{"veg", "veg"}, {"vgn", "vgn"}};
      break;
    case vcsim::DetectorKind::gov_optimum:
      cols = {{"vgg", "vgg"}, {"vgc", "vgc"}};
      break;
  }
  for (const std::string& spec : col_specs) {
    auto eq = spec.find('=');
    if (eq == std::string::npos || !cols.count(spec.substr(0, eq))) {
      std::string inputs;
      for (const auto& [input, column] : cols) {
        if (!inputs.empty()) inputs += ", ";
        inputs += input;
      }
      std::cerr << "error: --col expects INPUT=COLUMN with INPUT one of: " << inputs
                << "\n";
      return 2;
    }
    cols[spec.substr(0, eq)] = spec.substr(eq + 1);
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return 2;
  }

  try {
    vcsim::CsvSeriesFile file = vcsim::read_series_csv(in);
    auto series = [&](const std::string& input) {
      vcsim::Series s = vcsim::column_series(file, cols.at(input));
      return cumulate ? vcsim::cumulative(s) : s;
    };

    std::vector<vcsim::Event> events;
    double dt = file.times[1] - file.times[0];
    switch (*kind) {
      case vcsim::DetectorKind::max_vg: {
        double use_tol = has_tol ? tol : 10.0 * dt * dt;
        events = vcsim::detect_max_vg(series("vg"), series("va"), series("vl"), use_tol);
        break;
      }
      case vcsim::DetectorKind::stable_market: {
        double use_tol = has_tol ? tol : 10.0 * dt * dt;
        events = vcsim::detect_stable_market(series("va"), series("vl"), use_tol);
        break;
      }
      case vcsim::DetectorKind::subsidy_cross: {
        if (auto ev = vcsim::detect_subsidy_cross(series("veg"), series("vgn"))) {
          events.push_back(*ev);
        }
        break;
      }
      case vcsim::DetectorKind::gov_optimum:
        events = vcsim::detect_gov_optimum(series("vgg"), series("vgc"));
        break;
    }
    std::cout << vcsim::events_json(events);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_demo(const std::string& name, const std::string& out_dir, bool list) {
  if (list) {
    for (const std::string& demo : vcsim::demo_names()) std::cout << demo << "\n";
    return 0;
  }
  std::vector<std::string> names;
  if (name.empty()) {
    names = vcsim::demo_names();
  } else {
    try {
      vcsim::demo_scenario_text(name);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    names.push_back(name);
  }

  bool all_pass = true;
  for (const std::string& demo : names) {
    std::optional<std::filesystem::path> out;
    if (!out_dir.empty()) {
      out = names.size() == 1 ? std::filesystem::path(out_dir)
                              : std::filesystem::path(out_dir) / demo;
    }
    vcsim::DemoReport report = vcsim::run_demo(demo, out);
    for (const vcsim::DemoCheck& check : report.checks) {
      std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << report.demo << ": "
                << check.name << " -- " << check.detail << "\n";
    }
    for (const vcsim::Event& ev : report.events) {
      std::cout << "       " << report.demo << ": event "
                << vcsim::detector_kind_name(ev.kind) << " at tick " << ev.tick
                << " (t = " << ev.time << ")\n";
    }
    all_pass = all_pass && report.all_pass();
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic value-cycle simulator"};
  app.require_subcommand(1);

  std::string path, out_dir = "out", format = "csv", detector, demo_name;
  std::vector<std::string> col_specs;
  double tol = 0.0;
  std::int64_t seed = 0;
  bool write = false, cumulate = false, list = false;

  CLI::App* check = app.add_subcommand("check", "parse and analyze a scenario");
  check->add_option("file", path, "scenario file")->required();

  CLI::App* fmt = app.add_subcommand("fmt", "print a scenario in canonical form");
  fmt->add_option("file", path, "scenario file")->required();
  fmt->add_flag("--write", write, "rewrite the file in place");

  CLI::App* run = app.add_subcommand("run", "simulate a scenario and write its series");
  run->add_option("file", path, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory (default: out)");
  run->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "override the scenario's seed setting");

  CLI::App* detect = app.add_subcommand("detect", "run a detector over CSV series");
  detect->add_option("file", path, "CSV file with tick,time,... columns")->required();
  detect->add_option("--detector", detector, "detector name")->required();
  detect->add_option("--col", col_specs, "map detector input to column (INPUT=COLUMN)");
  CLI::Option* tol_opt = detect->add_option("--tol", tol, "override the tolerance");
  detect->add_flag("--cumulate", cumulate,
                   "treat columns as per-tick amounts and accumulate first");

  CLI::App* demo = app.add_subcommand("demo", "run built-in demonstrations");
  demo->add_option("name", demo_name, "demo name (default: all)");
  demo->add_option("--out", out_dir, "write run outputs here")->default_val("");
  demo->add_flag("--list", list, "list demo names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (check->parsed()) return cmd_check(path);
  if (fmt->parsed()) return cmd_fmt(path, write);
  if (run->parsed()) {
    std::optional<std::int64_t> seed_override;
    if (seed_opt->count() > 0) seed_override = seed;
    return cmd_run(path, out_dir, format, seed_override);
  }
  if (detect->parsed()) {
    return cmd_detect(path, detector, col_specs, tol, tol_opt->count() > 0, cumulate);
  }
  if (demo->parsed()) return cmd_demo(demo_name, out_dir, list);
  return 2;
}
