#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vcsim/detectors.hpp"
#include "vcsim/engine.hpp"

namespace vcsim {

// One verified claim of a demo: a value the run must reproduce.
struct DemoCheck {
  std::string name;
  std::string detail;  // "expected ... got ..." in display form
  bool pass = false;
};

struct DemoReport {
  std::string demo;
  std::vector<DemoCheck> checks;
  std::vector<Event> events;
  std::vector<Diagnostic> notes;

  bool all_pass() const;
};

// The built-in demonstration scenarios, in display order:
// savings, bankchain, shale, government, supply_demand, lln.
const std::vector<std::string>& demo_names();

// Scenario source of a demo; identical to the file shipped under demos/.
// Throws std::invalid_argument for unknown names.
std::string_view demo_scenario_text(std::string_view name);

// Parses, simulates and verifies one demo. When out_dir is given the full
// run output is written there as CSV + JSON.
DemoReport run_demo(std::string_view name,
                    const std::optional<std::filesystem::path>& out_dir);

}  // namespace vcsim
