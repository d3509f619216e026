#pragma once

#include <string>

#include "vcsim/ast.hpp"

namespace vcsim {

// Renders a scenario in canonical form: settings first, then pools, agents,
// cycles, policies and detectors in declaration order; every fixed-point
// number with exactly six fraction digits; comments dropped. Formatting is
// idempotent and parse(format(ast)) == ast structurally.
std::string format_scenario(const ScenarioAst& ast);

}  // namespace vcsim
