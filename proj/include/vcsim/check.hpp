#pragma once

#include <vector>

#include "vcsim/ast.hpp"
#include "vcsim/diagnostic.hpp"

namespace vcsim {

// Static analysis of a resolved scenario. Produces warnings and info notes
// only; anything fatal is already rejected by the parser.
//
// Warnings: a finite pool whose worst-case draw schedule depletes it before
// the horizon; value lost to the sink (leaves circulation for good); an agent
// whose constant-rate net flow drains its stock before the horizon.
// Info notes: abundant pools (the system is open through them); finite pools
// shared by several extracting cycles.
std::vector<Diagnostic> check_scenario(const ScenarioAst& ast);

}  // namespace vcsim
