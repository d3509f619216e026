#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "vcsim/ast.hpp"
#include "vcsim/diagnostic.hpp"

namespace vcsim {

struct ParseResult {
  std::optional<ScenarioAst> ast;  // present iff there are no error diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return ast.has_value(); }
};

// Parses and resolves a scenario. Recovery is per top-level declaration, so
// several independent errors are reported in one pass. All reference,
// uniqueness and range problems surface here as error diagnostics with the
// offending source position.
ParseResult parse_scenario(std::string_view source);

}  // namespace vcsim
