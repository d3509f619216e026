#pragma once

#include <string>
#include <vector>

namespace vcsim {

enum class Severity { error, warning, info };

// One message anchored to a source position (1-based; 0 means "whole file").
struct Diagnostic {
  Severity severity = Severity::error;
  int line = 0;
  int column = 0;
  std::string message;
};

const char* severity_name(Severity s);

// "error: 3:7: message" -- the shape the CLI prints to stderr.
std::string render_diagnostic(const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diags);

}  // namespace vcsim
