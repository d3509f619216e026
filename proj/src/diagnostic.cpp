#include "vcsim/diagnostic.hpp"

namespace vcsim {

const char* severity_name(Severity s) {
  switch (s) {
    case Severity::error: return "error";
    case Severity::warning: return "warning";
    case Severity::info: return "info";
  }
  return "error";
}

std::string render_diagnostic(const Diagnostic& d) {
  std::string out = severity_name(d.severity);
  out += ": ";
  if (d.line > 0) {
    out += std::to_string(d.line);
    out += ":";
    out += std::to_string(d.column);
    out += ": ";
  }
  out += d.message;
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const Diagnostic& d : diags) {
    if (d.severity == Severity::error) return true;
  }
  return false;
}

}  // namespace vcsim
