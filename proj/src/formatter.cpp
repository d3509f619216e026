#include "vcsim/format.hpp"

#include <sstream>

namespace vcsim {

namespace {

std::string rate_text(const RateExpr& e) {
  switch (e.kind) {
    case RateExpr::Kind::constant:
      return format_micro(e.const_micro);
    case RateExpr::Kind::proportional:
      return "prop(" + e.ref + ", " + format_micro(e.factor_micro) + ")";
    case RateExpr::Kind::ramp:
      return "ramp(" + format_micro(e.base_micro) + ", " + format_micro(e.slope_micro) + ")";
  }
  return "";
}

}  // namespace

std::string format_scenario(const ScenarioAst& ast) {
  std::ostringstream out;
  out << "scenario \"" << ast.name << "\" {\n";
  out << "  dt = " << format_micro(ast.dt_micro) << "\n";
  out << "  horizon = " << ast.horizon << "\n";
  out << "  seed = " << ast.seed << "\n";

  for (const PoolDecl& p : ast.pools) {
    out << "  pool " << p.id << " { initial = "
        << (p.abundant ? std::string("abundant") : p.initial.str()) << " }\n";
  }
  for (const AgentDecl& a : ast.agents) {
    out << "  agent " << a.id << " { initial = " << a.initial.str();
    if (a.role != AgentRole::none) out << " role = " << agent_role_name(a.role);
    out << " }\n";
  }
  for (const CycleDecl& c : ast.cycles) {
    out << "  cycle " << c.id;
    if (c.tag != CycleTag::none) out << " tag = " << cycle_tag_name(c.tag);
    out << " {\n";
    out << "    actor = " << c.actor << "\n";
    out << "    va = " << rate_text(c.added) << "\n";
    out << "    ve = " << rate_text(c.extracted) << " from " << c.extracted_source << "\n";
    out << "    vl = " << rate_text(c.lost);
    if (c.lost_target) out << " to " << *c.lost_target;
    out << "\n";
    if (c.gained_target) out << "    vg to " << *c.gained_target << "\n";
    out << "  }\n";
  }
  for (const PolicyDecl& p : ast.policies) {
    out << "  at " << p.trigger_tick << " ";
    if (const auto* jolt = std::get_if<JoltAction>(&p.action)) {
      out << "jolt " << jolt->cycle << " " << flow_kind_name(jolt->flow) << " "
          << jolt->amount.str() << " from " << jolt->source_pool;
    } else {
      const auto& set = std::get<SetParamAction>(p.action);
      out << "set " << set.cycle << "." << flow_kind_name(set.flow) << " = "
          << format_micro(set.value_micro);
    }
    out << "\n";
  }
  for (const DetectorDecl& d : ast.detectors) {
    out << "  detect " << detector_kind_name(d.kind) << "(";
    for (std::size_t i = 0; i < d.cycles.size(); ++i) {
      if (i) out << ", ";
      out << d.cycles[i];
    }
    out << ")\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace vcsim
