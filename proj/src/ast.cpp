#include "vcsim/ast.hpp"

namespace vcsim {

namespace {

__int128 checked_mul(__int128 a, __int128 b) {
  __int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("rate evaluation overflow");
  return r;
}

__int128 checked_add(__int128 a, __int128 b) {
  __int128 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("rate evaluation overflow");
  return r;
}

}  // namespace

std::int64_t rate_amount_micro(const RateExpr& e, std::int64_t t_micro,
                               std::int64_t dt_micro, std::int64_t ref_micro) {
  constexpr __int128 kScale = ValueAmount::kScale;
  switch (e.kind) {
    case RateExpr::Kind::constant:
      return div_round_half_even(checked_mul(e.const_micro, dt_micro), kScale);
    case RateExpr::Kind::proportional:
      return div_round_half_even(
          checked_mul(checked_mul(e.factor_micro, ref_micro), dt_micro),
          kScale * kScale);
    case RateExpr::Kind::ramp:
      return div_round_half_even(
          checked_mul(checked_add(checked_mul(e.base_micro, kScale),
                                  checked_mul(e.slope_micro, t_micro)),
                      dt_micro),
          kScale * kScale);
  }
  return 0;
}

bool operator==(const RateExpr& a, const RateExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case RateExpr::Kind::constant:
      return a.const_micro == b.const_micro;
    case RateExpr::Kind::proportional:
      return a.ref == b.ref && a.factor_micro == b.factor_micro;
    case RateExpr::Kind::ramp:
      return a.base_micro == b.base_micro && a.slope_micro == b.slope_micro;
  }
  return false;
}

bool operator==(const PoolDecl& a, const PoolDecl& b) {
  return a.id == b.id && a.abundant == b.abundant && a.initial == b.initial;
}

bool operator==(const AgentDecl& a, const AgentDecl& b) {
  return a.id == b.id && a.initial == b.initial && a.role == b.role;
}

bool operator==(const CycleDecl& a, const CycleDecl& b) {
  return a.id == b.id && a.tag == b.tag && a.actor == b.actor && a.added == b.added &&
         a.extracted == b.extracted && a.extracted_source == b.extracted_source &&
         a.lost == b.lost && a.lost_target == b.lost_target &&
         a.gained_target == b.gained_target;
}

bool operator==(const PolicyDecl& a, const PolicyDecl& b) {
  return a.trigger_tick == b.trigger_tick && a.action == b.action;
}

bool operator==(const DetectorDecl& a, const DetectorDecl& b) {
  return a.kind == b.kind && a.cycles == b.cycles;
}

bool operator==(const ScenarioAst& a, const ScenarioAst& b) {
  return a.name == b.name && a.dt_micro == b.dt_micro && a.horizon == b.horizon &&
         a.seed == b.seed && a.pools == b.pools && a.agents == b.agents &&
         a.cycles == b.cycles && a.policies == b.policies && a.detectors == b.detectors;
}

const char* agent_role_name(AgentRole r) {
  switch (r) {
    case AgentRole::none: return "none";
    case AgentRole::producer: return "producer";
    case AgentRole::consumer: return "consumer";
    case AgentRole::bank: return "bank";
    case AgentRole::central_bank: return "central_bank";
    case AgentRole::government: return "government";
    case AgentRole::citizens: return "citizens";
  }
  return "none";
}

std::optional<AgentRole> agent_role_from_name(std::string_view name) {
  for (AgentRole r : {AgentRole::none, AgentRole::producer, AgentRole::consumer,
                      AgentRole::bank, AgentRole::central_bank, AgentRole::government,
                      AgentRole::citizens}) {
    if (name == agent_role_name(r)) return r;
  }
  return std::nullopt;
}

const char* cycle_tag_name(CycleTag t) {
  switch (t) {
    case CycleTag::none: return "";
    case CycleTag::natural: return "n";
    case CycleTag::government: return "g";
    case CycleTag::citizens: return "c";
  }
  return "";
}

const char* flow_kind_name(FlowKind f) {
  switch (f) {
    case FlowKind::added: return "va";
    case FlowKind::extracted: return "ve";
    case FlowKind::lost: return "vl";
  }
  return "va";
}

const char* detector_kind_name(DetectorKind k) {
  switch (k) {
    case DetectorKind::max_vg: return "max_vg";
    case DetectorKind::stable_market: return "stable_market";
    case DetectorKind::subsidy_cross: return "subsidy_cross";
    case DetectorKind::gov_optimum: return "gov_optimum";
  }
  return "max_vg";
}

std::optional<DetectorKind> detector_kind_from_name(std::string_view name) {
  for (DetectorKind k : {DetectorKind::max_vg, DetectorKind::stable_market,
                         DetectorKind::subsidy_cross, DetectorKind::gov_optimum}) {
    if (name == detector_kind_name(k)) return k;
  }
  return std::nullopt;
}

}  // namespace vcsim
