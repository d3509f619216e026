#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vcsim/amount.hpp"

namespace vcsim {

// 1-based source location; not part of structural equality.
struct SourcePos {
  int line = 0;
  int column = 0;
};

// A flow rate, evaluated at the start of each tick and multiplied by dt.
// constant: fixed rate. proportional: factor * current stock/level of ref.
// ramp: base + slope * t.
struct RateExpr {
  enum class Kind { constant, proportional, ramp };

  Kind kind = Kind::constant;
  std::int64_t const_micro = 0;                  // constant
  std::string ref;                               // proportional: agent or pool id
  std::int64_t factor_micro = 0;                 // proportional
  std::int64_t base_micro = 0;                   // ramp
  std::int64_t slope_micro = 0;                  // ramp
  SourcePos pos;

  static RateExpr constant(std::int64_t micro) {
    RateExpr e;
    e.kind = Kind::constant;
    e.const_micro = micro;
    return e;
  }
  static RateExpr proportional(std::string ref, std::int64_t factor_micro) {
    RateExpr e;
    e.kind = Kind::proportional;
    e.ref = std::move(ref);
    e.factor_micro = factor_micro;
    return e;
  }
  static RateExpr ramp(std::int64_t base_micro, std::int64_t slope_micro) {
    RateExpr e;
    e.kind = Kind::ramp;
    e.base_micro = base_micro;
    e.slope_micro = slope_micro;
    return e;
  }
};

bool operator==(const RateExpr& a, const RateExpr& b);

// A value source: abundant pools never deplete (the system is open through
// them), finite pools clamp extraction at zero.
struct PoolDecl {
  std::string id;
  bool abundant = false;
  ValueAmount initial;  // finite pools only
  SourcePos pos;
};

bool operator==(const PoolDecl& a, const PoolDecl& b);

enum class AgentRole {
  none,
  producer,
  consumer,
  bank,
  central_bank,
  government,
  citizens,
};

const char* agent_role_name(AgentRole r);
std::optional<AgentRole> agent_role_from_name(std::string_view name);

struct AgentDecl {
  std::string id;
  ValueAmount initial;
  AgentRole role = AgentRole::none;
  SourcePos pos;
};

bool operator==(const AgentDecl& a, const AgentDecl& b);

// Optional cycle tag used by detectors that pair cycles:
// n = natural, g = government-backed, c = citizens.
enum class CycleTag { none, natural, government, citizens };

const char* cycle_tag_name(CycleTag t);

// One cycle of value. Each tick the actor adds `added`, extracts `extracted`
// from a source, loses `lost`, and the balancing gain lands on a target
// (the actor unless redirected).
struct CycleDecl {
  std::string id;
  CycleTag tag = CycleTag::none;
  std::string actor;
  RateExpr added;
  RateExpr extracted;
  std::string extracted_source;              // pool or agent
  RateExpr lost;
  std::optional<std::string> lost_target;    // pool or agent; default: sink
  std::optional<std::string> gained_target;  // pool or agent; default: actor
  SourcePos pos;
};

bool operator==(const CycleDecl& a, const CycleDecl& b);

enum class FlowKind { added, extracted, lost };

const char* flow_kind_name(FlowKind f);

// One-off injection into a flow of one cycle, financed by a pool.
struct JoltAction {
  std::string cycle;
  FlowKind flow = FlowKind::added;
  ValueAmount amount;
  std::string source_pool;

  friend bool operator==(const JoltAction&, const JoltAction&) = default;
};

// Rewrites the constant of a Const rate or the factor of a Prop rate.
struct SetParamAction {
  std::string cycle;
  FlowKind flow = FlowKind::added;
  std::int64_t value_micro = 0;

  friend bool operator==(const SetParamAction&, const SetParamAction&) = default;
};

struct PolicyDecl {
  std::int64_t trigger_tick = 0;
  std::variant<JoltAction, SetParamAction> action;
  SourcePos pos;
};

bool operator==(const PolicyDecl& a, const PolicyDecl& b);

enum class DetectorKind { max_vg, stable_market, subsidy_cross, gov_optimum };

const char* detector_kind_name(DetectorKind k);
std::optional<DetectorKind> detector_kind_from_name(std::string_view name);

struct DetectorDecl {
  DetectorKind kind = DetectorKind::max_vg;
  std::vector<std::string> cycles;  // resolved cycle ids, detector-specific order
  SourcePos pos;
};

bool operator==(const DetectorDecl& a, const DetectorDecl& b);

struct ScenarioAst {
  std::string name;
  std::int64_t dt_micro = ValueAmount::kScale;  // simulation step, > 0
  std::int64_t horizon = 1;                     // number of ticks, >= 1
  std::int64_t seed = 0;
  std::vector<PoolDecl> pools;
  std::vector<AgentDecl> agents;
  std::vector<CycleDecl> cycles;
  std::vector<PolicyDecl> policies;
  std::vector<DetectorDecl> detectors;
};

// Structural equality; source positions are ignored throughout.
bool operator==(const ScenarioAst& a, const ScenarioAst& b);

// The per-tick amount of a rate: rate(t) * dt, evaluated exactly in integer
// arithmetic with a single half-to-even rounding to micro-units. ref_micro
// feeds proportional rates (the referenced stock or level at tick start).
std::int64_t rate_amount_micro(const RateExpr& e, std::int64_t t_micro,
                               std::int64_t dt_micro, std::int64_t ref_micro);

}  // namespace vcsim
