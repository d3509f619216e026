#include "vcsim/check.hpp"

#include <algorithm>
#include <map>

namespace vcsim {

namespace {

bool is_zero_const(const RateExpr& e) {
  return e.kind == RateExpr::Kind::constant && e.const_micro == 0;
}

// Worst-case cumulative draw on a finite pool: extraction rates evaluated
// tick by tick (negative contributions clipped at zero, inflows ignored)
// plus any jolts the pool finances. Prop rates cannot drain a pool faster
// than geometrically, so they are left out of the projection.
void project_pool_depletion(const ScenarioAst& ast, const PoolDecl& pool,
                            std::vector<Diagnostic>& out) {
  std::vector<const RateExpr*> draws;
  for (const CycleDecl& c : ast.cycles) {
    if (c.extracted_source == pool.id && c.extracted.kind != RateExpr::Kind::proportional) {
      draws.push_back(&c.extracted);
    }
  }
  std::map<std::int64_t, __int128> jolts;
  for (const PolicyDecl& p : ast.policies) {
    if (const auto* jolt = std::get_if<JoltAction>(&p.action)) {
      if (jolt->source_pool == pool.id && jolt->amount.micro() > 0) {
        jolts[p.trigger_tick] += jolt->amount.micro();
      }
    }
  }
  if (draws.empty() && jolts.empty()) return;

  __int128 drawn = 0;
  const __int128 level = pool.initial.micro();
  for (std::int64_t k = 0; k < ast.horizon; ++k) {
    std::int64_t t_micro = k * ast.dt_micro;
    for (const RateExpr* e : draws) {
      std::int64_t amount = rate_amount_micro(*e, t_micro, ast.dt_micro, 0);
      if (amount > 0) drawn += amount;
    }
    if (auto it = jolts.find(k); it != jolts.end()) drawn += it->second;
    if (drawn > level) {
      out.push_back({Severity::warning, pool.pos.line, pool.pos.column,
                     "finite pool '" + pool.id + "' may deplete at tick " +
                         std::to_string(k)});
      return;
    }
  }
}

// Net constant-rate flow of an agent per tick. Only meaningful when every
// cycle touching the agent uses constant rates; returns false otherwise.
bool net_const_rate(const ScenarioAst& ast, const AgentDecl& agent, __int128& net_micro) {
  net_micro = 0;
  for (const CycleDecl& c : ast.cycles) {
    bool pays_added = c.actor == agent.id;
    bool pays_extracted = c.extracted_source == agent.id;
    bool gets_lost = c.lost_target && *c.lost_target == agent.id;
    std::string gain_target = c.gained_target.value_or(c.actor);
    bool gets_gained = gain_target == agent.id;
    if (!(pays_added || pays_extracted || gets_lost || gets_gained)) continue;
    if (c.added.kind != RateExpr::Kind::constant ||
        c.extracted.kind != RateExpr::Kind::constant ||
        c.lost.kind != RateExpr::Kind::constant) {
      return false;
    }
    if (pays_added) net_micro -= c.added.const_micro;
    if (pays_extracted) net_micro -= c.extracted.const_micro;
    if (gets_lost) net_micro += c.lost.const_micro;
    if (gets_gained) {
      net_micro += c.added.const_micro + c.extracted.const_micro - c.lost.const_micro;
    }
  }
  return true;
}

void project_agent_stock(const ScenarioAst& ast, const AgentDecl& agent,
                         std::vector<Diagnostic>& out) {
  __int128 net_rate;
  if (!net_const_rate(ast, agent, net_rate) || net_rate >= 0) return;
  // stock after tick k: initial + (k + 1) * net_rate * dt
  __int128 per_tick = net_rate * ast.dt_micro / ValueAmount::kScale;
  if (per_tick == 0) return;
  __int128 stock = agent.initial.micro();
  for (std::int64_t k = 0; k < ast.horizon; ++k) {
    stock += per_tick;
    if (stock < 0) {
      out.push_back({Severity::warning, agent.pos.line, agent.pos.column,
                     "stock of '" + agent.id + "' may go negative at tick " +
                         std::to_string(k)});
      return;
    }
  }
}

}  // namespace

std::vector<Diagnostic> check_scenario(const ScenarioAst& ast) {
  std::vector<Diagnostic> out;

  for (const PoolDecl& pool : ast.pools) {
    if (pool.abundant) {
      out.push_back({Severity::info, pool.pos.line, pool.pos.column,
                     "system open via pool '" + pool.id + "'"});
      continue;
    }
    project_pool_depletion(ast, pool, out);
    auto drawers = std::count_if(ast.cycles.begin(), ast.cycles.end(),
                                 [&](const CycleDecl& c) {
                                   return c.extracted_source == pool.id;
                                 });
    if (drawers > 1) {
      out.push_back({Severity::info, pool.pos.line, pool.pos.column,
                     "finite pool '" + pool.id + "' is shared by " +
                         std::to_string(drawers) + " cycles"});
    }
  }

  for (const CycleDecl& c : ast.cycles) {
    if (!c.lost_target && !is_zero_const(c.lost)) {
      out.push_back({Severity::warning, c.pos.line, c.pos.column,
                     "cycle '" + c.id + "' loses value out of circulation "
                     "(vl routed to the sink)"});
    }
  }

  for (const AgentDecl& agent : ast.agents) {
    project_agent_stock(ast, agent, out);
  }

  return out;
}

}  // namespace vcsim
