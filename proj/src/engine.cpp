#include "vcsim/engine.hpp"

#include <stdexcept>

namespace vcsim {

namespace {

constexpr int kClampWarningCap = 3;

std::int64_t checked_mul_i64(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("tick time overflow");
  return r;
}

}  // namespace

Simulation::Simulation(const ScenarioAst& ast) : ast_(ast) {
  if (ast_.dt_micro <= 0) throw std::invalid_argument("dt must be positive");
  if (ast_.horizon < 0) throw std::invalid_argument("horizon must not be negative");
  for (std::size_t i = 0; i < ast_.agents.size(); ++i) {
    agent_index_.emplace(ast_.agents[i].id, i);
  }
  for (std::size_t i = 0; i < ast_.pools.size(); ++i) {
    pool_index_.emplace(ast_.pools[i].id, i);
  }
  for (std::size_t i = 0; i < ast_.cycles.size(); ++i) {
    cycle_index_.emplace(ast_.cycles[i].id, i);
  }

  auto require_ref = [&](const std::string& id) {
    if (!agent_index_.count(id) && !pool_index_.count(id)) {
      throw std::invalid_argument("unresolved reference '" + id + "'");
    }
  };
  for (const CycleDecl& c : ast_.cycles) {
    if (!agent_index_.count(c.actor)) {
      throw std::invalid_argument("cycle actor '" + c.actor + "' is not an agent");
    }
    require_ref(c.extracted_source);
    if (c.lost_target) require_ref(*c.lost_target);
    if (c.gained_target) require_ref(*c.gained_target);
    for (const RateExpr* e : {&c.added, &c.extracted, &c.lost}) {
      if (e->kind == RateExpr::Kind::proportional) require_ref(e->ref);
    }
  }
  for (const PolicyDecl& p : ast_.policies) {
    const std::string& cycle = p.action.index() == 0
                                   ? std::get<JoltAction>(p.action).cycle
                                   : std::get<SetParamAction>(p.action).cycle;
    if (!cycle_index_.count(cycle)) {
      throw std::invalid_argument("policy refers to unknown cycle '" + cycle + "'");
    }
    if (const auto* jolt = std::get_if<JoltAction>(&p.action)) {
      if (!pool_index_.count(jolt->source_pool)) {
        throw std::invalid_argument("jolt source '" + jolt->source_pool +
                                    "' is not a pool");
      }
    }
    schedule_.emplace(p.trigger_tick, &p);
  }

  live_cycles_ = ast_.cycles;
  warned_negative_stock_.assign(ast_.agents.size(), false);
  warned_negative_flow_.assign(ast_.cycles.size(), false);
  clamp_warnings_.assign(ast_.cycles.size(), 0);
  clamp_counts_.assign(ast_.cycles.size(), 0);
}

WorldState Simulation::initial_state() {
  live_cycles_ = ast_.cycles;
  staged_jolts_.clear();
  policy_log_.clear();
  notes_.clear();
  warned_negative_stock_.assign(ast_.agents.size(), false);
  warned_negative_flow_.assign(ast_.cycles.size(), false);
  clamp_warnings_.assign(ast_.cycles.size(), 0);
  clamp_counts_.assign(ast_.cycles.size(), 0);

  WorldState state;
  state.stocks.reserve(ast_.agents.size());
  for (const AgentDecl& a : ast_.agents) state.stocks.push_back(a.initial);
  state.pools.reserve(ast_.pools.size());
  for (const PoolDecl& p : ast_.pools) {
    PoolState ps;
    ps.abundant = p.abundant;
    ps.level = p.abundant ? ValueAmount{} : p.initial;
    state.pools.push_back(ps);
  }
  state.ledgers.reserve(ast_.cycles.size());
  for (const CycleDecl& c : ast_.cycles) state.ledgers.emplace_back(c.id);
  return state;
}

void Simulation::warn(SourcePos pos, std::string msg) {
  notes_.push_back({Severity::warning, pos.line, pos.column, std::move(msg)});
}

void Simulation::apply_policy(WorldState& state, const PolicyDecl& policy) {
  PolicyLogEntry entry;
  entry.tick = state.tick;
  if (const auto* jolt = std::get_if<JoltAction>(&policy.action)) {
    std::size_t cycle = cycle_index_.at(jolt->cycle);
    std::size_t pool = pool_index_.at(jolt->source_pool);
    PoolState& ps = state.pools[pool];
    ValueAmount applied = jolt->amount;
    if (!ps.abundant && applied > ps.level) {
      warn(policy.pos, "jolt into cycle '" + jolt->cycle + "' clamped to the remaining "
                       "level of pool '" + jolt->source_pool + "' at tick " +
                       std::to_string(state.tick));
      applied = ps.level;
    }
    if (!ps.abundant) ps.level -= applied;
    ps.net_outflow += applied;
    staged_jolts_[{cycle, jolt->flow}] += applied.micro();
    entry.cycle = jolt->cycle;
    entry.flow = jolt->flow;
    entry.is_jolt = true;
    entry.requested = jolt->amount;
    entry.applied = applied;
    entry.source_pool = jolt->source_pool;
  } else {
    const auto& set = std::get<SetParamAction>(policy.action);
    std::size_t cycle = cycle_index_.at(set.cycle);
    CycleDecl& c = live_cycles_[cycle];
    RateExpr& e = set.flow == FlowKind::added     ? c.added
                  : set.flow == FlowKind::extracted ? c.extracted
                                                    : c.lost;
    switch (e.kind) {
      case RateExpr::Kind::constant:
        e.const_micro = set.value_micro;
        break;
      case RateExpr::Kind::proportional:
        e.factor_micro = set.value_micro;
        break;
      case RateExpr::Kind::ramp:
        throw std::invalid_argument("cannot set a ramp rate");
    }
    entry.cycle = set.cycle;
    entry.flow = set.flow;
    entry.is_jolt = false;
    entry.value_micro = set.value_micro;
  }
  policy_log_.push_back(std::move(entry));
}

std::int64_t Simulation::ref_snapshot(const std::string& id) const {
  if (auto it = agent_index_.find(id); it != agent_index_.end()) {
    return snapshot_stocks_[it->second];
  }
  return snapshot_levels_[pool_index_.at(id)];
}

std::vector<TickFlows> Simulation::step(WorldState& state) {
  auto [begin, end] = schedule_.equal_range(state.tick);
  for (auto it = begin; it != end; ++it) apply_policy(state, *it->second);

  snapshot_stocks_.clear();
  for (ValueAmount s : state.stocks) snapshot_stocks_.push_back(s.micro());
  snapshot_levels_.clear();
  for (const PoolState& p : state.pools) snapshot_levels_.push_back(p.level.micro());

  std::int64_t t_micro = checked_mul_i64(state.tick, ast_.dt_micro);
  std::vector<TickFlows> rows;
  rows.reserve(live_cycles_.size());

  for (std::size_t i = 0; i < live_cycles_.size(); ++i) {
    const CycleDecl& c = live_cycles_[i];
    auto eval = [&](const RateExpr& e) {
      std::int64_t ref = e.kind == RateExpr::Kind::proportional ? ref_snapshot(e.ref) : 0;
      return rate_amount_micro(e, t_micro, ast_.dt_micro, ref);
    };
    ValueAmount added_rate = ValueAmount::from_micro(eval(c.added));
    ValueAmount extracted_rate = ValueAmount::from_micro(eval(c.extracted));
    ValueAmount lost_rate = ValueAmount::from_micro(eval(c.lost));

    auto staged = [&](FlowKind f) {
      auto it = staged_jolts_.find({i, f});
      return it == staged_jolts_.end() ? ValueAmount{} : ValueAmount::from_micro(it->second);
    };
    ValueAmount jolt_added = staged(FlowKind::added);
    ValueAmount jolt_extracted = staged(FlowKind::extracted);
    ValueAmount jolt_lost = staged(FlowKind::lost);

    // The extraction rate draws on the cycle's source; clamp against a
    // finite pool's remaining level. Jolts were financed at policy time.
    auto src_pool = pool_index_.find(c.extracted_source);
    if (src_pool != pool_index_.end()) {
      PoolState& ps = state.pools[src_pool->second];
      if (!ps.abundant && extracted_rate > ps.level) {
        ++clamp_counts_[i];
        if (clamp_warnings_[i] < kClampWarningCap) {
          ++clamp_warnings_[i];
          warn(c.pos, "ve of cycle '" + c.id + "' clamped to the remaining level of "
                      "pool '" + c.extracted_source + "' at tick " +
                      std::to_string(state.tick));
        }
        extracted_rate = ps.level;
      }
      if (!ps.abundant) ps.level -= extracted_rate;
      ps.net_outflow += extracted_rate;
    } else {
      state.stocks[agent_index_.at(c.extracted_source)] -= extracted_rate;
    }

    // Booked flows. A loss jolt transits the cycle, so it shows up in the
    // extraction column as well and leaves the gain unchanged.
    ValueAmount booked_added = added_rate + jolt_added;
    ValueAmount booked_extracted = extracted_rate + jolt_extracted + jolt_lost;
    ValueAmount booked_lost = lost_rate + jolt_lost;

    TickFlows row = state.ledgers[i].record_tick(booked_added, booked_extracted, booked_lost);

    state.stocks[agent_index_.at(c.actor)] -= added_rate;

    auto deposit = [&](const std::string& target, ValueAmount amount) {
      if (auto a = agent_index_.find(target); a != agent_index_.end()) {
        state.stocks[a->second] += amount;
        return;
      }
      PoolState& ps = state.pools[pool_index_.at(target)];
      if (!ps.abundant) ps.level += amount;
      ps.net_outflow -= amount;
    };
    if (c.lost_target) {
      deposit(*c.lost_target, row.lost);
    } else {
      state.sink += row.lost;
    }
    deposit(c.gained_target.value_or(c.actor), row.gained);

    if (!warned_negative_flow_[i] &&
        (row.added < ValueAmount{} || row.extracted < ValueAmount{} ||
         row.lost < ValueAmount{} || row.gained < ValueAmount{})) {
      warned_negative_flow_[i] = true;
      warn(c.pos, "cycle '" + c.id + "' produced a negative flow at tick " +
                  std::to_string(state.tick));
    }
    rows.push_back(row);
  }

  for (std::size_t a = 0; a < state.stocks.size(); ++a) {
    if (!warned_negative_stock_[a] && state.stocks[a] < ValueAmount{}) {
      warned_negative_stock_[a] = true;
      warn(ast_.agents[a].pos, "stock of '" + ast_.agents[a].id +
                               "' went negative at tick " + std::to_string(state.tick));
    }
  }

  staged_jolts_.clear();
  ++state.tick;
  return rows;
}

SimulationResult Simulation::run() {
  WorldState state = initial_state();

  SimulationResult result;
  result.cycles.reserve(ast_.cycles.size());
  for (const CycleDecl& c : ast_.cycles) {
    CycleSeries s;
    s.cycle_id = c.id;
    result.cycles.push_back(std::move(s));
  }
  result.agents.reserve(ast_.agents.size());
  for (const AgentDecl& a : ast_.agents) {
    AgentSeries s;
    s.agent_id = a.id;
    result.agents.push_back(std::move(s));
  }
  result.pools.reserve(ast_.pools.size());
  for (const PoolDecl& p : ast_.pools) {
    PoolSeries s;
    s.pool_id = p.id;
    s.abundant = p.abundant;
    result.pools.push_back(std::move(s));
  }

  for (std::int64_t k = 0; k < ast_.horizon; ++k) {
    for (std::size_t a = 0; a < state.stocks.size(); ++a) {
      result.agents[a].stock.push_back(state.stocks[a]);
    }
    for (std::size_t p = 0; p < state.pools.size(); ++p) {
      result.pools[p].level.push_back(state.pools[p].level);
      result.pools[p].net_outflow.push_back(state.pools[p].net_outflow);
    }
    std::vector<TickFlows> rows = step(state);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      result.cycles[i].added.push_back(rows[i].added);
      result.cycles[i].extracted.push_back(rows[i].extracted);
      result.cycles[i].lost.push_back(rows[i].lost);
      result.cycles[i].gained.push_back(rows[i].gained);
    }
  }

  for (std::size_t i = 0; i < clamp_counts_.size(); ++i) {
    if (clamp_counts_[i] > clamp_warnings_[i]) {
      warn(ast_.cycles[i].pos,
           "ve of cycle '" + ast_.cycles[i].id + "' was clamped on " +
               std::to_string(clamp_counts_[i]) + " ticks in total");
    }
  }
  result.policy_log = policy_log_;
  result.notes = notes_;
  result.final_state = std::move(state);
  return result;
}

ValueAmount Simulation::total_system_value(const WorldState& state) const {
  ValueAmount total;
  for (ValueAmount s : state.stocks) total += s;
  for (const PoolState& p : state.pools) {
    if (p.abundant) {
      total -= p.net_outflow;
    } else {
      total += p.level;
    }
  }
  total += state.sink;
  return total;
}

}  // namespace vcsim
