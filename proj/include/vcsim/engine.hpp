#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "vcsim/ast.hpp"
#include "vcsim/diagnostic.hpp"
#include "vcsim/ledger.hpp"

namespace vcsim {

struct PoolState {
  bool abundant = false;
  ValueAmount level;                // finite pools only
  ValueAmount net_outflow;          // cumulative outflow minus inflow
};

struct WorldState {
  std::int64_t tick = 0;
  std::vector<ValueAmount> stocks;  // by agent declaration index
  std::vector<PoolState> pools;     // by pool declaration index
  ValueAmount sink;                 // value lost out of circulation
  std::vector<CycleLedger> ledgers; // by cycle declaration index
};

struct PolicyLogEntry {
  std::int64_t tick = 0;
  std::string cycle;
  FlowKind flow = FlowKind::added;
  bool is_jolt = false;
  ValueAmount requested;            // jolt
  ValueAmount applied;              // jolt, after clamping to the pool level
  std::string source_pool;          // jolt
  std::int64_t value_micro = 0;     // set
};

// Per-tick flow rows of one cycle; index k = flows booked during tick k.
struct CycleSeries {
  std::string cycle_id;
  std::vector<ValueAmount> added, extracted, lost, gained;
};

// Stock of one agent at the start of each tick (index k = before tick k ran).
struct AgentSeries {
  std::string agent_id;
  std::vector<ValueAmount> stock;
};

struct PoolSeries {
  std::string pool_id;
  bool abundant = false;
  std::vector<ValueAmount> level;        // finite pools
  std::vector<ValueAmount> net_outflow;  // start of tick, like stocks
};

struct SimulationResult {
  std::vector<CycleSeries> cycles;
  std::vector<AgentSeries> agents;
  std::vector<PoolSeries> pools;
  std::vector<PolicyLogEntry> policy_log;
  std::vector<Diagnostic> notes;   // runtime warnings (clamps, negative values)
  WorldState final_state;
};

// Deterministic executor of a resolved scenario. All state is exact
// micro-unit integer arithmetic; a given scenario always produces
// byte-identical results.
//
// Tick semantics: policies due this tick apply first (in declaration order),
// then cycles execute in declaration order. Rates read the start-of-tick
// snapshot, so cycles that share no finite pool are order-independent;
// finite-pool extraction clamps against the running level.
class Simulation {
 public:
  // The scenario must have passed parsing/resolution; broken references
  // throw std::invalid_argument here.
  explicit Simulation(const ScenarioAst& ast);

  // Starts a fresh run (also resets any policy rewrites from earlier runs).
  WorldState initial_state();

  // Executes one tick and returns the flows booked by each cycle.
  std::vector<TickFlows> step(WorldState& state);

  // Applies one policy at the current tick: a set rewrites the rate for this
  // and all later ticks; a jolt draws on its pool now and joins the named
  // flow when the cycle executes this tick.
  void apply_policy(WorldState& state, const PolicyDecl& policy);

  // initial_state + horizon steps + series collection.
  SimulationResult run();

  // Sum of all stocks and finite pool levels plus the sink, minus what the
  // abundant pools have injected. Constant over any run.
  ValueAmount total_system_value(const WorldState& state) const;

  const ScenarioAst& scenario() const { return ast_; }
  const std::vector<PolicyLogEntry>& policy_log() const { return policy_log_; }
  const std::vector<Diagnostic>& notes() const { return notes_; }

 private:
  std::int64_t ref_snapshot(const std::string& id) const;
  void warn(SourcePos pos, std::string msg);

  ScenarioAst ast_;
  std::vector<CycleDecl> live_cycles_;  // rates after policy rewrites
  std::unordered_map<std::string, std::size_t> agent_index_;
  std::unordered_map<std::string, std::size_t> pool_index_;
  std::unordered_map<std::string, std::size_t> cycle_index_;
  std::multimap<std::int64_t, const PolicyDecl*> schedule_;

  // Jolt amounts staged for the current tick, keyed by (cycle, flow).
  std::map<std::pair<std::size_t, FlowKind>, std::int64_t> staged_jolts_;
  std::vector<std::int64_t> snapshot_stocks_;
  std::vector<std::int64_t> snapshot_levels_;

  std::vector<PolicyLogEntry> policy_log_;
  std::vector<Diagnostic> notes_;
  std::vector<bool> warned_negative_stock_;
  std::vector<bool> warned_negative_flow_;
  std::vector<int> clamp_warnings_;          // per cycle, capped
  std::vector<std::int64_t> clamp_counts_;   // per cycle, total
};

}  // namespace vcsim
