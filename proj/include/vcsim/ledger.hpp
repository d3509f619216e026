#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "vcsim/amount.hpp"

namespace vcsim {

// The four flows of one cycle over one tick (or accumulated over many):
// value added by work, value extracted from a source, value lost, and the
// balancing value gained. added + extracted == lost + gained always.
struct TickFlows {
  ValueAmount added;
  ValueAmount extracted;
  ValueAmount lost;
  ValueAmount gained;

  friend bool operator==(const TickFlows&, const TickFlows&) = default;
};

// (added + extracted) - (lost + gained); zero for every ledger-produced row.
ValueAmount conservation_residual(const TickFlows& f);

// Per-cycle running totals. gained is always derived from the other three,
// so the balance identity is exact by construction, never by tolerance.
class CycleLedger {
 public:
  explicit CycleLedger(std::string cycle_id);

  // Restores a ledger from persisted totals; rejects unbalanced input.
  static CycleLedger from_totals(std::string cycle_id, const TickFlows& totals,
                                 std::int64_t ticks);

  // Books one tick: gained = added + extracted - lost. Returns the row.
  TickFlows record_tick(ValueAmount added, ValueAmount extracted, ValueAmount lost);

  const std::string& cycle_id() const { return cycle_id_; }
  const TickFlows& totals() const { return totals_; }
  std::int64_t ticks() const { return ticks_; }

 private:
  std::string cycle_id_;
  TickFlows totals_;
  std::int64_t ticks_ = 0;
};

// Exact sum of several ledgers (an economy-level view).
struct AggregateTotals {
  std::int64_t members = 0;
  TickFlows totals;
};

AggregateTotals merge_ledgers(std::span<const CycleLedger> ledgers);

// A stock observation used for the difference form of gained value.
struct StockSnapshot {
  std::string owner;
  ValueAmount stock;
  std::int64_t tick = 0;
};

// final.stock - initial.stock; both snapshots must belong to the same owner
// and be ordered in time.
ValueAmount value_gained(const StockSnapshot& initial, const StockSnapshot& final_snap);

}  // namespace vcsim
