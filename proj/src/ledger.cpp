#include "vcsim/ledger.hpp"

#include <stdexcept>
#include <utility>

namespace vcsim {

ValueAmount conservation_residual(const TickFlows& f) {
  return (f.added + f.extracted) - (f.lost + f.gained);
}

CycleLedger::CycleLedger(std::string cycle_id) : cycle_id_(std::move(cycle_id)) {
  if (cycle_id_.empty()) throw std::invalid_argument("cycle id must not be empty");
}

CycleLedger CycleLedger::from_totals(std::string cycle_id, const TickFlows& totals,
                                     std::int64_t ticks) {
  if (ticks < 0) throw std::invalid_argument("tick count must not be negative");
  if (conservation_residual(totals) != ValueAmount{}) {
    throw std::invalid_argument("imported totals violate the balance identity");
  }
  CycleLedger ledger(std::move(cycle_id));
  ledger.totals_ = totals;
  ledger.ticks_ = ticks;
  return ledger;
}

TickFlows CycleLedger::record_tick(ValueAmount added, ValueAmount extracted, ValueAmount lost) {
  TickFlows row{added, extracted, lost, (added + extracted) - lost};
  totals_.added += row.added;
  totals_.extracted += row.extracted;
  totals_.lost += row.lost;
  totals_.gained += row.gained;
  ++ticks_;
  return row;
}

AggregateTotals merge_ledgers(std::span<const CycleLedger> ledgers) {
  AggregateTotals agg;
  for (const CycleLedger& l : ledgers) {
    agg.totals.added += l.totals().added;
    agg.totals.extracted += l.totals().extracted;
    agg.totals.lost += l.totals().lost;
    agg.totals.gained += l.totals().gained;
    ++agg.members;
  }
  return agg;
}

ValueAmount value_gained(const StockSnapshot& initial, const StockSnapshot& final_snap) {
  if (initial.owner != final_snap.owner) {
    throw std::invalid_argument("stock snapshots belong to different owners");
  }
  if (final_snap.tick < initial.tick) {
    throw std::invalid_argument("final snapshot precedes initial snapshot");
  }
  return final_snap.stock - initial.stock;
}

}  // namespace vcsim
