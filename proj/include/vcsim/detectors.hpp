#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vcsim/ast.hpp"
#include "vcsim/calculus.hpp"
#include "vcsim/engine.hpp"

namespace vcsim {

// A condition located on the simulation grid. `tick` is the grid index the
// event is attributed to; `time` is the sub-grid estimate from linear
// interpolation of the crossing quantity. Witness values (rates evaluated at
// the event time, bracket bounds, consistency flags as 0/1) use a sorted map
// so serialized output is deterministic.
struct Event {
  DetectorKind kind = DetectorKind::max_vg;
  std::int64_t tick = 0;
  double time = 0.0;
  std::map<std::string, double> witness;
};

// All detectors work on *cumulative* value series and scan only samples with
// central-stencil derivatives; series shorter than 3 samples yield nothing.

// Peaks of gained value: the marginal gain crosses from >= 0 to < 0. The
// event tick is the higher of the two bracketing samples; the witness
// carries the added/lost rates interpolated at the crossing time and a
// consistency flag |va_rate - vl_rate| <= tol.
std::vector<Event> detect_max_vg(const Series& vg_cum, const Series& va_cum,
                                 const Series& vl_cum, double tol);

// Maximal runs of ticks where the added and lost rates agree within tol.
// One event per run, attributed to its first tick; the witness carries the
// run bounds and the rates there.
std::vector<Event> detect_stable_market(const Series& va_cum, const Series& vl_cum,
                                        double tol);

// First tick where the subsidized extraction rate stops exceeding the
// natural gain rate (sign change of ve_gov' - vg_nat'). Nothing if the gap
// never changes sign.
std::optional<Event> detect_subsidy_cross(const Series& ve_gov_cum,
                                          const Series& vg_nat_cum);

// Zero crossings of the combined gain rate vgg' + vgc'. A series pair whose
// combined rate is identically zero yields one degenerate-plateau event.
std::vector<Event> detect_gov_optimum(const Series& vg_gov_cum,
                                      const Series& vg_cit_cum);

// Wires the detectors declared in a scenario to the simulated series and
// returns all events in declaration order.
std::vector<Event> run_scenario_detectors(const ScenarioAst& ast,
                                          const SimulationResult& result);

// Cumulative series of one flow column of a simulated cycle.
Series cycle_cumulative_series(const ScenarioAst& ast, const CycleSeries& cycle,
                               FlowKind flow);
Series cycle_gained_cumulative_series(const ScenarioAst& ast, const CycleSeries& cycle);

}  // namespace vcsim
