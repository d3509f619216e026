#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "vcsim/detectors.hpp"
#include "vcsim/engine.hpp"

namespace vcsim {

// All file output is exact and deterministic: amounts and times are printed
// with exactly six fraction digits from integer state, never through
// floating point.

// "tick,time,va,ve,vl,vg" rows of one cycle's per-tick flows.
std::string cycle_csv(const ScenarioAst& ast, const CycleSeries& cycle);

// "tick,time,stock" rows; stock at the start of each tick.
std::string agent_csv(const ScenarioAst& ast, const AgentSeries& agent);

// "tick,time,pool,level,net_outflow" rows for every pool; abundant pools
// print the word "abundant" for their level.
std::string pools_csv(const ScenarioAst& ast, const std::vector<PoolSeries>& pools);

std::string events_json(const std::vector<Event>& events);
std::string policies_json(const std::vector<PolicyLogEntry>& log);

// Whole run as one JSON document (the --format json shape).
std::string run_json(const ScenarioAst& ast, const SimulationResult& result,
                     const std::vector<Event>& events);

// Writes the run into dir: per-cycle and per-agent CSVs, pools.csv,
// policies.json, events.json -- or a single run.json when json_format.
void write_run_outputs(const ScenarioAst& ast, const SimulationResult& result,
                       const std::vector<Event>& events,
                       const std::filesystem::path& dir, bool json_format);

// ---- reading series back ------------------------------------------------

// A CSV whose header starts with tick,time; remaining columns stay raw until
// a series is requested.
struct CsvSeriesFile {
  std::vector<std::string> columns;             // names after tick,time
  std::vector<double> times;
  std::vector<std::vector<std::string>> cells;  // [row][column]
};

// Throws std::runtime_error with a reader-facing message on schema trouble
// (missing tick,time prefix, ragged rows, non-uniform time steps).
CsvSeriesFile read_series_csv(std::istream& in);

// Converts one column to a Series on the file's grid; throws if the column
// is missing or holds non-numeric cells.
Series column_series(const CsvSeriesFile& file, const std::string& name);

}  // namespace vcsim
