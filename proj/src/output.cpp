#include "vcsim/output.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vcsim {

namespace {

std::string time_text(const ScenarioAst& ast, std::size_t tick) {
  std::int64_t t_micro;
  if (__builtin_mul_overflow(static_cast<std::int64_t>(tick), ast.dt_micro, &t_micro)) {
    throw OverflowError("tick time overflow");
  }
  return format_micro(t_micro);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

nlohmann::json event_to_json(const Event& ev) {
  nlohmann::json witness = nlohmann::json::object();
  for (const auto& [key, value] : ev.witness) witness[key] = value;
  return nlohmann::json{{"kind", detector_kind_name(ev.kind)},
                        {"tick", ev.tick},
                        {"time", ev.time},
                        {"witness", witness}};
}

nlohmann::json policy_to_json(const PolicyLogEntry& entry) {
  nlohmann::json j{{"tick", entry.tick},
                   {"cycle", entry.cycle},
                   {"flow", flow_kind_name(entry.flow)}};
  if (entry.is_jolt) {
    j["type"] = "jolt";
    j["requested"] = entry.requested.str();
    j["applied"] = entry.applied.str();
    j["pool"] = entry.source_pool;
  } else {
    j["type"] = "set";
    j["value"] = format_micro(entry.value_micro);
  }
  return j;
}

}  // namespace

std::string cycle_csv(const ScenarioAst& ast, const CycleSeries& cycle) {
  std::ostringstream out;
  out << "tick,time,va,ve,vl,vg\n";
  for (std::size_t k = 0; k < cycle.added.size(); ++k) {
    out << k << ',' << time_text(ast, k) << ',' << cycle.added[k].str() << ','
        << cycle.extracted[k].str() << ',' << cycle.lost[k].str() << ','
        << cycle.gained[k].str() << '\n';
  }
  return out.str();
}

std::string agent_csv(const ScenarioAst& ast, const AgentSeries& agent) {
  std::ostringstream out;
  out << "tick,time,stock\n";
  for (std::size_t k = 0; k < agent.stock.size(); ++k) {
    out << k << ',' << time_text(ast, k) << ',' << agent.stock[k].str() << '\n';
  }
  return out.str();
}

std::string pools_csv(const ScenarioAst& ast, const std::vector<PoolSeries>& pools) {
  std::ostringstream out;
  out << "tick,time,pool,level,net_outflow\n";
  for (const PoolSeries& pool : pools) {
    for (std::size_t k = 0; k < pool.net_outflow.size(); ++k) {
      out << k << ',' << time_text(ast, k) << ',' << pool.pool_id << ','
          << (pool.abundant ? std::string("abundant") : pool.level[k].str()) << ','
          << pool.net_outflow[k].str() << '\n';
    }
  }
  return out.str();
}

std::string events_json(const std::vector<Event>& events) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Event& ev : events) arr.push_back(event_to_json(ev));
  return arr.dump(2) + "\n";
}

std::string policies_json(const std::vector<PolicyLogEntry>& log) {
  nlohmann::json arr = nlohmann::json::array();
  for (const PolicyLogEntry& entry : log) arr.push_back(policy_to_json(entry));
  return arr.dump(2) + "\n";
}

std::string run_json(const ScenarioAst& ast, const SimulationResult& result,
                     const std::vector<Event>& events) {
  nlohmann::json j;
  j["scenario"] = ast.name;
  j["dt"] = format_micro(ast.dt_micro);
  j["horizon"] = ast.horizon;
  j["seed"] = ast.seed;

  nlohmann::json cycles = nlohmann::json::object();
  for (const CycleSeries& c : result.cycles) {
    nlohmann::json cols;
    auto col = [](const std::vector<ValueAmount>& v) {
      nlohmann::json arr = nlohmann::json::array();
      for (ValueAmount a : v) arr.push_back(a.str());
      return arr;
    };
    cols["va"] = col(c.added);
    cols["ve"] = col(c.extracted);
    cols["vl"] = col(c.lost);
    cols["vg"] = col(c.gained);
    cycles[c.cycle_id] = cols;
  }
  j["cycles"] = cycles;

  nlohmann::json agents = nlohmann::json::object();
  for (const AgentSeries& a : result.agents) {
    nlohmann::json arr = nlohmann::json::array();
    for (ValueAmount s : a.stock) arr.push_back(s.str());
    agents[a.agent_id] = arr;
  }
  j["agents"] = agents;

  nlohmann::json pools = nlohmann::json::object();
  for (const PoolSeries& p : result.pools) {
    nlohmann::json pj;
    pj["abundant"] = p.abundant;
    nlohmann::json outflow = nlohmann::json::array();
    for (ValueAmount v : p.net_outflow) outflow.push_back(v.str());
    pj["net_outflow"] = outflow;
    if (!p.abundant) {
      nlohmann::json level = nlohmann::json::array();
      for (ValueAmount v : p.level) level.push_back(v.str());
      pj["level"] = level;
    }
    pools[p.pool_id] = pj;
  }
  j["pools"] = pools;

  nlohmann::json policy_arr = nlohmann::json::array();
  for (const PolicyLogEntry& entry : result.policy_log) {
    policy_arr.push_back(policy_to_json(entry));
  }
  j["policies"] = policy_arr;

  nlohmann::json event_arr = nlohmann::json::array();
  for (const Event& ev : events) event_arr.push_back(event_to_json(ev));
  j["events"] = event_arr;

  nlohmann::json notes = nlohmann::json::array();
  for (const Diagnostic& d : result.notes) notes.push_back(render_diagnostic(d));
  j["notes"] = notes;

  return j.dump(2) + "\n";
}

void write_run_outputs(const ScenarioAst& ast, const SimulationResult& result,
                       const std::vector<Event>& events,
                       const std::filesystem::path& dir, bool json_format) {
  std::filesystem::create_directories(dir);
  if (json_format) {
    write_file(dir / "run.json", run_json(ast, result, events));
    return;
  }
  for (const CycleSeries& c : result.cycles) {
    write_file(dir / ("cycle_" + c.cycle_id + ".csv"), cycle_csv(ast, c));
  }
  for (const AgentSeries& a : result.agents) {
    write_file(dir / ("agent_" + a.agent_id + ".csv"), agent_csv(ast, a));
  }
  write_file(dir / "pools.csv", pools_csv(ast, result.pools));
  write_file(dir / "policies.json", policies_json(result.policy_log));
  write_file(dir / "events.json", events_json(events));
}

CsvSeriesFile read_series_csv(std::istream& in) {
  CsvSeriesFile file;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) header.push_back(cell);
  if (header.size() < 3 || header[0] != "tick" || header[1] != "time") {
    throw std::runtime_error(
        "expected columns tick,time,... in the header, got '" + line + "'");
  }
  file.columns.assign(header.begin() + 2, header.end());

  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) {
      throw std::runtime_error("row " + std::to_string(row_no) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(header.size()));
    }
    try {
      file.times.push_back(std::stod(cells[1]));
    } catch (const std::exception&) {
      throw std::runtime_error("row " + std::to_string(row_no) +
                               " has a non-numeric time '" + cells[1] + "'");
    }
    file.cells.emplace_back(cells.begin() + 2, cells.end());
  }
  if (file.times.size() < 2) throw std::runtime_error("need at least two data rows");

  double dt = file.times[1] - file.times[0];
  for (std::size_t k = 1; k < file.times.size(); ++k) {
    double step = file.times[k] - file.times[k - 1];
    if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw std::runtime_error("time column is not uniformly spaced");
    }
  }
  return file;
}

Series column_series(const CsvSeriesFile& file, const std::string& name) {
  std::size_t col = file.columns.size();
  for (std::size_t i = 0; i < file.columns.size(); ++i) {
    if (file.columns[i] == name) {
      col = i;
      break;
    }
  }
  if (col == file.columns.size()) {
    std::string have;
    for (const std::string& c : file.columns) {
      if (!have.empty()) have += ",";
      have += c;
    }
    throw std::runtime_error("no column '" + name + "' (file has tick,time," + have + ")");
  }
  Series s;
  s.t0 = file.times.front();
  s.dt = file.times[1] - file.times[0];
  s.values.reserve(file.cells.size());
  for (std::size_t row = 0; row < file.cells.size(); ++row) {
    try {
      s.values.push_back(std::stod(file.cells[row][col]));
    } catch (const std::exception&) {
      throw std::runtime_error("row " + std::to_string(row + 2) + " column '" + name +
                               "' holds non-numeric '" + file.cells[row][col] + "'");
    }
  }
  return s;
}

}  // namespace vcsim
