#include "vcsim/demos.hpp"

#include <cmath>
#include <sstream>

#include "vcsim/market.hpp"
#include "vcsim/output.hpp"
#include "vcsim/parse.hpp"

namespace vcsim {

namespace {

constexpr const char* kSavings = R"(-- A savings account: 5% annual interest on the year-start balance and a
-- 5.00 monthly account fee that leaves circulation. One tick is one month.
scenario "savings" {
  dt = 1
  horizon = 25
  seed = 1
  pool bank { initial = abundant }
  agent saver { initial = 1000 role = consumer }
  cycle acct {
    actor = saver
    va = 0
    ve = 0 from bank
    vl = 5
  }
  -- interest lands with the final month of each year
  at 11 jolt acct ve 50 from bank
  at 23 jolt acct ve 49.5 from bank
}
)";

constexpr const char* kBankchain = R"(-- A chain of money creation: the central bank converts future value into
-- currency, a commercial bank borrows it onward, and an organization
-- borrows from the bank while running a production cycle against nature.
scenario "bankchain" {
  dt = 1
  horizon = 60
  seed = 7
  pool future { initial = abundant }
  pool nature { initial = 50000 }
  agent central_bank { initial = 1000 role = central_bank }
  agent bank { initial = 500 role = bank }
  agent org { initial = 200 role = producer }
  cycle mint {
    actor = central_bank
    va = 2
    ve = 40 from future
    vl = 1
  }
  cycle lend {
    actor = bank
    va = 1
    ve = 30 from central_bank
    vl = 6 to central_bank
  }
  cycle borrow {
    actor = org
    va = 2
    ve = 20 from bank
    vl = 8 to bank
  }
  cycle produce tag = n {
    actor = org
    va = 10
    ve = 15 from nature
    vl = 5
  }
  -- mid-run productivity push
  at 30 set produce.va = 12
}
)";

constexpr const char* kShale = R"(-- Subsidized extraction: government-backed credit fades while the natural
-- cycle of the business grows. The detector finds the moment natural gains
-- overtake the subsidy.
scenario "shale" {
  dt = 0.01
  horizon = 600
  seed = 11
  pool future { initial = abundant }
  agent org { initial = 100 role = producer }
  cycle credit tag = g {
    actor = org
    va = 0
    ve = ramp(10, -1) from future
    vl = 0
  }
  cycle natural tag = n {
    actor = org
    va = ramp(0, 2)
    ve = 0 from future
    vl = 0
  }
  detect subsidy_cross(credit, natural)
}
)";

constexpr const char* kGovernment = R"(-- Government takings versus citizen confidence: both gain flows fade as
-- taxation rises. The detector finds the point where the combined gain
-- stops improving.
scenario "government" {
  dt = 0.01
  horizon = 450
  seed = 13
  pool economy { initial = abundant }
  agent gov { initial = 50 role = government }
  agent citizens { initial = 50 role = citizens }
  cycle taxes tag = g {
    actor = gov
    va = ramp(10, -2)
    ve = 0 from economy
    vl = 0
  }
  cycle confidence tag = c {
    actor = citizens
    va = ramp(4, -2)
    ve = 0 from economy
    vl = 0
  }
  detect gov_optimum(taxes, confidence)
}
)";

constexpr const char* kSupplyDemand = R"(-- A market trading at its clearing price: each tick one unit of the good
-- moves against payment at the equilibrium price of the worked price lines
-- p = -2q + 100 (demand) and p = 3q + 25 (supply).
scenario "supply_demand" {
  dt = 1
  horizon = 40
  seed = 5
  agent producer { initial = 500 role = producer }
  agent consumer { initial = 1500 role = consumer }
  cycle buy {
    actor = consumer
    va = 70
    ve = 70 from producer
    vl = 70 to producer
  }
  detect stable_market(buy)
}
)";

constexpr const char* kLln = R"(-- Two traders booking against a commons. Their books balance exactly;
-- a residual only appears once reports are perturbed, and it shrinks as
-- 1/sqrt(n) when many noisy reports are averaged.
scenario "lln" {
  dt = 1
  horizon = 10
  seed = 42
  pool commons { initial = 100000 }
  agent trader_a { initial = 100 }
  agent trader_b { initial = 100 }
  cycle flow_a {
    actor = trader_a
    va = 10
    ve = 5 from commons
    vl = 3 to trader_b
  }
  cycle flow_b {
    actor = trader_b
    va = 8
    ve = 4 from commons
    vl = 2 to trader_a
  }
}
)";

struct DemoEntry {
  const char* name;
  const char* text;
};

constexpr DemoEntry kDemos[] = {
    {"savings", kSavings},       {"bankchain", kBankchain},
    {"shale", kShale},           {"government", kGovernment},
    {"supply_demand", kSupplyDemand}, {"lln", kLln},
};

void add_check(DemoReport& report, std::string name, bool pass, std::string detail) {
  report.checks.push_back({std::move(name), std::move(detail), pass});
}

void check_amount(DemoReport& report, std::string name, ValueAmount actual,
                  ValueAmount expected) {
  bool pass = actual == expected;
  add_check(report, std::move(name), pass,
            "expected " + expected.str() + " exactly, got " + actual.str());
}

void check_close(DemoReport& report, std::string name, double actual, double expected,
                 double tol) {
  bool pass = std::abs(actual - expected) <= tol;
  std::ostringstream detail;
  detail << "expected " << expected << " within " << tol << ", got " << actual;
  add_check(report, std::move(name), pass, detail.str());
}

// Re-simulates step by step, verifying the balance identity of every booked
// row and that the closed-system total never moves.
void check_conservation(DemoReport& report, const ScenarioAst& ast) {
  Simulation sim(ast);
  WorldState state = sim.initial_state();
  ValueAmount baseline = sim.total_system_value(state);
  bool rows_balanced = true;
  bool closed = true;
  for (std::int64_t k = 0; k < ast.horizon; ++k) {
    for (const TickFlows& row : sim.step(state)) {
      if (conservation_residual(row) != ValueAmount{}) rows_balanced = false;
    }
    if (sim.total_system_value(state) != baseline) closed = false;
  }
  for (const CycleLedger& ledger : state.ledgers) {
    if (conservation_residual(ledger.totals()) != ValueAmount{}) rows_balanced = false;
  }
  add_check(report, "per-tick balance identity", rows_balanced,
            "va + ve == vl + vg exactly on every booked row");
  add_check(report, "closed-system total", closed,
            "stocks + pools + sink - injections == " + baseline.str() + " at every tick");
}

ValueAmount agent_stock_at(const SimulationResult& result, const std::string& agent,
                           std::size_t tick) {
  for (const AgentSeries& s : result.agents) {
    if (s.agent_id == agent) return s.stock.at(tick);
  }
  throw std::invalid_argument("no agent '" + agent + "' in the run");
}

const Event* find_event(const std::vector<Event>& events, DetectorKind kind) {
  for (const Event& ev : events) {
    if (ev.kind == kind) return &ev;
  }
  return nullptr;
}

void savings_checks(DemoReport& report, const SimulationResult& result) {
  check_amount(report, "stock at tick 12", agent_stock_at(result, "saver", 12),
               ValueAmount::parse("990").value());
  check_amount(report, "stock at tick 24", agent_stock_at(result, "saver", 24),
               ValueAmount::parse("979.5").value());

  SavingsPlan plan;
  plan.principal = ValueAmount::from_units(1000);
  plan.annual_rate = 0.05;
  plan.monthly_fee = ValueAmount::from_units(5);
  plan.years = 1;
  SavingsResult year1 = savings_balance(plan, Compounding::annual);
  check_amount(report, "year-one closed form", year1.closed_form_exact,
               ValueAmount::parse("990").value());
  check_amount(report, "year-one recurrence", year1.oracle_rounded,
               year1.closed_form_exact);
  plan.years = 2;
  SavingsResult year2 = savings_balance(plan, Compounding::annual);
  check_amount(report, "year-two closed form", year2.closed_form_exact,
               ValueAmount::parse("979.5").value());
  check_amount(report, "year-two recurrence", year2.oracle_rounded,
               year2.closed_form_exact);

  // Monthly compounding at 12%: the closed form follows the principal; the
  // month loop also books the fee value, and the two differ by exactly that.
  SavingsPlan monthly;
  monthly.principal = ValueAmount::from_units(1200);
  monthly.annual_rate = 0.12;
  monthly.monthly_fee = ValueAmount::from_units(1);
  monthly.years = 1;
  SavingsResult m = savings_balance(monthly, Compounding::monthly);
  check_close(report, "monthly closed form vs loop", m.abs_diff, m.losses_term, 1e-9);
  monthly.monthly_fee = ValueAmount{};
  SavingsResult free = savings_balance(monthly, Compounding::monthly);
  check_close(report, "fee-free monthly agreement", free.abs_diff, 0.0, 1e-6);
}

void bankchain_checks(DemoReport& report, const SimulationResult& result) {
  check_amount(report, "final organization stock",
               result.final_state.stocks.at(2), ValueAmount::from_units(1520));
  check_amount(report, "final sink value", result.final_state.sink,
               ValueAmount::from_units(360));
  bool policy_ok = result.policy_log.size() == 1 && result.policy_log[0].tick == 30 &&
                   !result.policy_log[0].is_jolt;
  add_check(report, "productivity push applied", policy_ok,
            "one set policy in the log at tick 30");
}

void shale_checks(DemoReport& report, const SimulationResult& result,
                  const std::vector<Event>& events) {
  check_amount(report, "final organization stock",
               result.final_state.stocks.at(0), ValueAmount::parse("142.03").value());
  const Event* ev = find_event(events, DetectorKind::subsidy_cross);
  add_check(report, "crossing detected", ev != nullptr,
            "subsidy_cross reports one event");
  if (!ev) return;
  add_check(report, "crossing tick", ev->tick == 334,
            "expected tick 334, got " + std::to_string(ev->tick));
  check_close(report, "crossing time", ev->time, 3.3383333333333334, 1e-9);
  check_close(report, "time vs continuous crossing", ev->time, 10.0 / 3.0, 0.01);
  check_close(report, "rate gap at crossing", ev->witness.at("gap"), 0.0, 1e-9);
}

void government_checks(DemoReport& report, const std::vector<Event>& events) {
  const Event* ev = find_event(events, DetectorKind::gov_optimum);
  add_check(report, "optimum detected", ev != nullptr,
            "gov_optimum reports one event");
  if (!ev) return;
  add_check(report, "optimum tick", ev->tick == 351,
            "expected tick 351, got " + std::to_string(ev->tick));
  check_close(report, "optimum time", ev->time, 3.505, 1e-9);
  check_close(report, "time vs continuous optimum", ev->time, 3.5, 0.01);
  check_close(report, "government gain rate", ev->witness.at("gov_rate"), 3.0, 1e-6);
  check_close(report, "citizen gain rate", ev->witness.at("citizen_rate"), -3.0, 1e-6);
  check_close(report, "combined rate at optimum", ev->witness.at("sum"), 0.0,
              10.0 * 0.01 * 0.01);
}

void supply_demand_checks(DemoReport& report, const SimulationResult& result,
                          const std::vector<Event>& events) {
  check_amount(report, "consumer stock unchanged",
               agent_stock_at(result, "consumer", 39), ValueAmount::from_units(1500));

  MarketLines lines{-2.0, 100.0, 3.0, 25.0};
  Equilibrium eq = solve_equilibrium(lines);
  check_close(report, "clearing quantity", eq.quantity, 15.0, 1e-9);
  check_close(report, "clearing price", eq.price, 70.0, 1e-9);
  check_close(report, "added-minus-lost at equilibrium", equilibrium_residual(lines),
              75.0, 1e-9);

  const Event* ev = find_event(events, DetectorKind::stable_market);
  add_check(report, "stable span detected", ev != nullptr,
            "stable_market reports one span");
  if (!ev) return;
  add_check(report, "stable span bounds",
            ev->tick == 1 && ev->witness.at("run_end") == 38.0,
            "span covers every interior tick (1..38)");
}

void lln_checks(DemoReport& report, const ScenarioAst& ast,
                const SimulationResult& result) {
  AggregateTotals agg = merge_ledgers(result.final_state.ledgers);
  bool balanced = agg.members == 2 &&
                  conservation_residual(agg.totals) == ValueAmount{};
  add_check(report, "merged books balance", balanced,
            "economy-level totals satisfy va + ve == vl + vg exactly");

  ErrorModel model;
  model.family = ErrorModel::Family::uniform;
  model.scale = 1.0;
  model.seed = static_cast<std::uint64_t>(ast.seed);  // the scenario's seed setting
  LlnResult lln = lln_experiment(10000, 1, model);
  check_close(report, "noise sigma formula", lln.expected_sigma,
              2.0 / (std::sqrt(3.0) * 100.0), 1e-12);
  add_check(report, "mean residual inside 3 sigma",
            std::abs(lln.mean_residual) < 3.0 * lln.expected_sigma,
            "|" + std::to_string(lln.mean_residual) + "| < " +
                std::to_string(3.0 * lln.expected_sigma));
}

}  // namespace

bool DemoReport::all_pass() const {
  for (const DemoCheck& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const DemoEntry& d : kDemos) out.emplace_back(d.name);
    return out;
  }();
  return names;
}

std::string_view demo_scenario_text(std::string_view name) {
  for (const DemoEntry& d : kDemos) {
    if (name == d.name) return d.text;
  }
  throw std::invalid_argument("unknown demo '" + std::string(name) + "'");
}

DemoReport run_demo(std::string_view name,
                    const std::optional<std::filesystem::path>& out_dir) {
  DemoReport report;
  report.demo = std::string(name);

  ParseResult parsed = parse_scenario(demo_scenario_text(name));
  add_check(report, "scenario parses", parsed.ok(), "built-in scenario is well-formed");
  if (!parsed.ok()) return report;
  const ScenarioAst& ast = *parsed.ast;

  Simulation sim(ast);
  SimulationResult result = sim.run();
  report.events = run_scenario_detectors(ast, result);
  report.notes = result.notes;

  check_conservation(report, ast);

  if (name == "savings") {
    savings_checks(report, result);
  } else if (name == "bankchain") {
    bankchain_checks(report, result);
  } else if (name == "shale") {
    shale_checks(report, result, report.events);
  } else if (name == "government") {
    government_checks(report, report.events);
  } else if (name == "supply_demand") {
    supply_demand_checks(report, result, report.events);
  } else if (name == "lln") {
    lln_checks(report, ast, result);
  }

  if (out_dir) {
    write_run_outputs(ast, result, report.events, *out_dir, /*json_format=*/false);
  }
  return report;
}

}  // namespace vcsim
