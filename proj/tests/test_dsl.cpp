#include <doctest.h>

#include <algorithm>
#include <string>

#include "vcsim/check.hpp"
#include "vcsim/demos.hpp"
#include "vcsim/format.hpp"
#include "vcsim/parse.hpp"

using namespace vcsim;

namespace {

bool has_error_at(const ParseResult& r, int line, const std::string& needle) {
  return std::any_of(r.diagnostics.begin(), r.diagnostics.end(), [&](const Diagnostic& d) {
    return d.severity == Severity::error && d.line == line &&
           d.message.find(needle) != std::string::npos;
  });
}

int error_count(const ParseResult& r) {
  return static_cast<int>(std::count_if(
      r.diagnostics.begin(), r.diagnostics.end(),
      [](const Diagnostic& d) { return d.severity == Severity::error; }));
}

const char* kSmall = R"(
scenario "small" {
  dt = 0.5
  horizon = 4
  pool mine { initial = 100 }
  agent digger { initial = 10 role = producer }
  cycle dig {
    actor = digger
    va = 1.5
    ve = prop(mine, 0.25) from mine
    vl = 0.125 to sink
  }
}
)";

}  // namespace

TEST_CASE("a small scenario parses into the expected shape") {
  const ParseResult r = parse_scenario(kSmall);
  REQUIRE(r.ok());
  const ScenarioAst& ast = *r.ast;
  CHECK(ast.name == "small");
  CHECK(ast.dt_micro == 500'000);
  CHECK(ast.horizon == 4);
  CHECK(ast.seed == 0);  // default
  REQUIRE(ast.pools.size() == 1);
  CHECK(!ast.pools[0].abundant);
  CHECK(ast.pools[0].initial.micro() == 100'000'000);
  REQUIRE(ast.agents.size() == 1);
  CHECK(ast.agents[0].role == AgentRole::producer);
  REQUIRE(ast.cycles.size() == 1);
  const CycleDecl& c = ast.cycles[0];
  CHECK(c.added.kind == RateExpr::Kind::constant);
  CHECK(c.added.const_micro == 1'500'000);
  CHECK(c.extracted.kind == RateExpr::Kind::proportional);
  CHECK(c.extracted.ref == "mine");
  CHECK(c.extracted_source == "mine");
  CHECK(!c.lost_target.has_value());  // "to sink" normalizes to no target
  CHECK(!c.gained_target.has_value());
}

TEST_CASE("comments run to end of line") {
  const ParseResult r = parse_scenario(
      "-- header\n"
      "scenario \"c\" { -- trailing\n"
      "  horizon = 2 -- another\n"
      "}\n");
  REQUIRE(r.ok());
  CHECK(r.ast->horizon == 2);
}

TEST_CASE("syntax errors carry the offending position") {
  // line 4: '=' missing after va
  const ParseResult r = parse_scenario(
      "scenario \"bad\" {\n"
      "  agent a { initial = 1 }\n"
      "  cycle c {\n"
      "    actor = a\n"
      "    va 1\n"
      "    ve = 0 from a\n"
      "    vl = 0\n"
      "  }\n"
      "}\n");
  CHECK(!r.ok());
  CHECK(has_error_at(r, 5, "'='"));
}

TEST_CASE("recovery reports several independent errors in one pass") {
  const ParseResult r = parse_scenario(
      "scenario \"multi\" {\n"
      "  dt = -1\n"
      "  pool p { initial = -5 }\n"
      "  bogus = 3\n"
      "}\n");
  CHECK(!r.ok());
  CHECK(has_error_at(r, 2, "dt must be positive"));
  CHECK(has_error_at(r, 3, "must not be negative"));
  CHECK(has_error_at(r, 4, "expected a declaration"));
  CHECK(error_count(r) >= 3);
}

TEST_CASE("duplicate settings are rejected") {
  const ParseResult r = parse_scenario(
      "scenario \"dups\" {\n"
      "  horizon = 5\n"
      "  horizon = 6\n"
      "}\n");
  CHECK(!r.ok());
  CHECK(has_error_at(r, 3, "duplicate 'horizon' setting"));
  CHECK(error_count(r) == 1);  // the value is consumed, no follow-on noise
}

TEST_CASE("pools and agents share one name space") {
  const ParseResult r = parse_scenario(
      "scenario \"dups\" {\n"
      "  pool x { initial = 1 }\n"
      "  agent x { initial = 1 }\n"
      "}\n");
  CHECK(!r.ok());
  CHECK(has_error_at(r, 3, "duplicate name 'x'"));
}

TEST_CASE("resolution rejects broken references") {
  const ParseResult r = parse_scenario(
      "scenario \"refs\" {\n"
      "  horizon = 3\n"
      "  pool deep { initial = abundant }\n"
      "  agent a { initial = 0 }\n"
      "  cycle c {\n"
      "    actor = ghost\n"
      "    va = prop(deep, 0.5)\n"
      "    ve = 1 from nowhere\n"
      "    vl = 0\n"
      "  }\n"
      "  at 9 jolt c va 1 from deep\n"
      "  detect subsidy_cross(c)\n"
      "}\n");
  CHECK(!r.ok());
  CHECK(has_error_at(r, 5, "'ghost' is not a declared agent"));
  CHECK(has_error_at(r, 7, "prop cannot reference the abundant pool"));
  CHECK(has_error_at(r, 5, "unknown extraction source 'nowhere'"));
  CHECK(has_error_at(r, 11, "beyond the horizon"));
  CHECK(has_error_at(r, 12, "expects 2 cycle arguments"));
}

TEST_CASE("set policies only adjust constant and prop rates") {
  const ParseResult r = parse_scenario(
      "scenario \"setramp\" {\n"
      "  horizon = 10\n"
      "  agent a { initial = 0 }\n"
      "  cycle c {\n"
      "    actor = a\n"
      "    va = ramp(1, 0.5)\n"
      "    ve = 0 from a\n"
      "    vl = 0\n"
      "  }\n"
      "  at 2 set c.va = 3\n"
      "}\n");
  CHECK(!r.ok());
  CHECK(has_error_at(r, 10, "cannot set a ramp rate"));
}

TEST_CASE("number literals allow at most six fraction digits") {
  const ParseResult r = parse_scenario(
      "scenario \"digits\" {\n"
      "  agent a { initial = 0.1234567 }\n"
      "}\n");
  CHECK(!r.ok());
  CHECK(has_error_at(r, 2, "six fraction digits"));
}

TEST_CASE("canonical formatting is stable and complete") {
  const char* source =
      "-- comment lines vanish in canonical form\n"
      "scenario \"fixture\" {\n"
      "  horizon = 12\n"
      "  dt = 0.5\n"
      "  pool mine { initial = 250.125 }\n"
      "  pool air { initial = abundant }\n"
      "  agent digger { initial = 10 role = producer }\n"
      "  cycle dig tag = n {\n"
      "    actor = digger\n"
      "    va = 1.5\n"
      "    ve = prop(mine, 0.25) from mine\n"
      "    vl = ramp(0.1, 0.02) to sink\n"
      "  }\n"
      "  at 3 jolt dig ve 5 from mine\n"
      "  at 6 set dig.va = 2\n"
      "  detect max_vg(dig)\n"
      "}\n";
  const char* canonical =
      "scenario \"fixture\" {\n"
      "  dt = 0.500000\n"
      "  horizon = 12\n"
      "  seed = 0\n"
      "  pool mine { initial = 250.125000 }\n"
      "  pool air { initial = abundant }\n"
      "  agent digger { initial = 10.000000 role = producer }\n"
      "  cycle dig tag = n {\n"
      "    actor = digger\n"
      "    va = 1.500000\n"
      "    ve = prop(mine, 0.250000) from mine\n"
      "    vl = ramp(0.100000, 0.020000)\n"
      "  }\n"
      "  at 3 jolt dig ve 5.000000 from mine\n"
      "  at 6 set dig.va = 2.000000\n"
      "  detect max_vg(dig)\n"
      "}\n";
  const ParseResult r = parse_scenario(source);
  REQUIRE(r.ok());
  CHECK(format_scenario(*r.ast) == canonical);
}

TEST_CASE("formatting round-trips every built-in scenario") {
  for (const std::string& name : demo_names()) {
    CAPTURE(name);
    const ParseResult first = parse_scenario(demo_scenario_text(name));
    REQUIRE(first.ok());
    const std::string once = format_scenario(*first.ast);
    const ParseResult second = parse_scenario(once);
    REQUIRE(second.ok());
    CHECK(*second.ast == *first.ast);            // formatting loses nothing
    CHECK(format_scenario(*second.ast) == once); // and is idempotent
  }
}

TEST_CASE("static checks flag depletion, sink losses and draining stocks") {
  const ParseResult r = parse_scenario(
      "scenario \"warned\" {\n"
      "  horizon = 20\n"
      "  pool mine { initial = 50 }\n"
      "  agent digger { initial = 30 }\n"
      "  cycle dig {\n"
      "    actor = digger\n"
      "    va = 2\n"
      "    ve = 10 from mine\n"
      "    vl = 7 to sink\n"
      "  }\n"
      "}\n");
  REQUIRE(r.ok());
  const auto diags = check_scenario(*r.ast);
  auto contains = [&](Severity sev, const std::string& needle) {
    return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) {
      return d.severity == sev && d.message.find(needle) != std::string::npos;
    });
  };
  // 50 units at 10 per tick: the draw during tick 5 cannot be met in full
  CHECK(contains(Severity::warning, "finite pool 'mine' may deplete at tick 5"));
  CHECK(contains(Severity::warning, "loses value out of circulation"));
  // net flow of digger: +2 +10 -7 = +5 per tick, stock never drains
  CHECK(!contains(Severity::warning, "may go negative"));
}

TEST_CASE("a closed self-contained scenario checks clean") {
  const ParseResult r = parse_scenario(
      "scenario \"clean\" {\n"
      "  horizon = 10\n"
      "  agent maker { initial = 100 }\n"
      "  agent taker { initial = 100 }\n"
      "  cycle trade {\n"
      "    actor = maker\n"
      "    va = 1\n"
      "    ve = 1 from taker\n"
      "    vl = 1 to taker\n"
      "  }\n"
      "}\n");
  REQUIRE(r.ok());
  const auto diags = check_scenario(*r.ast);
  CHECK(std::none_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
    return d.severity != Severity::info;
  }));
}

TEST_CASE("open system and shared pool produce info notes") {
  const ParseResult r = parse_scenario(
      "scenario \"notes\" {\n"
      "  horizon = 2\n"
      "  pool air { initial = abundant }\n"
      "  pool mine { initial = 1000 }\n"
      "  agent a { initial = 0 }\n"
      "  agent b { initial = 0 }\n"
      "  cycle one { actor = a va = 0 ve = 1 from mine vl = 0 }\n"
      "  cycle two { actor = b va = 0 ve = 1 from mine vl = 0 }\n"
      "}\n");
  REQUIRE(r.ok());
  const auto diags = check_scenario(*r.ast);
  auto info = [&](const std::string& needle) {
    return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) {
      return d.severity == Severity::info && d.message.find(needle) != std::string::npos;
    });
  };
  CHECK(info("system open via pool 'air'"));
  CHECK(info("finite pool 'mine' is shared by 2 cycles"));
}
