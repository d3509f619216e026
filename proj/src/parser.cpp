#include "vcsim/parse.hpp"

#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "lexer.hpp"

namespace vcsim {

namespace {

using lex::TokKind;
using lex::Token;

class Parser {
 public:
  Parser(const std::vector<Token>& toks, std::vector<Diagnostic>& diags)
      : toks_(toks), diags_(diags) {}

  std::optional<ScenarioAst> parse() {
    parse_scenario_block();
    if (has_errors(diags_)) return std::nullopt;
    resolve();
    if (has_errors(diags_)) return std::nullopt;
    return std::move(ast_);
  }

 private:
  // ---- token plumbing -----------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& advance() {
    const Token& t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at(TokKind k) const { return peek().kind == k; }
  bool at_kw(std::string_view kw) const {
    return peek().kind == TokKind::ident && peek().text == kw;
  }
  bool eat_kw(std::string_view kw) {
    if (!at_kw(kw)) return false;
    advance();
    return true;
  }

  void error_at(const Token& t, std::string msg) {
    diags_.push_back({Severity::error, t.line, t.column, std::move(msg)});
  }

  bool expect(TokKind k, const char* what) {
    if (at(k)) {
      advance();
      return true;
    }
    error_at(peek(), std::string("expected ") + what);
    return false;
  }

  bool expect_kw(std::string_view kw) {
    if (eat_kw(kw)) return true;
    error_at(peek(), "expected '" + std::string(kw) + "'");
    return false;
  }

  std::optional<std::string> expect_ident(const char* what) {
    if (at(TokKind::ident)) return advance().text;
    error_at(peek(), std::string("expected ") + what);
    return std::nullopt;
  }

  std::optional<Token> expect_number(const char* what) {
    if (at(TokKind::number)) return advance();
    error_at(peek(), std::string("expected ") + what);
    return std::nullopt;
  }

  // A number that must be a whole, non-negative integer (tick counts, seeds).
  std::optional<std::int64_t> expect_whole(const char* what) {
    auto tok = expect_number(what);
    if (!tok) return std::nullopt;
    if (!tok->integral || tok->micro % ValueAmount::kScale != 0 || tok->micro < 0) {
      error_at(*tok, std::string(what) + " must be a whole non-negative number");
      return std::nullopt;
    }
    return tok->micro / ValueAmount::kScale;
  }

  // Skips to the next plausible top-level declaration.
  void sync_top() {
    static const std::set<std::string, std::less<>> starters = {
        "dt", "horizon", "seed", "pool", "agent", "cycle", "at", "detect"};
    while (!at(TokKind::end)) {
      if (at(TokKind::rbrace)) return;
      if (peek().kind == TokKind::ident && starters.count(peek().text)) return;
      advance();
    }
  }

  // Recovery for errors inside a declaration body: skip to and consume the
  // '}' closing it, so the scenario's own brace stays untouched.
  void sync_block() {
    int depth = 1;
    while (!at(TokKind::end)) {
      if (at(TokKind::lbrace)) {
        ++depth;
      } else if (at(TokKind::rbrace) && --depth == 0) {
        advance();
        return;
      }
      advance();
    }
  }

  // ---- grammar ------------------------------------------------------------

  void parse_scenario_block() {
    if (!expect_kw("scenario")) return;
    if (at(TokKind::string)) {
      ast_.name = advance().text;
    } else {
      error_at(peek(), "expected quoted scenario name");
      return;
    }
    if (!expect(TokKind::lbrace, "'{' after scenario name")) return;

    while (!at(TokKind::rbrace) && !at(TokKind::end)) {
      std::size_t before = pos_;
      parse_item();
      if (pos_ == before) advance();  // ensure progress on stuck input
    }
    if (!expect(TokKind::rbrace, "'}' closing the scenario")) return;
    if (!at(TokKind::end)) error_at(peek(), "trailing input after scenario block");
  }

  void parse_item() {
    if (at_kw("dt") || at_kw("horizon") || at_kw("seed")) {
      parse_setting();
    } else if (at_kw("pool")) {
      parse_pool();
    } else if (at_kw("agent")) {
      parse_agent();
    } else if (at_kw("cycle")) {
      parse_cycle();
    } else if (at_kw("at")) {
      parse_policy();
    } else if (at_kw("detect")) {
      parse_detect();
    } else {
      error_at(peek(), "expected a declaration (pool, agent, cycle, at, detect) "
                       "or a setting (dt, horizon, seed)");
      sync_top();
    }
  }

  void parse_setting() {
    Token name = advance();
    if (!expect(TokKind::equals, "'=' after setting name")) {
      sync_top();
      return;
    }
    // always consume the value, so a duplicate does not derail recovery
    if (name.text == "dt") {
      auto tok = expect_number("a number for 'dt'");
      if (!tok) {
        sync_top();
        return;
      }
      if (tok->micro <= 0) {
        error_at(*tok, "dt must be positive");
        return;
      }
      if (take_once(saw_dt_, name)) ast_.dt_micro = tok->micro;
    } else if (name.text == "horizon") {
      auto v = expect_whole("a tick count for 'horizon'");
      if (!v) {
        sync_top();
        return;
      }
      if (*v < 1) {
        error_at(name, "horizon must be at least 1");
        return;
      }
      if (take_once(saw_horizon_, name)) ast_.horizon = *v;
    } else {
      auto v = expect_whole("a seed value");
      if (!v) {
        sync_top();
        return;
      }
      if (take_once(saw_seed_, name)) ast_.seed = *v;
    }
  }

  bool take_once(bool& flag, const Token& name) {
    if (flag) {
      error_at(name, "duplicate '" + name.text + "' setting");
      return false;
    }
    flag = true;
    return true;
  }

  void parse_pool() {
    Token kw = advance();
    PoolDecl pool;
    pool.pos = {kw.line, kw.column};
    auto id = expect_ident("pool name");
    if (!id) {
      sync_top();
      return;
    }
    pool.id = *id;
    if (!expect(TokKind::lbrace, "'{' after pool name")) {
      sync_top();
      return;
    }
    if (!expect_kw("initial") || !expect(TokKind::equals, "'=' after 'initial'")) {
      sync_block();
      return;
    }
    if (eat_kw("abundant")) {
      pool.abundant = true;
    } else {
      auto tok = expect_number("an initial level or 'abundant'");
      if (!tok) {
        sync_block();
        return;
      }
      if (tok->micro < 0) {
        error_at(*tok, "finite pool level must not be negative");
      } else {
        pool.initial = ValueAmount::from_micro(tok->micro);
      }
    }
    if (!expect(TokKind::rbrace, "'}' closing the pool")) {
      sync_block();
      return;
    }
    ast_.pools.push_back(std::move(pool));
  }

  void parse_agent() {
    Token kw = advance();
    AgentDecl agent;
    agent.pos = {kw.line, kw.column};
    auto id = expect_ident("agent name");
    if (!id) {
      sync_top();
      return;
    }
    agent.id = *id;
    if (!expect(TokKind::lbrace, "'{' after agent name")) {
      sync_top();
      return;
    }
    if (!expect_kw("initial") || !expect(TokKind::equals, "'=' after 'initial'")) {
      sync_block();
      return;
    }
    auto tok = expect_number("an initial stock");
    if (!tok) {
      sync_block();
      return;
    }
    agent.initial = ValueAmount::from_micro(tok->micro);
    if (at_kw("role")) {
      advance();
      if (!expect(TokKind::equals, "'=' after 'role'")) {
        sync_block();
        return;
      }
      auto role_tok = peek();
      auto role = expect_ident("a role name");
      if (!role) {
        sync_block();
        return;
      }
      auto parsed = agent_role_from_name(*role);
      if (!parsed) {
        error_at(role_tok, "unknown role '" + *role + "'");
        sync_block();
        return;
      }
      agent.role = *parsed;
    }
    if (!expect(TokKind::rbrace, "'}' closing the agent")) {
      sync_block();
      return;
    }
    ast_.agents.push_back(std::move(agent));
  }

  std::optional<RateExpr> parse_rate(const char* what) {
    SourcePos pos{peek().line, peek().column};
    if (at(TokKind::number)) {
      RateExpr e = RateExpr::constant(advance().micro);
      e.pos = pos;
      return e;
    }
    if (eat_kw("prop")) {
      if (!expect(TokKind::lparen, "'(' after 'prop'")) return std::nullopt;
      auto ref = expect_ident("an agent or pool reference");
      if (!ref) return std::nullopt;
      if (!expect(TokKind::comma, "',' between reference and factor")) return std::nullopt;
      auto factor = expect_number("a proportional factor");
      if (!factor) return std::nullopt;
      if (!expect(TokKind::rparen, "')' closing 'prop'")) return std::nullopt;
      RateExpr e = RateExpr::proportional(*ref, factor->micro);
      e.pos = pos;
      return e;
    }
    if (eat_kw("ramp")) {
      if (!expect(TokKind::lparen, "'(' after 'ramp'")) return std::nullopt;
      auto base = expect_number("a base rate");
      if (!base) return std::nullopt;
      if (!expect(TokKind::comma, "',' between base and slope")) return std::nullopt;
      auto slope = expect_number("a slope");
      if (!slope) return std::nullopt;
      if (!expect(TokKind::rparen, "')' closing 'ramp'")) return std::nullopt;
      RateExpr e = RateExpr::ramp(base->micro, slope->micro);
      e.pos = pos;
      return e;
    }
    error_at(peek(), std::string("expected ") + what +
                         " (a number, prop(ref, k) or ramp(a, b))");
    return std::nullopt;
  }

  void parse_cycle() {
    Token kw = advance();
    CycleDecl cyc;
    cyc.pos = {kw.line, kw.column};
    auto id = expect_ident("cycle name");
    if (!id) {
      sync_top();
      return;
    }
    cyc.id = *id;
    if (at_kw("tag")) {
      advance();
      if (!expect(TokKind::equals, "'=' after 'tag'")) {
        sync_top();
        return;
      }
      Token tag_tok = peek();
      auto tag = expect_ident("a tag (n, g or c)");
      if (!tag) {
        sync_top();
        return;
      }
      if (*tag == "n") {
        cyc.tag = CycleTag::natural;
      } else if (*tag == "g") {
        cyc.tag = CycleTag::government;
      } else if (*tag == "c") {
        cyc.tag = CycleTag::citizens;
      } else {
        error_at(tag_tok, "unknown tag '" + *tag + "' (expected n, g or c)");
        sync_top();
        return;
      }
    }
    if (!expect(TokKind::lbrace, "'{' after cycle name")) {
      sync_top();
      return;
    }

    bool ok = expect_kw("actor") && expect(TokKind::equals, "'=' after 'actor'");
    if (ok) {
      auto actor = expect_ident("an agent reference");
      ok = actor.has_value();
      if (ok) cyc.actor = *actor;
    }
    if (ok) ok = expect_kw("va") && expect(TokKind::equals, "'=' after 'va'");
    if (ok) {
      auto rate = parse_rate("a va rate");
      ok = rate.has_value();
      if (ok) cyc.added = *rate;
    }
    if (ok) ok = expect_kw("ve") && expect(TokKind::equals, "'=' after 've'");
    if (ok) {
      auto rate = parse_rate("a ve rate");
      ok = rate.has_value();
      if (ok) cyc.extracted = *rate;
    }
    if (ok) ok = expect_kw("from");
    if (ok) {
      auto src = expect_ident("a source (pool or agent)");
      ok = src.has_value();
      if (ok) cyc.extracted_source = *src;
    }
    if (ok) ok = expect_kw("vl") && expect(TokKind::equals, "'=' after 'vl'");
    if (ok) {
      auto rate = parse_rate("a vl rate");
      ok = rate.has_value();
      if (ok) cyc.lost = *rate;
    }
    if (ok && at_kw("to")) {
      advance();
      auto target = expect_ident("a loss target (pool, agent or sink)");
      ok = target.has_value();
      if (ok && *target != "sink") cyc.lost_target = *target;
    }
    if (ok && at_kw("vg")) {
      advance();
      ok = expect_kw("to");
      if (ok) {
        auto target = expect_ident("a gain target (pool or agent)");
        ok = target.has_value();
        if (ok) cyc.gained_target = *target;
      }
    }
    if (!ok || !expect(TokKind::rbrace, "'}' closing the cycle")) {
      sync_block();
      return;
    }
    ast_.cycles.push_back(std::move(cyc));
  }

  void parse_policy() {
    Token kw = advance();
    PolicyDecl pol;
    pol.pos = {kw.line, kw.column};
    auto tick = expect_whole("a trigger tick");
    if (!tick) {
      sync_top();
      return;
    }
    pol.trigger_tick = *tick;

    if (eat_kw("jolt")) {
      JoltAction jolt;
      auto cyc = expect_ident("a cycle reference");
      if (!cyc) {
        sync_top();
        return;
      }
      jolt.cycle = *cyc;
      auto flow = parse_flow_kind();
      if (!flow) {
        sync_top();
        return;
      }
      jolt.flow = *flow;
      auto amount = expect_number("a jolt amount");
      if (!amount) {
        sync_top();
        return;
      }
      jolt.amount = ValueAmount::from_micro(amount->micro);
      if (!expect_kw("from")) {
        sync_top();
        return;
      }
      auto pool = expect_ident("a pool reference");
      if (!pool) {
        sync_top();
        return;
      }
      jolt.source_pool = *pool;
      pol.action = std::move(jolt);
    } else if (eat_kw("set")) {
      SetParamAction set;
      auto cyc = expect_ident("a cycle reference");
      if (!cyc) {
        sync_top();
        return;
      }
      set.cycle = *cyc;
      if (!expect(TokKind::dot, "'.' between cycle and flow")) {
        sync_top();
        return;
      }
      auto flow = parse_flow_kind();
      if (!flow) {
        sync_top();
        return;
      }
      set.flow = *flow;
      if (!expect(TokKind::equals, "'=' after the flow reference")) {
        sync_top();
        return;
      }
      auto value = expect_number("a parameter value");
      if (!value) {
        sync_top();
        return;
      }
      set.value_micro = value->micro;
      pol.action = set;
    } else {
      error_at(peek(), "expected 'jolt' or 'set' after the trigger tick");
      sync_top();
      return;
    }
    ast_.policies.push_back(std::move(pol));
  }

  std::optional<FlowKind> parse_flow_kind() {
    Token t = peek();
    auto name = expect_ident("a flow (va, ve or vl)");
    if (!name) return std::nullopt;
    if (*name == "va") return FlowKind::added;
    if (*name == "ve") return FlowKind::extracted;
    if (*name == "vl") return FlowKind::lost;
    error_at(t, "unknown flow '" + *name + "' (expected va, ve or vl)");
    return std::nullopt;
  }

  void parse_detect() {
    Token kw = advance();
    DetectorDecl det;
    det.pos = {kw.line, kw.column};
    Token name_tok = peek();
    auto name = expect_ident("a detector name");
    if (!name) {
      sync_top();
      return;
    }
    auto kind = detector_kind_from_name(*name);
    if (!kind) {
      error_at(name_tok, "unknown detector '" + *name +
                             "' (expected max_vg, stable_market, subsidy_cross "
                             "or gov_optimum)");
      sync_top();
      return;
    }
    det.kind = *kind;
    if (at(TokKind::lparen)) {
      advance();
      while (true) {
        auto arg = expect_ident("a cycle reference");
        if (!arg) {
          sync_top();
          return;
        }
        det.cycles.push_back(*arg);
        if (at(TokKind::comma)) {
          advance();
          continue;
        }
        break;
      }
      if (!expect(TokKind::rparen, "')' closing the detector arguments")) {
        sync_top();
        return;
      }
    }
    ast_.detectors.push_back(std::move(det));
  }

  // ---- resolution ---------------------------------------------------------

  void resolve() {
    std::unordered_set<std::string> names;  // pools and agents share one namespace
    std::unordered_set<std::string> pools;
    std::unordered_set<std::string> abundant_pools;
    std::unordered_set<std::string> agents;
    for (const PoolDecl& p : ast_.pools) {
      if (!names.insert(p.id).second) {
        diags_.push_back({Severity::error, p.pos.line, p.pos.column,
                          "duplicate name '" + p.id + "'"});
      }
      pools.insert(p.id);
      if (p.abundant) abundant_pools.insert(p.id);
    }
    for (const AgentDecl& a : ast_.agents) {
      if (!names.insert(a.id).second) {
        diags_.push_back({Severity::error, a.pos.line, a.pos.column,
                          "duplicate name '" + a.id + "'"});
      }
      agents.insert(a.id);
    }
    std::unordered_map<std::string, const CycleDecl*> cycles;
    for (const CycleDecl& c : ast_.cycles) {
      if (!cycles.emplace(c.id, &c).second) {
        diags_.push_back({Severity::error, c.pos.line, c.pos.column,
                          "duplicate cycle '" + c.id + "'"});
      }
    }

    auto check_ref = [&](const std::string& id, SourcePos pos, const char* what) {
      if (!pools.count(id) && !agents.count(id)) {
        diags_.push_back({Severity::error, pos.line, pos.column,
                          std::string("unknown ") + what + " '" + id + "'"});
      }
    };

    for (const CycleDecl& c : ast_.cycles) {
      if (!agents.count(c.actor)) {
        diags_.push_back({Severity::error, c.pos.line, c.pos.column,
                          "cycle actor '" + c.actor + "' is not a declared agent"});
      }
      for (const RateExpr* e : {&c.added, &c.extracted, &c.lost}) {
        if (e->kind == RateExpr::Kind::proportional) {
          check_ref(e->ref, e->pos, "prop reference");
          if (abundant_pools.count(e->ref)) {
            diags_.push_back({Severity::error, e->pos.line, e->pos.column,
                              "prop cannot reference the abundant pool '" + e->ref +
                                  "' (its level is unbounded)"});
          }
        }
      }
      check_ref(c.extracted_source, c.pos, "extraction source");
      if (c.lost_target) check_ref(*c.lost_target, c.pos, "loss target");
      if (c.gained_target) check_ref(*c.gained_target, c.pos, "gain target");
    }

    for (const PolicyDecl& p : ast_.policies) {
      if (p.trigger_tick >= ast_.horizon) {
        diags_.push_back({Severity::error, p.pos.line, p.pos.column,
                          "policy trigger at tick " + std::to_string(p.trigger_tick) +
                              " is beyond the horizon"});
      }
      const std::string* cycle_id = nullptr;
      if (const auto* jolt = std::get_if<JoltAction>(&p.action)) {
        cycle_id = &jolt->cycle;
        if (!pools.count(jolt->source_pool)) {
          diags_.push_back({Severity::error, p.pos.line, p.pos.column,
                            "jolt source '" + jolt->source_pool + "' is not a pool"});
        }
      } else {
        const auto& set = std::get<SetParamAction>(p.action);
        cycle_id = &set.cycle;
        auto it = cycles.find(set.cycle);
        if (it != cycles.end()) {
          const CycleDecl& c = *it->second;
          const RateExpr& e = set.flow == FlowKind::added     ? c.added
                              : set.flow == FlowKind::extracted ? c.extracted
                                                                : c.lost;
          if (e.kind == RateExpr::Kind::ramp) {
            diags_.push_back({Severity::error, p.pos.line, p.pos.column,
                              "cannot set a ramp rate; only constant and prop "
                              "rates are adjustable"});
          }
        }
      }
      if (cycle_id && !cycles.count(*cycle_id)) {
        diags_.push_back({Severity::error, p.pos.line, p.pos.column,
                          "unknown cycle '" + *cycle_id + "'"});
      }
    }

    for (const DetectorDecl& d : ast_.detectors) {
      std::size_t arity =
          (d.kind == DetectorKind::subsidy_cross || d.kind == DetectorKind::gov_optimum)
              ? 2
              : 1;
      if (d.cycles.size() != arity) {
        diags_.push_back({Severity::error, d.pos.line, d.pos.column,
                          std::string("detector ") + detector_kind_name(d.kind) +
                              " expects " + std::to_string(arity) +
                              " cycle argument" + (arity == 1 ? "" : "s")});
        continue;
      }
      for (const std::string& id : d.cycles) {
        if (!cycles.count(id)) {
          diags_.push_back({Severity::error, d.pos.line, d.pos.column,
                            "unknown cycle '" + id + "'"});
        }
      }
    }
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic>& diags_;
  ScenarioAst ast_;
  bool saw_dt_ = false;
  bool saw_horizon_ = false;
  bool saw_seed_ = false;
};

}  // namespace

ParseResult parse_scenario(std::string_view source) {
  ParseResult result;
  std::vector<lex::Token> toks = lex::tokenize(source, result.diagnostics);
  Parser parser(toks, result.diagnostics);
  result.ast = parser.parse();
  return result;
}

}  // namespace vcsim
