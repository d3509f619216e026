#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "vcsim/ledger.hpp"

namespace vcsim {

// ---- measurement error and the law of large numbers ---------------------

// Zero-mean reporting noise added independently to each flow of each member.
// uniform: draws on [-scale, scale). normal: standard deviation = scale.
// The generator is fully seed-derived, so results are reproducible across
// platforms.
struct ErrorModel {
  enum class Family { uniform, normal };
  Family family = Family::uniform;
  double scale = 1.0;
  std::uint64_t seed = 0;
};

// Noisy totals over a group of members. The true books balance exactly;
// the reported residual (added + extracted) - (lost + gained) is pure
// accumulated noise.
struct NoisyAggregate {
  TickFlows true_totals;
  double added = 0, extracted = 0, lost = 0, gained = 0;
  double residual = 0;
  std::int64_t members = 0;
};

NoisyAggregate aggregate_with_errors(std::span<const TickFlows> members,
                                     const ErrorModel& model);

// Repeats the aggregation experiment: per replica, n members each report
// with fresh noise; the per-member mean residual is recorded. As n grows the
// residual vanishes at the 1/sqrt(n) rate.
struct LlnResult {
  int n = 0;
  int replicas = 0;
  double mean_residual = 0;      // signed mean of the per-replica means
  double abs_mean_residual = 0;  // mean of their absolute values
  double expected_sigma = 0;     // analytic sigma of a per-replica mean
  double sample_sigma = 0;       // observed sigma across replicas
};

LlnResult lln_experiment(int n, int replicas, const ErrorModel& model);

// ---- supply and demand --------------------------------------------------

struct DegenerateMarket : std::runtime_error {
  explicit DegenerateMarket(const std::string& what) : std::runtime_error(what) {}
};

// Price lines p = kd*q + cd (demand) and p = ks*q + cs (supply).
struct MarketLines {
  double kd = 0, cd = 0, ks = 0, cs = 0;
};

struct Equilibrium {
  double quantity = 0;
  double price = 0;
};

// Intersection of the two lines. Throws DegenerateMarket when the slopes
// coincide (identical or parallel lines have no unique clearing point).
Equilibrium solve_equilibrium(const MarketLines& m);

// Added-minus-lost value at equilibrium under the line-slope bookkeeping
// (ks - kd) * qe. Zero exactly when both sides book value at the same slope.
// Identical lines clear at every quantity and return zero; parallel distinct
// lines throw DegenerateMarket.
double equilibrium_residual(const MarketLines& m);

// ---- savings accounts ---------------------------------------------------

enum class Compounding { annual, monthly };

struct SavingsPlan {
  ValueAmount principal;     // X
  double annual_rate = 0;    // r, on the micro grid for exact evaluation
  ValueAmount monthly_fee;   // Y
  int years = 1;             // t
};

// Balance of the account after `years`, by two routes.
//
// annual: closed forms X(r+1) - 12Y and X(r+1)^2 - 12Y(r+2) against the
// yearly recurrence b_k = (1+r) b_{k-1} - 12Y. Both routes run in exact
// integer rationals, so closed_form_exact and oracle agree to the micro-unit
// (years 1 and 2 only; the closed polynomial forms stop there).
//
// monthly: closed form X((r/12)+1)^(12t) against a month-by-month loop that
// compounds and then charges the fee. The closed form tracks the principal
// only; losses_term is the accumulated fee value it leaves out, and abs_diff
// collapses to rounding noise when the fee is zero.
struct SavingsResult {
  double closed_form = 0;
  double oracle = 0;
  ValueAmount closed_form_exact;  // annual mode only
  ValueAmount oracle_rounded;
  double abs_diff = 0;
  double losses_term = 0;
};

SavingsResult savings_balance(const SavingsPlan& plan, Compounding compounding);

// ---- shared deterministic seeding ---------------------------------------

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace vcsim
