#include <doctest.h>

#include <array>
#include <cmath>

#include "vcsim/market.hpp"

using namespace vcsim;

namespace {
ValueAmount val(const char* text) { return ValueAmount::parse(text).value(); }
}  // namespace

TEST_CASE("two crossing price lines clear at one quantity") {
  // demand p = -2q + 100, supply p = 3q + 25
  const MarketLines m{-2.0, 100.0, 3.0, 25.0};
  const Equilibrium eq = solve_equilibrium(m);
  CHECK(eq.quantity == doctest::Approx(15.0).epsilon(1e-12));
  CHECK(eq.price == doctest::Approx(70.0).epsilon(1e-12));
  // both lines agree on the price at the clearing quantity
  CHECK(m.kd * eq.quantity + m.cd == doctest::Approx(m.ks * eq.quantity + m.cs));
  CHECK(equilibrium_residual(m) == doctest::Approx(75.0));
}

TEST_CASE("slope bookkeeping cancels exactly only for equal slopes") {
  // same slope on both sides: zero residual without any tolerance game
  const MarketLines tied{2.0, 50.0, 2.0, 50.0};
  CHECK(equilibrium_residual(tied) == 0.0);
  // the smallest slope perturbation reappears in the residual
  const MarketLines bumped{-1.0, 30.0, -1.0 + 1e-9, 10.0};
  CHECK(equilibrium_residual(bumped) != 0.0);
}

TEST_CASE("degenerate line pairs are refused") {
  const MarketLines identical{2.0, 5.0, 2.0, 5.0};
  CHECK_THROWS_WITH_AS((void)solve_equilibrium(identical),
                       "identical lines clear at every quantity", DegenerateMarket);
  const MarketLines parallel{2.0, 5.0, 2.0, 6.0};
  CHECK_THROWS_WITH_AS((void)solve_equilibrium(parallel),
                       "parallel lines never clear", DegenerateMarket);
  CHECK_THROWS_AS((void)equilibrium_residual(parallel), DegenerateMarket);
  // equal intercepts with distinct slopes clear at the origin
  const MarketLines origin{-1.0, 20.0, 4.0, 20.0};
  CHECK(solve_equilibrium(origin).quantity == 0.0);
  CHECK(solve_equilibrium(origin).price == 20.0);
  CHECK(equilibrium_residual(origin) == 0.0);
}

TEST_CASE("annual closed forms match the yearly recurrence to the micro-unit") {
  SavingsPlan plan{val("1234.567891"), 0.123456, val("7.654321"), 1};
  SavingsResult r1 = savings_balance(plan, Compounding::annual);
  // independently derived: X(1+r) - 12Y = 1295.130852551296
  CHECK(r1.closed_form_exact == val("1295.130853"));
  CHECK(r1.oracle_rounded == r1.closed_form_exact);
  CHECK(r1.abs_diff == 0.0);

  plan.years = 2;
  SavingsResult r2 = savings_balance(plan, Compounding::annual);
  // X(1+r)^2 - 12Y(r+2) = 1363.170675083869
  CHECK(r2.closed_form_exact == val("1363.170675"));
  CHECK(r2.oracle_rounded == r2.closed_form_exact);

  plan.years = 3;
  CHECK_THROWS_AS((void)savings_balance(plan, Compounding::annual), std::invalid_argument);
  plan.years = 0;
  CHECK_THROWS_AS((void)savings_balance(plan, Compounding::annual), std::invalid_argument);
}

TEST_CASE("a zero rate reduces the account to fee subtraction") {
  const SavingsPlan plan{val("1000"), 0.0, val("2.5"), 2};
  const SavingsResult r = savings_balance(plan, Compounding::annual);
  CHECK(r.closed_form_exact == val("940"));  // 1000 - 24 * 2.5
  CHECK(r.oracle_rounded == val("940"));
}

TEST_CASE("the monthly closed form omits exactly the accumulated fees") {
  const SavingsPlan plan{val("1200"), 0.12, val("1"), 1};
  const SavingsResult r = savings_balance(plan, Compounding::monthly);
  CHECK(r.closed_form == doctest::Approx(1352.1900361584).epsilon(1e-12));
  CHECK(r.oracle == doctest::Approx(1339.5075331452).epsilon(1e-12));
  CHECK(r.losses_term == doctest::Approx(12.6825030132).epsilon(1e-9));
  // the gap between the two routes is the fee value, nothing else
  CHECK(std::abs(r.abs_diff - r.losses_term) < 1e-9);

  const SavingsPlan free{val("1200"), 0.12, val("0"), 1};
  const SavingsResult f = savings_balance(free, Compounding::monthly);
  CHECK(f.abs_diff < 1e-9);  // pure double rounding noise
  CHECK(f.losses_term == 0.0);
}

TEST_CASE("noisy books stay balanced in truth and drift only by noise") {
  std::array<TickFlows, 3> members{};
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto& f = members[i];
    f.added = ValueAmount::from_units(100 + static_cast<std::int64_t>(i));
    f.extracted = ValueAmount::from_units(50);
    f.lost = ValueAmount::from_units(30);
    f.gained = f.added + f.extracted - f.lost;
  }
  const ErrorModel model{ErrorModel::Family::uniform, 0.5, 99};
  const NoisyAggregate agg = aggregate_with_errors(members, model);
  CHECK(agg.members == 3);
  CHECK(conservation_residual(agg.true_totals).micro() == 0);
  CHECK(agg.residual ==
        doctest::Approx((agg.added + agg.extracted) - (agg.lost + agg.gained)));
  // uniform noise per flow stays inside the scale bound
  CHECK(std::abs(agg.added - agg.true_totals.added.to_double()) <= 3 * 0.5);

  const NoisyAggregate again = aggregate_with_errors(members, model);
  CHECK(again.added == agg.added);  // same seed, same books
  CHECK(again.residual == agg.residual);

  ErrorModel other = model;
  other.seed = 100;
  CHECK(aggregate_with_errors(members, other).residual != agg.residual);
}

TEST_CASE("error scale and counts are validated") {
  const ErrorModel bad{ErrorModel::Family::uniform, -1.0, 0};
  std::array<TickFlows, 1> one{};
  CHECK_THROWS_AS((void)aggregate_with_errors(one, bad), std::invalid_argument);
  const ErrorModel ok{ErrorModel::Family::uniform, 1.0, 0};
  CHECK_THROWS_AS((void)lln_experiment(0, 5, ok), std::invalid_argument);
  CHECK_THROWS_AS((void)lln_experiment(10, 0, ok), std::invalid_argument);
}

TEST_CASE("residuals shrink with the member count at known sigma") {
  const ErrorModel model{ErrorModel::Family::uniform, 1.0, 42};
  const LlnResult r = lln_experiment(10'000, 1, model);
  // per-member residual variance is 4/3 for unit scale; the mean of n
  // members has sigma 2/(sqrt(3) sqrt(n))
  CHECK(r.expected_sigma == doctest::Approx(2.0 / (std::sqrt(3.0) * 100.0)).epsilon(1e-12));
  CHECK(std::abs(r.mean_residual) < 3.0 * r.expected_sigma);

  const LlnResult again = lln_experiment(10'000, 1, model);
  CHECK(again.mean_residual == r.mean_residual);  // fully seed-derived

  ErrorModel normal = model;
  normal.family = ErrorModel::Family::normal;
  const LlnResult rn = lln_experiment(2'000, 8, normal);
  // normal residual variance is 4 scale^2
  CHECK(rn.expected_sigma == doctest::Approx(2.0 / std::sqrt(2'000.0)).epsilon(1e-12));
  CHECK(rn.sample_sigma > 0.0);
  CHECK(std::abs(rn.mean_residual) < 4.0 * rn.expected_sigma / std::sqrt(8.0));
}

TEST_CASE("seed mixing separates streams deterministically") {
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(mix_seed(1, 2) != mix_seed(2, 2));
  CHECK(mix_seed(0, 0) != 0);  // the mixer never passes zero through
}
