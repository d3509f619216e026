#include <doctest.h>

#include <random>

#include "vcsim/amount.hpp"

using namespace vcsim;

TEST_CASE("format_micro prints exactly six fraction digits") {
  CHECK(format_micro(0) == "0.000000");
  CHECK(format_micro(1) == "0.000001");
  CHECK(format_micro(-1) == "-0.000001");
  CHECK(format_micro(1'500'000) == "1.500000");
  CHECK(format_micro(-1'500'000) == "-1.500000");
  CHECK(format_micro(123'456'789) == "123.456789");
  CHECK(format_micro(INT64_MIN) == "-9223372036854.775808");
  CHECK(format_micro(INT64_MAX) == "9223372036854.775807");
}

TEST_CASE("strict parse accepts at most six fraction digits") {
  CHECK(parse_micro("12.5", true) == 12'500'000);
  CHECK(parse_micro("-0.000001", true) == -1);
  CHECK(parse_micro("1000000", true) == 1'000'000'000'000);
  CHECK(parse_micro("0.25", true) == 250'000);
  CHECK(!parse_micro(".25", true).has_value());  // digits must lead
  CHECK(!parse_micro("1.0000005", true).has_value());  // seventh digit
  CHECK(!parse_micro("", true).has_value());
  CHECK(!parse_micro("1.2.3", true).has_value());
  CHECK(!parse_micro("abc", true).has_value());
  CHECK(!parse_micro("1e3", true).has_value());
  CHECK(!parse_micro("99999999999999999999", true).has_value());  // overflow
}

TEST_CASE("non-strict parse rounds the seventh digit half to even") {
  CHECK(parse_micro("0.0000005", false) == 0);   // tie, down to even
  CHECK(parse_micro("0.0000015", false) == 2);   // tie, up to even
  CHECK(parse_micro("0.0000025", false) == 2);   // tie, down to even
  CHECK(parse_micro("0.00000251", false) == 3);  // past the tie
  CHECK(parse_micro("-0.0000005", false) == 0);  // symmetric for negatives
  CHECK(parse_micro("-0.0000015", false) == -2);
  CHECK(parse_micro("2.00000049999", false) == 2'000'000);
}

TEST_CASE("display and parse invert each other") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> dist(-4'000'000'000'000'000LL,
                                                   4'000'000'000'000'000LL);
  for (int i = 0; i < 500; ++i) {
    const std::int64_t micro = dist(rng);
    const auto a = ValueAmount::from_micro(micro);
    const auto back = ValueAmount::parse(a.str());
    REQUIRE(back.has_value());
    CHECK(back->micro() == micro);
  }
}

TEST_CASE("div_round_half_even ties go to the even quotient") {
  CHECK(div_round_half_even(7, 2) == 4);    // 3.5 -> 4
  CHECK(div_round_half_even(5, 2) == 2);    // 2.5 -> 2
  CHECK(div_round_half_even(-7, 2) == -4);  // -3.5 -> -4
  CHECK(div_round_half_even(-5, 2) == -2);  // -2.5 -> -2
  CHECK(div_round_half_even(1, 3) == 0);
  CHECK(div_round_half_even(2, 3) == 1);
  CHECK(div_round_half_even(-2, 3) == -1);
  const __int128 big = static_cast<__int128>(INT64_MAX) * 2 + 1;
  CHECK_THROWS_AS((void)div_round_half_even(big, 1), OverflowError);
}

TEST_CASE("checked arithmetic throws instead of wrapping") {
  const auto top = ValueAmount::from_micro(INT64_MAX);
  const auto one = ValueAmount::from_micro(1);
  CHECK_THROWS_AS((void)(top + one), OverflowError);
  CHECK_THROWS_AS((void)(ValueAmount::from_micro(INT64_MIN) - one), OverflowError);
  CHECK_THROWS_AS((void)(-ValueAmount::from_micro(INT64_MIN)), OverflowError);
  CHECK(top - one + one == top);  // legal round trip unchanged
}

TEST_CASE("from_double rounds at micro precision") {
  CHECK(ValueAmount::from_double(1.25).micro() == 1'250'000);
  CHECK(ValueAmount::from_double(-1.25).micro() == -1'250'000);
  CHECK(ValueAmount::from_double(0.1).micro() == 100'000);
  CHECK_THROWS_AS((void)ValueAmount::from_double(1.0 / 0.0), std::invalid_argument);
  const double nan = 0.0 / 0.0;
  CHECK_THROWS_AS((void)ValueAmount::from_double(nan), std::invalid_argument);
}

TEST_CASE("scale_amount applies one half-even rounding") {
  const auto third = ValueAmount::parse("333.333333").value();
  // 333.333333 * 0.1 = 33.3333333 -> 33.333333
  CHECK(scale_amount(third, 100'000) == ValueAmount::parse("33.333333").value());
  // 0.000005 * 0.5 = 0.0000025 -> tie -> 0.000002
  CHECK(scale_amount(ValueAmount::from_micro(5), 500'000).micro() == 2);
  CHECK(scale_amount(ValueAmount::from_micro(-5), 500'000).micro() == -2);
  CHECK(scale_amount(ValueAmount::from_units(100), 1'000'000) ==
        ValueAmount::from_units(100));
}
