#include "vcsim/amount.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

namespace vcsim {

namespace {

constexpr __int128 kInt64Min = std::numeric_limits<std::int64_t>::min();
constexpr __int128 kInt64Max = std::numeric_limits<std::int64_t>::max();

std::int64_t narrow_or_throw(__int128 v, const char* what) {
  if (v < kInt64Min || v > kInt64Max) throw OverflowError(what);
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::int64_t div_round_half_even(__int128 num, __int128 den) {
  // den > 0 by contract; remainder carries the sign of num.
  __int128 q = num / den;
  __int128 r = num % den;
  __int128 abs_r = r < 0 ? -r : r;
  if (2 * abs_r > den || (2 * abs_r == den && (q & 1) != 0)) {
    q += r < 0 ? -1 : 1;
  }
  return narrow_or_throw(q, "rounded quotient out of range");
}

std::string format_micro(std::int64_t micro) {
  // Work in unsigned space so INT64_MIN is safe to negate.
  std::uint64_t mag = micro < 0 ? ~static_cast<std::uint64_t>(micro) + 1
                                : static_cast<std::uint64_t>(micro);
  std::uint64_t units = mag / ValueAmount::kScale;
  std::uint64_t frac = mag % ValueAmount::kScale;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%s%llu.%06llu", micro < 0 ? "-" : "",
                static_cast<unsigned long long>(units),
                static_cast<unsigned long long>(frac));
  return buf;
}

std::optional<std::int64_t> parse_micro(std::string_view text, bool strict) {
  if (text.empty()) return std::nullopt;
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') {
    neg = text[i] == '-';
    ++i;
  }
  if (i == text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;

  __int128 units = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    units = units * 10 + (text[i] - '0');
    if (units > kInt64Max) return std::nullopt;
    ++i;
  }

  __int128 frac = 0;       // first six fraction digits, scaled to micro
  int frac_digits = 0;
  int round_dir = 0;       // -1 below half, 0 exactly half so far, +1 above half
  bool first_extra = true;
  if (i < text.size() && text[i] == '.') {
    ++i;
    if (i == text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      int d = text[i] - '0';
      if (frac_digits < 6) {
        frac = frac * 10 + d;
        ++frac_digits;
      } else if (strict) {
        return std::nullopt;
      } else if (first_extra) {
        round_dir = d < 5 ? -1 : (d > 5 ? 1 : 0);
        first_extra = false;
      } else if (round_dir == 0 && d != 0) {
        round_dir = 1;
      }
      ++i;
    }
  }
  if (i != text.size()) return std::nullopt;

  while (frac_digits < 6) {
    frac *= 10;
    ++frac_digits;
  }
  if (!first_extra) {
    // Round the tail half to even on the magnitude.
    if (round_dir > 0 || (round_dir == 0 && (frac & 1) != 0)) ++frac;
  }

  __int128 mag = units * ValueAmount::kScale + frac;
  __int128 value = neg ? -mag : mag;
  if (value < kInt64Min || value > kInt64Max) return std::nullopt;
  return static_cast<std::int64_t>(value);
}

ValueAmount ValueAmount::from_units(std::int64_t units) {
  std::int64_t micro;
  if (__builtin_mul_overflow(units, kScale, &micro)) throw OverflowError("amount out of range");
  return ValueAmount(micro);
}

ValueAmount ValueAmount::from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("amount must be finite");
  double scaled = value * kScale;
  if (std::abs(scaled) >= 9.3e18) throw OverflowError("amount out of range");
  // nearbyint under the default FP environment rounds half to even.
  return ValueAmount(static_cast<std::int64_t>(std::nearbyint(scaled)));
}

std::optional<ValueAmount> ValueAmount::parse(std::string_view text) {
  auto micro = parse_micro(text, /*strict=*/true);
  if (!micro) return std::nullopt;
  return ValueAmount(*micro);
}

std::optional<ValueAmount> ValueAmount::parse_rounded(std::string_view text) {
  auto micro = parse_micro(text, /*strict=*/false);
  if (!micro) return std::nullopt;
  return ValueAmount(*micro);
}

ValueAmount operator+(ValueAmount a, ValueAmount b) {
  std::int64_t r;
  if (__builtin_add_overflow(a.micro_, b.micro_, &r)) throw OverflowError("amount addition overflow");
  return ValueAmount::from_micro(r);
}

ValueAmount operator-(ValueAmount a, ValueAmount b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a.micro_, b.micro_, &r)) throw OverflowError("amount subtraction overflow");
  return ValueAmount::from_micro(r);
}

ValueAmount ValueAmount::operator-() const {
  std::int64_t r;
  if (__builtin_sub_overflow(std::int64_t{0}, micro_, &r)) throw OverflowError("amount negation overflow");
  return ValueAmount(r);
}

ValueAmount scale_amount(ValueAmount value, std::int64_t factor_micro) {
  __int128 num = static_cast<__int128>(value.micro()) * factor_micro;
  return ValueAmount::from_micro(div_round_half_even(num, ValueAmount::kScale));
}

}  // namespace vcsim
