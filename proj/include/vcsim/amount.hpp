#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vcsim {

// Thrown when exact integer arithmetic would leave the representable range.
struct OverflowError : std::runtime_error {
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

// Divides num by den (den > 0) rounding half to even. Throws OverflowError
// if the quotient does not fit in 64 bits.
std::int64_t div_round_half_even(__int128 num, __int128 den);

// Renders a micro-unit integer as a signed decimal with exactly six
// fraction digits, e.g. -1500000 -> "-1.500000".
std::string format_micro(std::int64_t micro);

// Parses a plain decimal number into micro-units (signed, optional fraction).
// Fails (nullopt) on malformed text or overflow. When strict is true a
// fraction longer than six digits is rejected; otherwise the excess digits
// are rounded half to even.
std::optional<std::int64_t> parse_micro(std::string_view text, bool strict);

// An exact signed quantity of value in units of 10^-6. All arithmetic is
// overflow-checked; there is no hidden rounding anywhere.
class ValueAmount {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr ValueAmount() = default;

  static constexpr ValueAmount from_micro(std::int64_t micro) { return ValueAmount(micro); }
  static ValueAmount from_units(std::int64_t units);
  // Rounds half to even at micro precision; rejects non-finite input.
  static ValueAmount from_double(double value);
  // Strict decimal parse: at most six fraction digits.
  static std::optional<ValueAmount> parse(std::string_view text);
  // External decimal parse: digits beyond the sixth round half to even.
  static std::optional<ValueAmount> parse_rounded(std::string_view text);

  constexpr std::int64_t micro() const { return micro_; }
  double to_double() const { return static_cast<double>(micro_) / kScale; }
  std::string str() const { return format_micro(micro_); }

  friend ValueAmount operator+(ValueAmount a, ValueAmount b);
  friend ValueAmount operator-(ValueAmount a, ValueAmount b);
  ValueAmount operator-() const;
  ValueAmount& operator+=(ValueAmount o) { return *this = *this + o; }
  ValueAmount& operator-=(ValueAmount o) { return *this = *this - o; }

  friend constexpr bool operator==(ValueAmount a, ValueAmount b) = default;
  friend constexpr auto operator<=>(ValueAmount a, ValueAmount b) = default;

 private:
  explicit constexpr ValueAmount(std::int64_t micro) : micro_(micro) {}
  std::int64_t micro_ = 0;
};

// value * (factor_micro / 10^6) with a single half-to-even rounding.
ValueAmount scale_amount(ValueAmount value, std::int64_t factor_micro);

}  // namespace vcsim
