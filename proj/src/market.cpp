#include "vcsim/market.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace vcsim {

namespace {

std::uint64_t splitmix64_mix(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t splitmix64(std::uint64_t x) {
  return splitmix64_mix(x + 0x9E3779B97F4A7C15ULL);
}

// Counter-based stream: the k-th word of member m depends only on the mixed
// seed, so draws are addressable per member and cheap (no generator state to
// initialize; SplittableRandom's output function).
struct NoiseStream {
  std::uint64_t state;
  std::uint64_t next() { return splitmix64_mix(state += 0x9E3779B97F4A7C15ULL); }
};

// Uniform on [0, 1) from the top 53 bits; bit-stable across platforms.
double uniform01(NoiseStream& rng) {
  return static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
}

// Four noise draws for one member, one per flow.
std::array<double, 4> member_noise(const ErrorModel& model, std::uint64_t member) {
  NoiseStream rng{mix_seed(model.seed, member)};
  std::array<double, 4> out{};
  if (model.family == ErrorModel::Family::uniform) {
    for (double& e : out) e = model.scale * (2.0 * uniform01(rng) - 1.0);
  } else {
    // Box-Muller, two draws per pair; avoids platform-dependent
    // std::normal_distribution internals.
    for (int pair = 0; pair < 2; ++pair) {
      double u1 = uniform01(rng);
      double u2 = uniform01(rng);
      double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
      double angle = 2.0 * M_PI * u2;
      out[2 * pair] = model.scale * radius * std::cos(angle);
      out[2 * pair + 1] = model.scale * radius * std::sin(angle);
    }
  }
  return out;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x9E3779B97F4A7C15ULL));
}

NoisyAggregate aggregate_with_errors(std::span<const TickFlows> members,
                                     const ErrorModel& model) {
  if (model.scale < 0) throw std::invalid_argument("error scale must not be negative");
  NoisyAggregate agg;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const TickFlows& f = members[i];
    agg.true_totals.added += f.added;
    agg.true_totals.extracted += f.extracted;
    agg.true_totals.lost += f.lost;
    agg.true_totals.gained += f.gained;
    std::array<double, 4> e = member_noise(model, i);
    agg.added += f.added.to_double() + e[0];
    agg.extracted += f.extracted.to_double() + e[1];
    agg.lost += f.lost.to_double() + e[2];
    agg.gained += f.gained.to_double() + e[3];
    agg.residual += e[0] + e[1] - e[2] - e[3];
    ++agg.members;
  }
  return agg;
}

LlnResult lln_experiment(int n, int replicas, const ErrorModel& model) {
  if (n <= 0) throw std::invalid_argument("member count must be positive");
  if (replicas <= 0) throw std::invalid_argument("replica count must be positive");

  // Any balanced member books work; the residual is pure noise regardless.
  std::vector<TickFlows> members(
      static_cast<std::size_t>(n),
      TickFlows{ValueAmount::from_units(100), ValueAmount::from_units(50),
                ValueAmount::from_units(30), ValueAmount::from_units(120)});

  LlnResult result;
  result.n = n;
  result.replicas = replicas;

  std::vector<double> means;
  means.reserve(static_cast<std::size_t>(replicas));
  for (int r = 0; r < replicas; ++r) {
    ErrorModel replica_model = model;
    replica_model.seed = mix_seed(model.seed, static_cast<std::uint64_t>(r));
    NoisyAggregate agg = aggregate_with_errors(members, replica_model);
    means.push_back(agg.residual / n);
  }

  double sum = 0, abs_sum = 0;
  for (double m : means) {
    sum += m;
    abs_sum += std::abs(m);
  }
  result.mean_residual = sum / replicas;
  result.abs_mean_residual = abs_sum / replicas;

  double var = 0;
  for (double m : means) var += (m - result.mean_residual) * (m - result.mean_residual);
  result.sample_sigma = replicas > 1 ? std::sqrt(var / (replicas - 1)) : 0.0;

  // Per-member residual e_a + e_e - e_l - e_g: four independent zero-mean
  // draws. uniform: var = 4 * scale^2 / 3; normal: var = 4 * scale^2.
  double member_var = model.family == ErrorModel::Family::uniform
                          ? 4.0 * model.scale * model.scale / 3.0
                          : 4.0 * model.scale * model.scale;
  result.expected_sigma = std::sqrt(member_var / n);
  return result;
}

Equilibrium solve_equilibrium(const MarketLines& m) {
  if (m.kd == m.ks) {
    throw DegenerateMarket(m.cd == m.cs
                               ? "identical lines clear at every quantity"
                               : "parallel lines never clear");
  }
  Equilibrium eq;
  eq.quantity = (m.cs - m.cd) / (m.kd - m.ks);
  eq.price = m.kd * eq.quantity + m.cd;
  return eq;
}

double equilibrium_residual(const MarketLines& m) {
  if (m.kd == m.ks) {
    if (m.cd == m.cs) return 0.0;  // one shared line, balanced at any quantity
    throw DegenerateMarket("parallel lines never clear");
  }
  return (m.ks - m.kd) * solve_equilibrium(m).quantity;
}

namespace {

constexpr __int128 kScale = ValueAmount::kScale;

__int128 mul128(__int128 a, __int128 b) {
  __int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("savings evaluation overflow");
  return r;
}

// Exact annual-mode evaluation over denominator 10^(6 * (years + 1)).
struct ExactBalance {
  __int128 numerator = 0;
  __int128 denominator = 1;

  double to_double() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  ValueAmount round() const {
    return ValueAmount::from_micro(
        div_round_half_even(mul128(numerator, kScale), denominator));
  }
};

}  // namespace

SavingsResult savings_balance(const SavingsPlan& plan, Compounding compounding) {
  if (plan.years < 1) throw std::invalid_argument("savings horizon must be at least a year");
  SavingsResult result;

  if (compounding == Compounding::annual) {
    if (plan.years > 2) {
      throw std::invalid_argument(
          "annual closed forms are defined for one or two years");
    }
    std::int64_t r_micro = ValueAmount::from_double(plan.annual_rate).micro();
    const __int128 X = plan.principal.micro();
    const __int128 Y = plan.monthly_fee.micro();
    const __int128 R = kScale + r_micro;  // (1 + r) in micro

    // Route one: the closed polynomial forms, as exact rationals.
    ExactBalance closed;
    if (plan.years == 1) {
      // X(r+1) - 12Y over 10^12
      closed.numerator = mul128(X, R) - mul128(12 * Y, kScale);
      closed.denominator = mul128(kScale, kScale);
    } else {
      // X(r+1)^2 - 12Y(r+2) over 10^18
      closed.numerator =
          mul128(X, mul128(R, R)) - mul128(mul128(12 * Y, r_micro + 2 * kScale), kScale);
      closed.denominator = mul128(kScale, mul128(kScale, kScale));
    }

    // Route two: the yearly recurrence b_k = (1+r) b_{k-1} - 12Y, also exact.
    // Invariant: balance after k years = numerator / (10^6 * denominator).
    ExactBalance recur;
    recur.numerator = X;
    recur.denominator = 1;
    for (int k = 0; k < plan.years; ++k) {
      recur.numerator = mul128(recur.numerator, R) -
                        mul128(12 * Y, mul128(recur.denominator, kScale));
      recur.denominator = mul128(recur.denominator, kScale);
    }
    recur.denominator = mul128(recur.denominator, kScale);

    result.closed_form = closed.to_double();
    result.oracle = recur.to_double();
    result.closed_form_exact = closed.round();
    result.oracle_rounded = recur.round();
    result.abs_diff = std::abs(result.closed_form - result.oracle);
    // The fee term the pure-principal view would omit: 12Y or 12Y(r+2).
    ExactBalance losses;
    if (plan.years == 1) {
      losses.numerator = mul128(12 * Y, kScale);
      losses.denominator = mul128(kScale, kScale);
    } else {
      losses.numerator = mul128(mul128(12 * Y, r_micro + 2 * kScale), kScale);
      losses.denominator = mul128(kScale, mul128(kScale, kScale));
    }
    result.losses_term = losses.to_double();
    return result;
  }

  // Monthly compounding: double-precision closed form and month loop.
  double q = 1.0 + plan.annual_rate / 12.0;
  int months = 12 * plan.years;
  result.closed_form = plan.principal.to_double() * std::pow(q, months);

  double balance = plan.principal.to_double();
  double fee = plan.monthly_fee.to_double();
  double fee_value = 0.0;
  for (int m = 0; m < months; ++m) {
    balance = balance * q - fee;
    fee_value = fee_value * q + fee;  // fees also forgo later interest
  }
  result.oracle = balance;
  result.oracle_rounded = ValueAmount::from_double(balance);
  result.closed_form_exact = ValueAmount::from_double(result.closed_form);
  result.abs_diff = std::abs(result.closed_form - result.oracle);
  result.losses_term = fee_value;
  return result;
}

}  // namespace vcsim
