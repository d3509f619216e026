#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace vcsim {

// A uniformly sampled real-valued series; sample k sits at t0 + k * dt.
struct Series {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double time_at(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
};

// Throws std::invalid_argument unless both series share size, dt and t0.
void require_same_grid(const Series& a, const Series& b);

// Prefix sums: out[k] = sum of values[j] for j < k. Turns a per-tick amount
// series into the running value series on the same grid.
Series cumulative(const Series& s);

// Which finite-difference stencil filled a derivative sample. Boundary
// samples are one-sided, first-order accurate, and skipped by detectors.
enum class Stencil { central, one_sided };

std::vector<Stencil> stencil_pattern(std::size_t n, int order);

// Index range [first, last] of the central-stencil samples for this order;
// throws if the series is too short to have any.
std::size_t first_central(std::size_t n, int order);
std::size_t last_central(std::size_t n, int order);

// Finite-difference derivative of the given order (1..3). Central stencils
// are second-order accurate and exact on cubics; boundaries fall back to
// one-sided differences. Minimum lengths: 2 / 3 / 4 samples.
Series derivative(const Series& s, int order);

// Marginal value, speed and jolt of one series.
struct DerivativeSet {
  Series v1, v2, v3;
};

DerivativeSet differentiate(const Series& s);

// Sign triple of (marginal, speed, jolt) with a symmetric deadband mapped to
// a verbal state. Any sign inside the deadband yields "steady"; otherwise
// the label reads "<positive|negative> and <increasing|decreasing>
// <fast|slowly>".
struct MotionClass {
  std::array<int, 3> signs{};  // each -1, 0 or +1
  std::string label;
};

MotionClass classify_motion(double v1, double v2, double v3, double deadband);

}  // namespace vcsim
