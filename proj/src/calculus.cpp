#include "vcsim/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace vcsim {

void require_same_grid(const Series& a, const Series& b) {
  if (a.size() != b.size()) throw std::invalid_argument("series lengths differ");
  auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
  };
  if (!close(a.dt, b.dt) || !close(a.t0, b.t0)) {
    throw std::invalid_argument("series grids differ");
  }
}

Series cumulative(const Series& s) {
  Series out;
  out.t0 = s.t0;
  out.dt = s.dt;
  out.values.resize(s.size());
  double run = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    out.values[k] = run;
    run += s.values[k];
  }
  return out;
}

namespace {

std::size_t min_length(int order) {
  switch (order) {
    case 1: return 2;
    case 2: return 3;
    case 3: return 4;
    default: throw std::invalid_argument("derivative order must be 1, 2 or 3");
  }
}

std::size_t margin(int order) { return order == 3 ? 2 : 1; }

}  // namespace

std::vector<Stencil> stencil_pattern(std::size_t n, int order) {
  if (n < min_length(order)) throw std::invalid_argument("series too short to differentiate");
  std::vector<Stencil> out(n, Stencil::central);
  std::size_t m = margin(order);
  for (std::size_t k = 0; k < n; ++k) {
    if (k < m || k + m >= n) out[k] = Stencil::one_sided;
  }
  return out;
}

std::size_t first_central(std::size_t n, int order) {
  if (n < 2 * margin(order) + 1) {
    throw std::invalid_argument("series has no central samples at this order");
  }
  return margin(order);
}

std::size_t last_central(std::size_t n, int order) {
  return n - 1 - margin(order);
}

Series derivative(const Series& s, int order) {
  std::size_t n = s.size();
  if (n < min_length(order)) throw std::invalid_argument("series too short to differentiate");
  const std::vector<double>& v = s.values;
  double dt = s.dt;

  Series out;
  out.t0 = s.t0;
  out.dt = s.dt;
  out.values.resize(n);

  if (order == 1) {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      out.values[k] = (v[k + 1] - v[k - 1]) / (2 * dt);
    }
    out.values[0] = (v[1] - v[0]) / dt;
    out.values[n - 1] = (v[n - 1] - v[n - 2]) / dt;
  } else if (order == 2) {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      out.values[k] = (v[k + 1] - 2 * v[k] + v[k - 1]) / (dt * dt);
    }
    out.values[0] = (v[2] - 2 * v[1] + v[0]) / (dt * dt);
    out.values[n - 1] = (v[n - 1] - 2 * v[n - 2] + v[n - 3]) / (dt * dt);
  } else {
    double dt3 = dt * dt * dt;
    for (std::size_t k = 2; k + 2 < n; ++k) {
      out.values[k] = (v[k + 2] - 2 * v[k + 1] + 2 * v[k - 1] - v[k - 2]) / (2 * dt3);
    }
    // Edge slots take the third difference over the nearest 4-point window.
    auto edge = [&](std::size_t w) {
      return (v[w + 3] - 3 * v[w + 2] + 3 * v[w + 1] - v[w]) / dt3;
    };
    out.values[0] = edge(0);
    out.values[1] = edge(0);
    out.values[n - 2] = edge(n - 4);
    out.values[n - 1] = edge(n - 4);
  }
  return out;
}

DerivativeSet differentiate(const Series& s) {
  return DerivativeSet{derivative(s, 1), derivative(s, 2), derivative(s, 3)};
}

MotionClass classify_motion(double v1, double v2, double v3, double deadband) {
  if (deadband < 0) throw std::invalid_argument("deadband must not be negative");
  auto sign = [&](double x) { return std::abs(x) <= deadband ? 0 : (x > 0 ? 1 : -1); };
  MotionClass mc;
  mc.signs = {sign(v1), sign(v2), sign(v3)};
  if (mc.signs[0] == 0 || mc.signs[1] == 0 || mc.signs[2] == 0) {
    mc.label = "steady";
    return mc;
  }
  mc.label = std::string(mc.signs[0] > 0 ? "positive" : "negative") + " and " +
             (mc.signs[1] > 0 ? "increasing" : "decreasing") + " " +
             (mc.signs[2] > 0 ? "fast" : "slowly");
  return mc;
}

}  // namespace vcsim
