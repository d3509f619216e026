#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "vcsim/calculus.hpp"

using namespace vcsim;

namespace {

Series sample(double t0, double dt, std::size_t n, double (*f)(double)) {
  Series s{t0, dt, {}};
  s.values.reserve(n);
  for (std::size_t k = 0; k < n; ++k) s.values.push_back(f(s.time_at(k)));
  return s;
}

double cube(double t) { return t * t * t; }
double square(double t) { return t * t; }

}  // namespace

TEST_CASE("cumulative is the exclusive prefix sum") {
  Series s{0.0, 1.0, {1.0, 2.0, 3.0}};
  const Series c = cumulative(s);
  REQUIRE(c.size() == 3);
  CHECK(c.values[0] == 0.0);
  CHECK(c.values[1] == 1.0);
  CHECK(c.values[2] == 3.0);
  CHECK(c.dt == s.dt);
  CHECK(c.t0 == s.t0);
}

TEST_CASE("central first differences are exact on quadratics") {
  const Series s = sample(-1.0, 0.25, 17, square);
  const Series d = derivative(s, 1);
  for (std::size_t k = first_central(s.size(), 1); k <= last_central(s.size(), 1); ++k) {
    CHECK(d.values[k] == doctest::Approx(2.0 * s.time_at(k)).epsilon(1e-12));
  }
  // boundary samples fall back to first-order one-sided differences
  CHECK(d.values[0] == doctest::Approx((s.values[1] - s.values[0]) / 0.25));
}

TEST_CASE("central second differences are exact on cubics") {
  const Series s = sample(0.5, 0.1, 21, cube);
  const Series d = derivative(s, 2);
  for (std::size_t k = first_central(s.size(), 2); k <= last_central(s.size(), 2); ++k) {
    CHECK(d.values[k] == doctest::Approx(6.0 * s.time_at(k)).epsilon(1e-9));
  }
}

TEST_CASE("third differences recover the constant jolt of a cubic everywhere") {
  const Series s = sample(-2.0, 0.5, 12, cube);
  const Series d = derivative(s, 3);
  for (double v : d.values) CHECK(v == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("stencil bookkeeping marks the one-sided boundary samples") {
  const auto p1 = stencil_pattern(6, 1);
  REQUIRE(p1.size() == 6);
  CHECK(p1.front() == Stencil::one_sided);
  CHECK(p1.back() == Stencil::one_sided);
  CHECK(p1[1] == Stencil::central);
  CHECK(first_central(6, 1) == 1);
  CHECK(last_central(6, 1) == 4);

  const auto p3 = stencil_pattern(7, 3);
  CHECK(p3[1] == Stencil::one_sided);  // order 3 needs two samples each side
  CHECK(p3[2] == Stencil::central);
  CHECK(first_central(7, 3) == 2);
  CHECK(last_central(7, 3) == 4);
}

TEST_CASE("short series are rejected") {
  Series s{0.0, 1.0, {1.0, 2.0, 3.0}};
  CHECK_THROWS_AS((void)derivative(s, 3), std::invalid_argument);  // needs 4
  CHECK_THROWS_AS((void)derivative(s, 4), std::invalid_argument);  // no such order
  CHECK_THROWS_AS((void)first_central(4, 3), std::invalid_argument);
  Series one{0.0, 1.0, {1.0}};
  CHECK_THROWS_AS((void)derivative(one, 1), std::invalid_argument);
}

TEST_CASE("differentiate returns all three orders on one grid") {
  const Series s = sample(0.0, 0.2, 16, cube);
  const DerivativeSet d = differentiate(s);
  CHECK(d.v1.size() == s.size());
  CHECK(d.v2.size() == s.size());
  CHECK(d.v3.size() == s.size());
  const std::size_t k = 8;
  // the central first difference of t^3 carries exactly its dt^2 error term
  CHECK(d.v1.values[k] ==
        doctest::Approx(3.0 * square(s.time_at(k)) + 0.2 * 0.2).epsilon(1e-12));
  CHECK(d.v2.values[k] == doctest::Approx(6.0 * s.time_at(k)).epsilon(1e-9));
  CHECK(d.v3.values[k] == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("grids must match before series are combined") {
  Series a{0.0, 1.0, {1.0, 2.0}};
  Series b{0.0, 0.5, {1.0, 2.0}};
  CHECK_THROWS_AS(require_same_grid(a, b), std::invalid_argument);
  Series c{0.0, 1.0, {1.0, 2.0, 3.0}};
  CHECK_THROWS_AS(require_same_grid(a, c), std::invalid_argument);
  CHECK_NOTHROW(require_same_grid(a, a));
}

TEST_CASE("motion labels read sign by sign") {
  CHECK(classify_motion(3.0, 1.0, 0.5, 0.1).label == "positive and increasing fast");
  CHECK(classify_motion(3.0, 1.0, -0.5, 0.1).label == "positive and increasing slowly");
  CHECK(classify_motion(3.0, -1.0, 0.5, 0.1).label == "positive and decreasing fast");
  CHECK(classify_motion(-3.0, 1.0, -0.5, 0.1).label == "negative and increasing slowly");
  CHECK(classify_motion(-3.0, -1.0, -0.5, 0.1).label == "negative and decreasing slowly");

  // any sign inside the deadband collapses the label to steady
  CHECK(classify_motion(0.05, 1.0, 1.0, 0.1).label == "steady");
  CHECK(classify_motion(3.0, 0.0, 1.0, 0.1).label == "steady");
  CHECK(classify_motion(3.0, 1.0, 0.1, 0.1).label == "steady");  // boundary is inside
  CHECK(classify_motion(0.0, 0.0, 0.0, 0.0).signs == std::array<int, 3>{0, 0, 0});
  CHECK_THROWS_AS((void)classify_motion(1, 1, 1, -0.5), std::invalid_argument);
}
