#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "onelap/piecewise_power.hpp"

using namespace onelap;

TEST_CASE("antiderivative of a pure power") {
  auto f = PiecewisePower::monomial(3.0, 2.0, 2.0);  // 3 r^2 on [0,2)
  auto F = f.antiderivative_from_zero();
  CHECK(F.eval(1.5) == Catch::Approx(std::pow(1.5, 3.0)).epsilon(1e-14));
  CHECK(F.eval(0.0) == 0.0);
  CHECK(f.integral(0.5, 2.0) == Catch::Approx(8.0 - 0.125).epsilon(1e-14));
}

TEST_CASE("derivative undoes integration, including across segments") {
  PiecewisePower f;
  f.segments.push_back({0.0, 1.0, {{2.0, 0.5, 0}, {-1.0, 2.0, 0}}});
  f.segments.push_back({1.0, 3.0, {{0.7, 0.0, 0}, {0.3, 1.0, 0}}});
  auto F = f.antiderivative_from_zero();
  auto g = F.derivative();
  for (double r : {0.2, 0.7, 0.99, 1.01, 1.7, 2.9})
    CHECK(g.eval(r) == Catch::Approx(f.eval(r)).epsilon(1e-12));
  // continuity of F at the breakpoint
  CHECK(F.eval(1.0 - 1e-12) == Catch::Approx(F.eval(1.0 + 1e-12)).epsilon(1e-9));
}

TEST_CASE("1/r integrates to a logarithm") {
  auto f = PiecewisePower::monomial(1.0, -1.0, 10.0);
  CHECK(f.integral(2.0, 6.0) == Catch::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(f.antiderivative_from_zero(), NumericalError);
  // and the log term differentiates back
  PiecewisePower lg;
  lg.segments.push_back({0.0, 10.0, {{2.0, 0.0, 1}}});  // 2 log r
  auto dlg = lg.derivative();
  CHECK(dlg.eval(4.0) == Catch::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("log-power antiderivatives are consistent with numeric quadrature") {
  PiecewisePower f;
  f.segments.push_back({0.0, 5.0, {{1.3, 1.5, 1}}});  // 1.3 r^1.5 log r
  double acc = 0.0;
  const int n = 200000;
  const double a = 0.5, b = 4.0;
  for (int i = 0; i < n; ++i) {
    const double r = a + (b - a) * (i + 0.5) / n;
    acc += f.eval(r) * (b - a) / n;
  }
  CHECK(f.integral(a, b) == Catch::Approx(acc).epsilon(1e-8));
}

TEST_CASE("abs_pow on single-term segments") {
  PiecewisePower f;
  f.segments.push_back({0.0, 1.0, {{-2.0, 1.0, 0}}});
  f.segments.push_back({1.0, 2.0, {{-2.0, 0.0, 0}}});
  auto g = f.abs_pow(3.0);
  REQUIRE(g.has_value());
  CHECK(g->eval(0.5) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(g->eval(1.5) == Catch::Approx(8.0).epsilon(1e-14));
  // multi-term segments have no closed-form power
  PiecewisePower h;
  h.segments.push_back({0.0, 1.0, {{1.0, 0.0, 0}, {1.0, 1.0, 0}}});
  CHECK_FALSE(h.abs_pow(2.0).has_value());
}

TEST_CASE("divergent integrals at the origin surface as +inf in integral()") {
  auto f = PiecewisePower::monomial(1.0, -2.0, 1.0);
  CHECK(std::isinf(f.integral(0.0, 1.0)));
  auto g = PiecewisePower::monomial(1.0, -1.0, 1.0);
  CHECK(std::isinf(g.integral(0.0, 1.0)));
}
