#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "onelap/fields.hpp"
#include "onelap/rearrangement.hpp"
#include "support.hpp"

using namespace onelap;

TEST_CASE("distribution function of a constant field") {
  const auto f = preset_constant(3, 1.0, 2.5);
  const double vol = ball_volume(3);
  CHECK(f.distribution(1.0) == Catch::Approx(vol).epsilon(1e-12));
  CHECK(f.distribution(2.5) == 0.0);
  CHECK(f.distribution(7.0) == 0.0);

  const auto sampled = f.sample(radial_quadrature(3, 1.0, 500));
  CHECK(distribution_function(sampled, 1.0) == Catch::Approx(vol).epsilon(1e-12));
  CHECK(distribution_function(sampled, 2.5) == 0.0);
  CHECK_THROWS_AS(distribution_function(sampled, -0.1), ValidationError);
}

TEST_CASE("distribution function of 1/|x| matches C_N / s^N") {
  const int dim = 3;
  const double R = 2.0;
  const auto f = preset_inverse_radius(dim, R, 1.0);
  const double c_n = ball_volume(dim);
  for (double s : {0.6, 1.0, 3.0, 10.0}) {  // s >= 1/R
    CHECK(f.distribution(s) == Catch::Approx(c_n / std::pow(s, dim)).epsilon(1e-10));
  }
  // below 1/R the whole ball is a superlevel set
  CHECK(f.distribution(0.2) == Catch::Approx(c_n * std::pow(R, dim)).epsilon(1e-12));

  const auto sampled = f.sample(radial_quadrature(dim, R, 4000, 1e-4, false));
  const double omega_h = sampled.domain_measure();
  for (double s : {0.6, 1.0, 3.0}) {
    CHECK(distribution_function(sampled, s) ==
          Catch::Approx(c_n / std::pow(s, dim)).margin(2e-3 * omega_h));
  }
}

TEST_CASE("decreasing rearrangement of 1/|x| is C_N^{1/N} t^{-1/N}") {
  const int dim = 4;
  const double R = 1.0;
  const auto f = preset_inverse_radius(dim, R, 1.0);
  const double c_n = ball_volume(dim);
  for (double t : {1e-4, 1e-2, 0.3, c_n * 0.999}) {
    CHECK(f.rearrangement(t) ==
          Catch::Approx(std::pow(c_n / t, 1.0 / dim)).epsilon(1e-12));
  }
  // sampled step rearrangement converges to the same curve
  const auto sampled = f.sample(radial_quadrature(dim, R, 6000, 1e-4, false));
  const auto r = decreasing_rearrangement(sampled);
  for (double t : {1e-2, 0.3, 2.0}) {
    CHECK(r.eval(t) == Catch::Approx(std::pow(c_n / t, 1.0 / dim)).epsilon(5e-3));
  }
}

TEST_CASE("plateau rearrangement: clamped power profile") {
  // The printed form C_N^{1/N} t^{-1/N} can exceed sup f = beta/R near t = 0;
  // equimeasurability forces the plateau value there instead.
  const int dim = 4;
  const double R = 1.0, beta = 1.5;
  const auto f = preset_plateau(dim, R, beta);
  const double c_n = ball_volume(dim);
  const double t_split = c_n * std::pow(R / beta, dim);
  CHECK(f.rearrangement(0.5 * t_split) == Catch::Approx(beta / R).epsilon(1e-12));
  for (double t : {1.2 * t_split, 0.7 * c_n, 0.999 * c_n}) {
    CHECK(f.rearrangement(t) ==
          Catch::Approx(std::pow(c_n / t, 1.0 / dim)).epsilon(1e-12));
  }
}

TEST_CASE("Lorentz weak norms") {
  const int dim = 3;
  const double R = 1.0;
  const double c_n = ball_volume(dim);
  SECTION("1/|x| has weak norm C_N^{1/N}") {
    const auto f = preset_inverse_radius(dim, R, 1.0);
    CHECK(f.lorentz_weak_norm() == Catch::Approx(std::pow(c_n, 1.0 / dim)).epsilon(1e-14));
  }
  SECTION("constants: c |Omega|^{1/N}, exactly even when sampled") {
    const auto f = preset_constant(dim, R, 3.0);
    const double expected = 3.0 * std::pow(c_n, 1.0 / dim);
    CHECK(f.lorentz_weak_norm() == Catch::Approx(expected).epsilon(1e-14));
    const auto sampled = f.sample(radial_quadrature(dim, R, 800));
    CHECK(lorentz_weak_norm(sampled, dim) == Catch::Approx(expected).epsilon(1e-12));
  }
  SECTION("scaling alpha/|x|, analytic vs grid") {
    const double alpha = 2.75;
    const auto f = preset_inverse_radius(dim, R, alpha);
    const double expected = alpha * std::pow(c_n, 1.0 / dim);
    CHECK(f.lorentz_weak_norm() == Catch::Approx(expected).epsilon(1e-14));
    const auto sampled = f.sample(radial_quadrature(dim, R, 8000, 1e-3, false));
    CHECK(lorentz_weak_norm(sampled, dim) == Catch::Approx(expected).epsilon(2e-3));
  }
}

TEST_CASE("L^q norms against the independent radial oracle") {
  SECTION("f == 1 on the unit disk, q = 2") {
    const auto f = preset_constant(2, 1.0, 1.0);
    CHECK(f.lq_norm(2.0) == Catch::Approx(std::sqrt(kPi)).epsilon(1e-13));
  }
  SECTION("1/|x| on B_1 in R^3, q = 2: exact value sqrt(4 pi)") {
    const auto f = preset_inverse_radius(3, 1.0, 1.0);
    CHECK(f.lq_norm(2.0) == Catch::Approx(std::sqrt(4.0 * kPi)).epsilon(1e-13));
  }
  SECTION("1/|x| is not in L^N") {
    const auto f = preset_inverse_radius(3, 1.0, 1.0);
    CHECK(std::isinf(f.lq_norm(3.0)));
  }
  SECTION("plateau, q = N: C_N (1 + N log beta), cross-checked by quadrature") {
    const int dim = 4;
    const double beta = 1.5;
    const auto f = preset_plateau(dim, 1.0, beta);
    const double c_n = ball_volume(dim);
    const double expected = std::pow(c_n * (1.0 + dim * std::log(beta)), 1.0 / dim);
    CHECK(f.lq_norm(dim) == Catch::Approx(expected).epsilon(1e-13));
    const double oracle = testsupport::radial_integral_oracle(
        dim, 1.0, [&](double r) { return std::pow(f.eval(r), dim); });
    CHECK(f.lq_norm(dim) == Catch::Approx(std::pow(oracle, 1.0 / dim)).epsilon(1e-8));
  }
  SECTION("sampled quadrature converges for an integrable singularity") {
    const auto f = preset_inverse_radius(3, 1.0, 1.0);
    const auto coarse = f.sample(radial_quadrature(3, 1.0, 500, 1e-6));
    const auto fine = f.sample(radial_quadrature(3, 1.0, 8000, 1e-8));
    const double exact = std::sqrt(4.0 * kPi);
    CHECK(std::abs(lq_norm(fine, 2.0) - exact) < std::abs(lq_norm(coarse, 2.0) - exact));
    CHECK(lq_norm(fine, 2.0) == Catch::Approx(exact).epsilon(1e-5));
  }
  SECTION("q < 1 rejected") {
    const auto f = preset_constant(2, 1.0, 1.0);
    const auto sampled = f.sample(radial_quadrature(2, 1.0, 10));
    CHECK_THROWS_AS(lq_norm(sampled, 0.5), ValidationError);
  }
}

TEST_CASE("equimeasurability: the rearrangement has the same distribution") {
  std::mt19937_64 rng(20240901);
  for (int trial = 0; trial < 20; ++trial) {
    const auto profile = testsupport::random_poly(rng, 1.0);
    const auto quad = radial_quadrature(3, 1.0, 300);
    SampledField f;
    f.dim = 3;
    f.coord_stride = 1;
    f.coords = quad.sample_r;
    f.weights = quad.weight;
    for (double r : quad.sample_r) f.values.push_back(profile.eval(r));
    const auto re = decreasing_rearrangement(f);
    std::uniform_real_distribution<double> level(0.0, 3.0);
    for (int j = 0; j < 10; ++j) {
      const double s = level(rng);
      CHECK(re.distribution(s) == Catch::Approx(distribution_function(f, s)).margin(1e-12));
    }
  }
}

TEST_CASE("rearrangement is monotone: f <= g pointwise implies f* <= g*") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto quad = radial_quadrature(2, 1.0, 400);
  for (int trial = 0; trial < 20; ++trial) {
    SampledField f, g;
    f.dim = g.dim = 2;
    f.coord_stride = g.coord_stride = 1;
    f.coords = g.coords = quad.sample_r;
    f.weights = g.weights = quad.weight;
    for (std::size_t i = 0; i < quad.size(); ++i) {
      const double a = unit(rng);
      f.values.push_back(a);
      g.values.push_back(a + unit(rng));
    }
    const auto rf = decreasing_rearrangement(f);
    const auto rg = decreasing_rearrangement(g);
    for (double t : {0.01, 0.3, 1.0, 2.0, 3.0})
      CHECK(rf.eval(t) <= rg.eval(t) + 1e-12);
  }
}

TEST_CASE("Hardy-Littlewood inequality on random nonnegative pairs") {
  std::mt19937_64 rng(123456);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto quad = radial_quadrature(3, 1.0, 257);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    SampledField f, g;
    f.dim = g.dim = 3;
    f.coord_stride = g.coord_stride = 1;
    f.coords = g.coords = quad.sample_r;
    f.weights = g.weights = quad.weight;
    for (std::size_t i = 0; i < quad.size(); ++i) {
      f.values.push_back(unit(rng));
      g.values.push_back(unit(rng));
    }
    double lhs = 0.0;
    for (std::size_t i = 0; i < quad.size(); ++i)
      lhs += quad.weight[i] * f.values[i] * g.values[i];
    // ∫ f* g* over the merged slot partition of both step functions
    const auto rf = decreasing_rearrangement(f);
    const auto rg = decreasing_rearrangement(g);
    double rhs = 0.0, t = 0.0;
    std::size_t i = 0, j = 0;
    while (i < rf.size() && j < rg.size()) {
      const double next = std::min(rf.t_edge[i], rg.t_edge[j]);
      rhs += (next - t) * rf.value[i] * rg.value[j];
      t = next;
      if (rf.t_edge[i] <= next + 0.0) ++i;
      if (j < rg.size() && rg.t_edge[j] <= next) ++j;
    }
    if (lhs > rhs * (1.0 + 1e-8)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("Lorentz Hoelder inequality on random smooth pairs") {
  std::mt19937_64 rng(987654);
  const int dim = 3;
  const auto quad = radial_quadrature(dim, 1.0, 2000);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto pf = testsupport::random_poly(rng, 1.0);
    const auto pg = testsupport::random_poly(rng, 1.0);
    SampledField f, g;
    f.dim = g.dim = dim;
    f.coord_stride = g.coord_stride = 1;
    f.coords = g.coords = quad.sample_r;
    f.weights = g.weights = quad.weight;
    for (double r : quad.sample_r) {
      f.values.push_back(pf.eval(r));
      g.values.push_back(pg.eval(r));
    }
    double prod = 0.0;
    for (std::size_t i = 0; i < quad.size(); ++i)
      prod += quad.weight[i] * f.values[i] * g.values[i];
    const double nf = lorentz_weak_norm(f, dim);
    const double conj = dim / (dim - 1.0);
    const double ng = lorentz_l1_norm(decreasing_rearrangement(g), conj);
    if (std::abs(prod) > nf * ng * (1.0 + 1e-6)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("Hardy inequality check") {
  SECTION("u == 0 gives (0, 0)") {
    const auto quad = radial_quadrature(3, 1.0, 100);
    std::vector<double> zero(quad.size(), 0.0);
    const auto [lhs, rhs] = hardy_check(quad, zero, zero, 2.0);
    CHECK(lhs == 0.0);
    CHECK(rhs == 0.0);
  }
  SECTION("u = 1 - |x| on B_1 in R^3, p = 2") {
    const auto quad = radial_quadrature(3, 1.0, 20000, 1e-6);
    std::vector<double> u, du;
    for (double r : quad.sample_r) {
      u.push_back(1.0 - r);
      du.push_back(-1.0);
    }
    const auto [lhs, rhs] = hardy_check(quad, u, du, 2.0);
    CHECK(lhs == Catch::Approx(4.0 * kPi / 3.0).epsilon(1e-5));
    CHECK(rhs == Catch::Approx(16.0 * kPi / 3.0).epsilon(1e-10));
    CHECK(lhs < rhs);
  }
  SECTION("p outside (1, N) rejected") {
    const auto quad = radial_quadrature(3, 1.0, 10);
    std::vector<double> zero(quad.size(), 0.0);
    CHECK_THROWS_AS(hardy_check(quad, zero, zero, 3.0), ValidationError);
    CHECK_THROWS_AS(hardy_check(quad, zero, zero, 1.0), ValidationError);
  }
  SECTION("random smooth fields never violate the inequality") {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> pexp(1.1, 2.9);
    const auto quad = radial_quadrature(3, 1.0, 4000, 1e-8);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto poly = testsupport::random_poly(rng, 1.0);
      std::vector<double> u, du;
      for (double r : quad.sample_r) {
        u.push_back((1.0 - r) * poly.eval(r));
        du.push_back(-poly.eval(r) + (1.0 - r) * poly.derivative(r));
      }
      const auto [lhs, rhs] = hardy_check(quad, u, du, pexp(rng));
      if (lhs > rhs * (1.0 + 1e-6)) ++violations;
    }
    CHECK(violations == 0);
  }
}
