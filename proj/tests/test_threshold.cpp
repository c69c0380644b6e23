#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "onelap/threshold.hpp"

using namespace onelap;

TEST_CASE("critical identity for the Hardy pair lambda = -(N-2), f = 1/|x|") {
  for (int dim : {3, 4, 5}) {
    const double lambda = -(dim - 2.0);
    const auto f = preset_inverse_radius(dim, 1.0, 1.0);
    const auto rep = threshold_classify(dim, lambda, norm_bundle(f));
    CHECK(std::abs(rep.theta_lorentz - 1.0) < 1e-12);
    CHECK(rep.regime_lorentz == Regime::Critical);
    // 1/|x| is not in L^N, so the L^N threshold is infinite
    CHECK(std::isinf(rep.theta_ln));
    CHECK(rep.regime_ln == Regime::Supercritical);
  }
}

TEST_CASE("critical identity from sampled fields on the graded radial grid") {
  for (int dim : {3, 4, 5}) {
    const double lambda = -(dim - 2.0);
    const auto f = preset_inverse_radius(dim, 1.0, 1.0);
    const auto sampled = f.sample(radial_quadrature(dim, 1.0, 24000, 1e-3, false));
    const auto rep = threshold_classify(dim, lambda, norm_bundle(sampled), std::nullopt, 2e-4);
    CHECK(std::abs(rep.theta_lorentz - 1.0) < 1e-4);
    CHECK(rep.regime_lorentz == Regime::Critical);
  }
}

TEST_CASE("zero data sit at theta = 0, subcritical") {
  const auto f = preset_constant(3, 1.0, 0.0);
  const auto rep = threshold_classify(3, 0.0, norm_bundle(f));
  CHECK(rep.theta_ln == 0.0);
  CHECK(rep.theta_lorentz == 0.0);
  CHECK(rep.theta_drift == 0.0);
  CHECK(rep.regime_lorentz == Regime::Subcritical);
}

TEST_CASE("scaling the datum scales the Lorentz part linearly") {
  const auto f = preset_inverse_radius(3, 1.0, 1.5);
  const auto rep = threshold_classify(3, -1.0, norm_bundle(f));
  CHECK(rep.theta_lorentz == Catch::Approx(0.5 + 0.75).epsilon(1e-12));
  CHECK(rep.regime_lorentz == Regime::Supercritical);
  // grid oracle for the same quantity
  const auto sampled = f.sample(radial_quadrature(3, 1.0, 24000, 1e-3, false));
  const auto rep_h = threshold_classify(3, -1.0, norm_bundle(sampled));
  CHECK(rep_h.theta_lorentz == Catch::Approx(1.25).epsilon(2e-4));
}

TEST_CASE("lambda out of range is rejected") {
  const auto f = preset_constant(3, 1.0, 1.0);
  CHECK_THROWS_AS(threshold_classify(3, 5.0, norm_bundle(f)), ValidationError);
  CHECK_THROWS_AS(threshold_classify(3, -2.0, norm_bundle(f)), ValidationError);
}

TEST_CASE("plateau datum: Lorentz-critical but L^N-subcritical (N = 4)") {
  const int dim = 4;
  const double lambda = -(dim - 2.0);
  const auto f = preset_plateau(dim, 1.0, 1.5);
  const auto rep = threshold_classify(dim, lambda, norm_bundle(f));
  CHECK(std::abs(rep.theta_lorentz - 1.0) < 1e-12);
  CHECK(rep.regime_lorentz == Regime::Critical);
  CHECK(rep.theta_ln < 1.0 - 1e-3);
  CHECK(rep.regime_ln == Regime::Subcritical);
}

TEST_CASE("generic drift threshold") {
  // F with | F | = 1/|x| on B_1, f constant: theta_drift uses gamma_1 and S_N
  const int dim = 3;
  const auto c = sharp_constants(dim);
  const auto fmag = preset_inverse_radius(dim, 1.0, 1.0);
  const auto f = preset_constant(dim, 1.0, 0.5);
  const auto rep =
      threshold_classify(dim, 0.0, norm_bundle(f), fmag.lorentz_weak_norm());
  const double expected =
      c.gamma1 * std::pow(ball_volume(dim), 1.0 / dim) + c.s_n * f.lq_norm(dim);
  CHECK(rep.theta_drift == Catch::Approx(expected).epsilon(1e-12));
}
