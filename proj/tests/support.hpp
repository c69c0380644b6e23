// Shared helpers for the test suites: independent quadrature oracles and
// random field generators.  Everything here is deliberately naive; the point
// is to stay independent of the library's own integration paths.
#ifndef ONELAP_TESTS_SUPPORT_HPP_
#define ONELAP_TESTS_SUPPORT_HPP_

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "onelap/constants.hpp"

namespace testsupport {

// ∫_Omega g(|x|) dx over B_R in R^N by composite Simpson on a geometric
// subdivision refined toward the origin.  Independent oracle for the
// library's measure-midpoint radial quadrature.
inline double radial_integral_oracle(int dim, double radius,
                                     const std::function<double(double)>& g,
                                     int panels = 40000, double inner_rel = 1e-10) {
  const double surf = dim * onelap::ball_volume(dim);
  const double r0 = radius * inner_rel;
  const double ratio = std::pow(1.0 / inner_rel, 1.0 / panels);
  double acc = 0.0;
  double lo = r0;
  auto h = [&](double r) { return g(r) * std::pow(r, dim - 1); };
  for (int i = 0; i < panels; ++i) {
    double hi = (i + 1 == panels) ? radius : lo * ratio;
    acc += (hi - lo) / 6.0 * (h(lo) + 4.0 * h(0.5 * (lo + hi)) + h(hi));
    lo = hi;
  }
  return surf * acc;
}

// Random polynomial-in-r profile, nonnegative on [0, R]: sum of a few
// c_k (r/R)^k with c_k >= 0.
struct RandomPolyProfile {
  std::vector<double> coef;
  double radius;

  double eval(double r) const {
    double s = 0.0, x = 1.0;
    for (double c : coef) {
      s += c * x;
      x *= r / radius;
    }
    return s;
  }
  double derivative(double r) const {
    double s = 0.0, x = 1.0;
    for (std::size_t k = 1; k < coef.size(); ++k) {
      s += coef[k] * k * x / radius;
      x *= r / radius;
    }
    return s;
  }
};

inline RandomPolyProfile random_poly(std::mt19937_64& rng, double radius, int degree = 4) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RandomPolyProfile p;
  p.radius = radius;
  p.coef.resize(degree + 1);
  for (auto& c : p.coef) c = unit(rng);
  return p;
}

}  // namespace testsupport

#endif
