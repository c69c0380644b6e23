#ifndef ONELAP_CONSTANTS_HPP_
#define ONELAP_CONSTANTS_HPP_

#include <cmath>

#include "onelap/errors.hpp"

namespace onelap {

inline constexpr double kPi = 3.14159265358979323846;

/// Lebesgue measure of the unit ball in R^N: pi^{N/2} / Gamma(N/2 + 1).
inline double ball_volume(int dim) {
  require(dim >= 1, "ball_volume: dimension must be >= 1");
  return std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

/// The sharp embedding and Hardy constants in dimension N that gate the
/// critical thresholds.  All derive from the unit-ball volume C_N.
struct SharpConstants {
  int dim = 0;
  double c_n = 0.0;     // |B_1(0)|
  double s_n = 0.0;     // Sobolev, 1 / (N C_N^{1/N})
  double gamma1 = 0.0;  // Lorentz-Sobolev at p = 1, 1 / ((N-1) C_N^{1/N})

  /// Sharp Lorentz-Sobolev constant p / ((N-p) C_N^{1/N}), 1 <= p < N.
  double gamma_p(double p) const {
    require(p >= 1.0 && p < dim, "gamma_p: need 1 <= p < N");
    return p / ((dim - p) * std::pow(c_n, 1.0 / dim));
  }

  /// Optimal Hardy constant (N-p)/p, 1 <= p < N.
  double hardy(double p) const {
    require(p >= 1.0 && p < dim, "hardy: need 1 <= p < N");
    return (dim - p) / p;
  }
};

inline SharpConstants sharp_constants(int dim) {
  require(dim >= 2, "sharp_constants: dimension must be >= 2");
  SharpConstants c;
  c.dim = dim;
  c.c_n = ball_volume(dim);
  const double root = std::pow(c.c_n, 1.0 / dim);
  c.s_n = 1.0 / (dim * root);
  c.gamma1 = 1.0 / ((dim - 1) * root);
  return c;
}

}  // namespace onelap

#endif
