#ifndef ONELAP_ENERGY_BOUND_HPP_
#define ONELAP_ENERGY_BOUND_HPP_

#include <cmath>
#include <limits>

#include "onelap/constants.hpp"
#include "onelap/errors.hpp"
#include "onelap/threshold.hpp"

namespace onelap {

struct EnergyBound {
  double lhs = 0.0;  // measured \int |grad u_p|^p
  double rhs = 0.0;  // a priori bound
  bool ok = false;
};

/// A priori p-energy bound
///   \int |grad u_p|^p <= ( X / (1 - gamma_p ||F||_{N,inf}) )^{p/(p-1)} |Omega|
/// with X = S_N ||f||_{L^N} when the datum is in L^N and the Lorentz variant
/// X = gamma_1 ||f||_{L^{N,inf}} otherwise.  For the Hardy drift
/// lambda x/|x|^2 on a ball, ||F||_{N,inf} = |lambda| C_N^{1/N}, so
/// gamma_p ||F|| = |lambda| p/(N-p).  Applicable only up to the critical
/// threshold; beyond it throws bound-not-applicable.
inline EnergyBound energy_and_bound(int dim, double p, double energy, double omega,
                                    const NormBundle& f_norms, double drift_weak_norm,
                                    double regime_tol = 1e-10, double check_tol = 1e-9) {
  require(dim >= 2 && p > 1.0 && p < dim, "energy_and_bound: need N >= 2, p in (1, N)");
  const auto c = sharp_constants(dim);
  const double gp_drift = c.gamma_p(p) * drift_weak_norm;
  const bool ln_route = std::isfinite(f_norms.ln);
  const double numerator = ln_route ? c.s_n * f_norms.ln : c.gamma1 * f_norms.weak;
  const double theta = numerator + c.gamma1 * drift_weak_norm;
  if (theta > 1.0 + regime_tol)
    throw ValidationError("energy_and_bound: bound-not-applicable (supercritical data)");
  if (gp_drift >= 1.0)
    throw ValidationError("energy_and_bound: bound-not-applicable (gamma_p ||F|| >= 1)");

  EnergyBound b;
  b.lhs = energy;
  b.rhs = numerator == 0.0
              ? 0.0
              : std::pow(numerator / (1.0 - gp_drift), p / (p - 1.0)) * omega;
  b.ok = b.lhs <= b.rhs * (1.0 + check_tol) + std::numeric_limits<double>::min();
  return b;
}

/// Hardy-drift convenience: ||  |lambda| / |x|  ||_{L^{N,infty}(B_R)}.
inline double hardy_drift_weak_norm(int dim, double lambda) {
  return std::abs(lambda) * std::pow(ball_volume(dim), 1.0 / dim);
}

}  // namespace onelap

#endif
