#ifndef ONELAP_THRESHOLD_HPP_
#define ONELAP_THRESHOLD_HPP_

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "onelap/constants.hpp"
#include "onelap/errors.hpp"
#include "onelap/fields.hpp"
#include "onelap/rearrangement.hpp"

namespace onelap {

enum class Regime { Subcritical, Critical, Supercritical };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Subcritical: return "subcritical";
    case Regime::Critical: return "critical";
    default: return "supercritical";
  }
}

/// regime(theta): below 1 - tol, within tol of 1, or above.  Critical is a
/// measure-zero set analytically but a band numerically.
inline Regime classify_theta(double theta, double tol) {
  if (std::abs(theta - 1.0) <= tol) return Regime::Critical;
  return theta < 1.0 ? Regime::Subcritical : Regime::Supercritical;
}

/// The two norms of a datum that enter the thresholds.
struct NormBundle {
  double ln = 0.0;    // ||f||_{L^N}, may be +inf
  double weak = 0.0;  // ||f||_{L^{N,infty}}
};

inline NormBundle norm_bundle(const AnalyticRadialField& f) {
  return {f.lq_norm(f.dim), f.lorentz_weak_norm()};
}

inline NormBundle norm_bundle(const SampledField& f) {
  const auto r = decreasing_rearrangement(f);
  return {lq_norm(f, f.dim), lorentz_weak_norm(r, f.dim)};
}

struct ThresholdReport {
  int dim = 0;
  double lambda = 0.0;
  double tol = 1e-10;
  NormBundle f;
  std::optional<double> drift_weak_norm;  // ||  |F|  ||_{L^{N,infty}} for generic drift

  double theta_ln = 0.0;       // S_N ||f||_N + |lambda|/(N-1)
  double theta_lorentz = 0.0;  // gamma_1 ||f||_{N,inf} + |lambda|/(N-1)
  double theta_drift = 0.0;    // gamma_1 || |F| ||_{N,inf} + S_N ||f||_N
  Regime regime_ln = Regime::Subcritical;
  Regime regime_lorentz = Regime::Subcritical;
  Regime regime_drift = Regime::Subcritical;
};

/// Computes all three critical quantities.  For a Hardy drift lambda x/|x|^2
/// on a ball, gamma_1 || |F| ||_{N,infty} = |lambda|/(N-1), so theta_drift
/// coincides with theta_ln; passing an explicit drift magnitude bundle
/// overrides that.
inline ThresholdReport threshold_classify(int dim, double lambda, const NormBundle& f,
                                          std::optional<double> drift_weak_norm = std::nullopt,
                                          double tol = 1e-10) {
  require(dim >= 2, "threshold_classify: dim >= 2");
  if (!drift_weak_norm)
    require(std::abs(lambda) < dim - 1, "threshold_classify: out-of-range-lambda, need |lambda| < N-1");

  const auto c = sharp_constants(dim);
  ThresholdReport rep;
  rep.dim = dim;
  rep.lambda = lambda;
  rep.tol = tol;
  rep.f = f;
  rep.drift_weak_norm = drift_weak_norm;

  const double hardy_part = std::abs(lambda) / (dim - 1);
  rep.theta_ln = c.s_n * f.ln + hardy_part;
  rep.theta_lorentz = c.gamma1 * f.weak + hardy_part;
  rep.theta_drift = drift_weak_norm ? c.gamma1 * (*drift_weak_norm) + c.s_n * f.ln
                                    : rep.theta_ln;
  rep.regime_ln = classify_theta(rep.theta_ln, tol);
  rep.regime_lorentz = classify_theta(rep.theta_lorentz, tol);
  rep.regime_drift = classify_theta(rep.theta_drift, tol);
  return rep;
}

}  // namespace onelap

#endif
