#ifndef ONELAP_EXTRAPOLATION_HPP_
#define ONELAP_EXTRAPOLATION_HPP_

#include <cmath>
#include <limits>
#include <vector>

#include "onelap/errors.hpp"

namespace onelap {

/// Where a one-parameter family of values is headed as p -> 1+.
enum class PointLimit { ToZero, Finite, ToInfinity, Inconclusive };

inline const char* to_string(PointLimit k) {
  switch (k) {
    case PointLimit::ToZero: return "to_zero";
    case PointLimit::Finite: return "finite";
    case PointLimit::ToInfinity: return "to_infinity";
    default: return "inconclusive";
  }
}

/// Affine fit of log(value) against x = 1/(p-1) over the tail of a schedule.
/// The exact radial family has log u_p = log(profile) + log(alpha)/(p-1), so
/// the slope is log(alpha) and the intercept recovers the profile.
struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;  // log(value) extrapolated to the 1/(p-1) -> 0 axis
  double max_dev = 0.0;    // worst absolute deviation of the fit, log units
  bool valid = false;
};

inline LogFit log_slope_fit(const std::vector<double>& p_values,
                            const std::vector<double>& values, int window = 4) {
  require(p_values.size() == values.size(), "log_slope_fit: size mismatch");
  LogFit fit;
  const std::size_t n = p_values.size();
  if (n < 2) return fit;
  const std::size_t m = std::min<std::size_t>(window, n);
  const std::size_t first = n - m;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = first; i < n; ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) return fit;
    const double x = 1.0 / (p_values[i] - 1.0);
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = m * sxx - sx * sx;
  if (det == 0.0) return fit;
  fit.slope = (m * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;
  for (std::size_t i = first; i < n; ++i) {
    const double x = 1.0 / (p_values[i] - 1.0);
    const double y = std::log(values[i]);
    fit.max_dev = std::max(fit.max_dev, std::abs(fit.intercept + fit.slope * x - y));
  }
  fit.valid = true;
  return fit;
}

struct LimitClassifier {
  double slope_tol = 0.05;    // |log-slope| band for "finite"
  double blow_up_value = 1e12;
  double zero_floor = 1e-250;
  double fit_dev_tol = 0.5;   // beyond this the trend is not a power law
};

struct PointClassification {
  PointLimit kind = PointLimit::Inconclusive;
  double value = std::numeric_limits<double>::quiet_NaN();  // finite limits only
  double slope = 0.0;
};

/// Classifies one sequence u_{p_k} by the fitted log-slope; the finite-limit
/// value is the extrapolant exp(intercept).
inline PointClassification classify_limit(const std::vector<double>& p_values,
                                          const std::vector<double>& values,
                                          const LimitClassifier& opt = {}, int window = 4) {
  PointClassification out;
  const std::size_t n = values.size();
  const std::size_t m = std::min<std::size_t>(window, n);
  bool any_blow = false, all_tiny = m > 0;
  for (std::size_t i = n - m; i < n; ++i) {
    const double v = std::abs(values[i]);
    if (!std::isfinite(values[i]) || v > opt.blow_up_value) any_blow = true;
    if (v > opt.zero_floor) all_tiny = false;
  }
  if (any_blow) {
    out.kind = PointLimit::ToInfinity;
    return out;
  }
  if (all_tiny) {
    out.kind = PointLimit::ToZero;
    out.value = 0.0;
    return out;
  }
  std::vector<double> mags(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) mags[i] = std::abs(values[i]);
  const LogFit fit = log_slope_fit(p_values, mags, window);
  if (!fit.valid) return out;
  out.slope = fit.slope;
  if (fit.max_dev > opt.fit_dev_tol) return out;  // oscillatory / non-geometric
  if (fit.slope < -opt.slope_tol) {
    out.kind = PointLimit::ToZero;
    out.value = 0.0;
  } else if (fit.slope > opt.slope_tol) {
    out.kind = PointLimit::ToInfinity;
  } else {
    out.kind = PointLimit::Finite;
    const double sign = values.back() < 0.0 ? -1.0 : 1.0;
    out.value = sign * std::exp(fit.intercept);
  }
  return out;
}

}  // namespace onelap

#endif
