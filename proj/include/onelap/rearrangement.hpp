#ifndef ONELAP_REARRANGEMENT_HPP_
#define ONELAP_REARRANGEMENT_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "onelap/constants.hpp"
#include "onelap/errors.hpp"
#include "onelap/fields.hpp"

namespace onelap {

/// alpha_f(s) = measure of { |f| > s } under the field's quadrature weights.
inline double distribution_function(const SampledField& f, double s) {
  require(s >= 0.0, "distribution_function: invalid-level, s must be >= 0");
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f.values[i]) > s) m += f.weights[i];
  return m;
}

/// The nonincreasing rearrangement of a sampled field: sample values sorted
/// by decreasing magnitude (ties broken by sample index), each occupying a
/// measure slot of its own quadrature weight on (0, |Omega|).
struct Rearrangement {
  std::vector<double> value;   // |f| sorted nonincreasing
  std::vector<double> weight;  // slot widths in sorted order
  std::vector<double> t_edge;  // cumulative right edges, t_edge[i] = sum_{j<=i} weight[j]
  double total_measure = 0.0;

  std::size_t size() const { return value.size(); }

  /// Step evaluation f*(t); t beyond the last edge returns 0.
  double eval(double t) const {
    require(t >= 0.0, "rearrangement eval: t >= 0");
    auto it = std::lower_bound(t_edge.begin(), t_edge.end(), t);
    if (it == t_edge.end()) return 0.0;
    return value[static_cast<std::size_t>(it - t_edge.begin())];
  }

  /// Distribution function of the step rearrangement itself.
  double distribution(double s) const {
    double m = 0.0;
    for (std::size_t i = 0; i < size() && value[i] > s; ++i) m += weight[i];
    return m;
  }
};

inline Rearrangement decreasing_rearrangement(const SampledField& f) {
  require(f.size() > 0, "decreasing_rearrangement: empty grid");
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(f.values[a]) > std::abs(f.values[b]);
  });
  Rearrangement r;
  r.value.reserve(f.size());
  r.weight.reserve(f.size());
  r.t_edge.reserve(f.size());
  double acc = 0.0;
  for (std::size_t i : order) {
    r.value.push_back(std::abs(f.values[i]));
    r.weight.push_back(f.weights[i]);
    acc += f.weights[i];
    r.t_edge.push_back(acc);
  }
  r.total_measure = acc;
  return r;
}

/// ||f||_{L^{N,infty}} of the empirical rearrangement: sup_t t^{1/N} f*(t),
/// attained at a slot's right edge.
inline double lorentz_weak_norm(const Rearrangement& r, int dim) {
  require(dim >= 1, "lorentz_weak_norm: dim >= 1");
  double best = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    best = std::max(best, std::pow(r.t_edge[i], 1.0 / dim) * r.value[i]);
  return best;
}

inline double lorentz_weak_norm(const SampledField& f, int dim) {
  return lorentz_weak_norm(decreasing_rearrangement(f), dim);
}

/// L^{p,1} norm: ∫_0^infty t^{1/p} f*(t) dt/t, exact on the step function.
inline double lorentz_l1_norm(const Rearrangement& r, double p) {
  require(p >= 1.0, "lorentz_l1_norm: p >= 1");
  double total = 0.0;
  double t_lo = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double t_hi = r.t_edge[i];
    total += r.value[i] * p * (std::pow(t_hi, 1.0 / p) - std::pow(t_lo, 1.0 / p));
    t_lo = t_hi;
  }
  return total;
}

/// Plain weighted L^q norm (quadrature).
inline double lq_norm(const SampledField& f, double q) {
  require(q >= 1.0, "lq_norm: q >= 1");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    s += f.weights[i] * std::pow(std::abs(f.values[i]), q);
  return std::pow(s, 1.0 / q);
}

/// Both sides of the Hardy inequality for a radial function vanishing at the
/// outer boundary: lhs = ∫ |u|^p / |x|^p, rhs = ((N-p)/p)^{-p} ∫ |grad u|^p.
/// The caller asserts lhs <= rhs (up to quadrature tolerance).
inline std::pair<double, double> hardy_check(const RadialQuadrature& quad,
                                             const std::vector<double>& u,
                                             const std::vector<double>& du, double p) {
  require(p > 1.0 && p < quad.dim, "hardy_check: p must lie in (1, N)");
  require(u.size() == quad.size() && du.size() == quad.size(),
          "hardy_check: field sizes must match the quadrature");
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const double r = quad.sample_r[i];
    lhs += quad.weight[i] * std::pow(std::abs(u[i]) / r, p);
    rhs += quad.weight[i] * std::pow(std::abs(du[i]), p);
  }
  const double hardy = (quad.dim - p) / p;
  return {lhs, rhs / std::pow(hardy, p)};
}

}  // namespace onelap

#endif
