#ifndef ONELAP_RADIAL_GRID_HPP_
#define ONELAP_RADIAL_GRID_HPP_

#include <cmath>
#include <vector>

#include "onelap/constants.hpp"
#include "onelap/errors.hpp"

namespace onelap {

/// One-dimensional quadrature over the ball B_R(0) in R^N for radial
/// integrands: spherical shells with geometric edges refined toward the
/// origin.  The sample radius of each shell sits at the measure midpoint
/// ((lo^N + hi^N)/2)^{1/N}, i.e. the rule is the midpoint rule in the
/// rearrangement variable t = C_N r^N.
struct RadialQuadrature {
  int dim = 0;
  double radius = 0.0;
  std::vector<double> edge;      // shell edges, ascending; edge.front() >= 0
  std::vector<double> sample_r;  // one per shell
  std::vector<double> weight;    // shell volume
  double total_weight = 0.0;

  std::size_t size() const { return sample_r.size(); }
};

/// Geometric shell grid on [r_inner, R] with `shells` cells.  When
/// `include_core` is set, one extra shell [0, r_inner] closes the ball, so
/// the weights sum to |B_R| exactly; leave it off for data with a
/// non-integrable value at the origin (the measure of the omitted core is
/// r_inner^N C_N).
inline RadialQuadrature radial_quadrature(int dim, double radius, int shells,
                                          double r_inner_rel = 1e-3,
                                          bool include_core = true) {
  require(dim >= 1, "radial_quadrature: dim >= 1");
  require(radius > 0.0, "radial_quadrature: radius > 0");
  require(shells >= 1, "radial_quadrature: need at least one shell");
  require(r_inner_rel > 0.0 && r_inner_rel < 1.0, "radial_quadrature: 0 < r_inner_rel < 1");

  RadialQuadrature q;
  q.dim = dim;
  q.radius = radius;
  const double r_inner = radius * r_inner_rel;
  const double ratio = std::pow(1.0 / r_inner_rel, 1.0 / shells);

  if (include_core) q.edge.push_back(0.0);
  for (int j = 0; j <= shells; ++j) q.edge.push_back(r_inner * std::pow(ratio, j));
  q.edge.back() = radius;  // kill accumulated rounding

  const double c_n = ball_volume(dim);
  for (std::size_t j = 0; j + 1 < q.edge.size(); ++j) {
    const double lo = q.edge[j], hi = q.edge[j + 1];
    const double lo_n = std::pow(lo, dim), hi_n = std::pow(hi, dim);
    q.sample_r.push_back(std::pow(0.5 * (lo_n + hi_n), 1.0 / dim));
    q.weight.push_back(c_n * (hi_n - lo_n));
    q.total_weight += q.weight.back();
  }
  return q;
}

}  // namespace onelap

#endif
