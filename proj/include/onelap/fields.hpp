#ifndef ONELAP_FIELDS_HPP_
#define ONELAP_FIELDS_HPP_

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "onelap/constants.hpp"
#include "onelap/errors.hpp"
#include "onelap/piecewise_power.hpp"
#include "onelap/radial_grid.hpp"

namespace onelap {

/// A scalar field known through point samples with quadrature weights.
/// Coordinates are stored with stride `coord_stride`: full points for mesh
/// fields, the radius alone (stride 1) for radial samples.  The measure of
/// the domain is by definition the sum of the weights.
struct SampledField {
  int dim = 0;
  int coord_stride = 0;
  std::vector<double> coords;
  std::vector<double> values;
  std::vector<double> weights;

  std::size_t size() const { return values.size(); }

  double domain_measure() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }

  double radius(std::size_t i) const {
    if (coord_stride == 1) return coords[i];
    double s = 0.0;
    for (int d = 0; d < coord_stride; ++d) {
      const double c = coords[i * coord_stride + d];
      s += c * c;
    }
    return std::sqrt(s);
  }
};

/// Radial datum with a closed-form nonincreasing profile.  Tagged data keep
/// their piecewise-power form so rearrangements, Lorentz norms and the flux
/// reduction stay exact; `sample` drops to the generic quadrature
/// representation.
struct AnalyticRadialField {
  int dim = 0;
  double radius = 0.0;
  PiecewisePower profile;
  bool nonincreasing = true;
  std::string tag;

  double eval(double r) const { return profile.eval(r); }

  double c_n() const { return ball_volume(dim); }
  double domain_measure() const { return c_n() * std::pow(radius, dim); }

  /// alpha_f(s) = |{ |f| > s }| for a nonincreasing profile: the superlevel
  /// set is the ball of radius sup{ r : f(r) > s }, located by bisection.
  double distribution(double s) const {
    require(s >= 0.0, "distribution: level must be >= 0");
    require(nonincreasing, "distribution: closed form needs a monotone profile");
    if (profile.eval(radius) > s) return domain_measure();
    // f(0+) may be +inf; probe just inside.
    double lo = radius * 1e-300;
    if (!(profile.eval(lo) > s)) return 0.0;
    double hi = radius;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (profile.eval(mid) > s ? lo : hi) = mid;
    }
    return c_n() * std::pow(0.5 * (lo + hi), dim);
  }

  /// f*(t) = f((t / C_N)^{1/N}) for nonincreasing radial data.
  double rearrangement(double t) const {
    require(nonincreasing, "rearrangement: closed form needs a monotone profile");
    require(t > 0.0 && t <= domain_measure(), "rearrangement: t outside (0, |Omega|]");
    return profile.eval(std::pow(t / c_n(), 1.0 / dim));
  }

  /// sup_t t^{1/N} f*(t) = C_N^{1/N} sup_r r f(r).  Exact for pure-power
  /// segments (the sup is attained at a segment endpoint); otherwise a dense
  /// scan refined by golden-section search.
  double lorentz_weak_norm() const {
    require(nonincreasing, "lorentz_weak_norm: closed form needs a monotone profile");
    const PiecewisePower rf = profile.times_power(1.0);
    double best = 0.0;
    for (const auto& seg : rf.segments) {
      if (seg.terms.size() == 1 && seg.terms[0].logpow == 0) {
        const double lo = std::max(seg.lo, 1e-300);
        best = std::max(best, std::abs(seg.eval(lo)));
        best = std::max(best, std::abs(seg.eval(seg.hi)));
      } else {
        const int scan = 4096;
        for (int i = 0; i <= scan; ++i) {
          const double r = seg.lo + (seg.hi - seg.lo) * i / scan;
          if (r > 0.0) best = std::max(best, std::abs(seg.eval(r)));
        }
      }
    }
    return std::pow(c_n(), 1.0 / dim) * best;
  }

  /// (∫_Omega |f|^q)^{1/q} by symbolic radial integration; +inf when the
  /// singularity is not q-integrable.  Falls back to fine quadrature when
  /// |f|^q has no closed form.
  double lq_norm(double q) const {
    require(q >= 1.0, "lq_norm: q >= 1");
    const auto powq = profile.abs_pow(q);
    double integral;
    if (powq) {
      integral = dim * c_n() * powq->times_power(dim - 1.0).integral(0.0, radius);
    } else {
      const auto quad = radial_quadrature(dim, radius, 20000, 1e-8, true);
      integral = 0.0;
      for (std::size_t i = 0; i < quad.size(); ++i)
        integral += quad.weight[i] * std::pow(std::abs(profile.eval(quad.sample_r[i])), q);
    }
    return std::pow(integral, 1.0 / q);
  }

  SampledField sample(const RadialQuadrature& quad) const {
    SampledField f;
    f.dim = dim;
    f.coord_stride = 1;
    f.coords = quad.sample_r;
    f.weights = quad.weight;
    f.values.reserve(quad.size());
    for (double r : quad.sample_r) f.values.push_back(profile.eval(r));
    return f;
  }
};

/// f(x) = alpha / |x| on B_R: the canonical L^{N,infty} datum.
inline AnalyticRadialField preset_inverse_radius(int dim, double radius, double alpha) {
  require(dim >= 2 && radius > 0.0 && alpha >= 0.0, "preset_inverse_radius: bad parameters");
  AnalyticRadialField f;
  f.dim = dim;
  f.radius = radius;
  f.profile = PiecewisePower::monomial(alpha, -1.0, radius);
  f.tag = "inverse_radius";
  return f;
}

inline AnalyticRadialField preset_constant(int dim, double radius, double value) {
  require(dim >= 1 && radius > 0.0 && value >= 0.0, "preset_constant: bad parameters");
  AnalyticRadialField f;
  f.dim = dim;
  f.radius = radius;
  f.profile = PiecewisePower::monomial(value, 0.0, radius);
  f.tag = "constant";
  return f;
}

/// Plateau datum: beta/R on |x| <= R/beta, then 1/|x| out to R.  Its weak
/// L^N norm equals C_N^{1/N} (the same as 1/|x|) while the L^N norm stays
/// finite: ∫|f|^N = C_N (1 + N log beta).
inline AnalyticRadialField preset_plateau(int dim, double radius, double beta) {
  require(dim >= 2 && radius > 0.0 && beta > 1.0, "preset_plateau: need beta > 1");
  AnalyticRadialField f;
  f.dim = dim;
  f.radius = radius;
  const double split = radius / beta;
  f.profile.segments.push_back({0.0, split, {{beta / radius, 0.0, 0}}});
  f.profile.segments.push_back({split, radius, {{1.0, -1.0, 0}}});
  f.tag = "plateau_7_2";
  return f;
}

}  // namespace onelap

#endif
