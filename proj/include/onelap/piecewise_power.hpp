#ifndef ONELAP_PIECEWISE_POWER_HPP_
#define ONELAP_PIECEWISE_POWER_HPP_

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "onelap/errors.hpp"

namespace onelap {

/// One monomial c * r^e * (log r)^m.  Log powers appear only through
/// integration of 1/r terms, so m stays tiny.
struct PowerTerm {
  double coef = 0.0;
  double exponent = 0.0;
  int logpow = 0;

  double eval(double r) const {
    if (coef == 0.0) return 0.0;
    if (r == 0.0) {
      if (exponent > 0.0) return 0.0;
      if (exponent == 0.0 && logpow == 0) return coef;
      const double sign = (logpow % 2 == 1) ? -1.0 : 1.0;
      return coef * sign * std::numeric_limits<double>::infinity();
    }
    double v = coef * std::pow(r, exponent);
    for (int i = 0; i < logpow; ++i) v *= std::log(r);
    return v;
  }
};

/// Sum of power terms on a half-open interval [lo, hi).
struct PowerSegment {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<PowerTerm> terms;

  double eval(double r) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.eval(r);
    return s;
  }
};

namespace detail {

// Antiderivative of a single term as a sum of terms.
// d/dr [ r^{e+1} (log r)^m / (e+1) ] = r^e (log r)^m + m/(e+1) r^e (log r)^{m-1}
inline void antiderivative_term(const PowerTerm& t, std::vector<PowerTerm>& out) {
  if (t.coef == 0.0) return;
  if (t.exponent == -1.0) {
    // ∫ r^{-1} (log r)^m = (log r)^{m+1} / (m+1)
    out.push_back({t.coef / (t.logpow + 1), 0.0, t.logpow + 1});
    return;
  }
  // integrate by parts down the log power
  PowerTerm cur = t;
  double sign = 1.0;
  while (true) {
    out.push_back({sign * cur.coef / (cur.exponent + 1.0), cur.exponent + 1.0, cur.logpow});
    if (cur.logpow == 0) break;
    cur.coef = cur.coef * cur.logpow / (cur.exponent + 1.0);
    cur.logpow -= 1;
    sign = -sign;
  }
}

}  // namespace detail

/// Piecewise sums of power terms on [0, R], closed under the operations the
/// radial reduction needs: multiply by r^k, integrate from 0, differentiate.
/// Segment breakpoints are shared by all derived objects, which keeps kinks
/// (e.g. a plateau edge) aligned across f, v, w.
class PiecewisePower {
public:
  std::vector<PowerSegment> segments;

  PiecewisePower() = default;
  explicit PiecewisePower(std::vector<PowerSegment> segs) : segments(std::move(segs)) {}

  /// Single term c * r^e on [0, hi).
  static PiecewisePower monomial(double coef, double exponent, double hi) {
    PiecewisePower f;
    f.segments.push_back({0.0, hi, {{coef, exponent, 0}}});
    return f;
  }

  double domain_end() const { return segments.empty() ? 0.0 : segments.back().hi; }

  double eval(double r) const {
    for (const auto& s : segments)
      if (r < s.hi || &s == &segments.back()) return s.eval(r);
    return 0.0;
  }

  PiecewisePower scaled(double c) const {
    PiecewisePower g = *this;
    for (auto& s : g.segments)
      for (auto& t : s.terms) t.coef *= c;
    return g;
  }

  PiecewisePower times_power(double k) const {
    PiecewisePower g = *this;
    for (auto& s : g.segments)
      for (auto& t : s.terms) t.exponent += k;
    return g;
  }

  PiecewisePower derivative() const {
    PiecewisePower g;
    for (const auto& s : segments) {
      PowerSegment d{s.lo, s.hi, {}};
      for (const auto& t : s.terms) {
        if (t.coef == 0.0) continue;
        if (t.exponent != 0.0) d.terms.push_back({t.coef * t.exponent, t.exponent - 1.0, t.logpow});
        if (t.logpow > 0) d.terms.push_back({t.coef * t.logpow, t.exponent - 1.0, t.logpow - 1});
      }
      g.segments.push_back(std::move(d));
    }
    return g;
  }

  /// True when every segment is a single pure power (no logs): the class of
  /// functions closed under |.|^q.
  bool single_term_per_segment() const {
    for (const auto& s : segments)
      if (s.terms.size() != 1 || s.terms[0].logpow != 0) return false;
    return true;
  }

  /// |f|^q, available only for single-term log-free segments.
  std::optional<PiecewisePower> abs_pow(double q) const {
    if (!single_term_per_segment()) return std::nullopt;
    PiecewisePower g = *this;
    for (auto& s : g.segments) {
      auto& t = s.terms[0];
      t.coef = std::pow(std::abs(t.coef), q);
      t.exponent *= q;
    }
    return g;
  }

  /// F(r) = ∫_0^r f(s) ds, continuous across segments.
  /// Throws NumericalError if the integral diverges at the origin.
  PiecewisePower antiderivative_from_zero() const {
    PiecewisePower g;
    double offset = 0.0;
    bool first = true;
    for (const auto& s : segments) {
      PowerSegment a{s.lo, s.hi, {}};
      for (const auto& t : s.terms) detail::antiderivative_term(t, a.terms);
      if (first) {
        for (const auto& t : a.terms)
          if (t.coef != 0.0 && (t.exponent < 0.0 || (t.exponent == 0.0 && t.logpow > 0)))
            throw NumericalError("piecewise power: integral diverges at the origin");
        first = false;
      } else {
        double at_lo = 0.0;
        for (const auto& t : a.terms) at_lo += t.eval(s.lo);
        a.terms.push_back({offset - at_lo, 0.0, 0});
      }
      double at_hi = 0.0;
      for (const auto& t : a.terms) at_hi += t.eval(s.hi);
      offset = at_hi;
      g.segments.push_back(std::move(a));
    }
    return g;
  }

  /// ∫_a^b f(s) ds by per-segment closed forms. Requires 0 <= a <= b and
  /// integrability on (a, b); segments below a are skipped, so a singular
  /// origin is fine as long as a > 0.
  double integral(double a, double b) const {
    double total = 0.0;
    for (const auto& s : segments) {
      const double lo = std::max(a, s.lo);
      const double hi = std::min(b, s.hi);
      if (lo >= hi) continue;
      std::vector<PowerTerm> anti;
      for (const auto& t : s.terms) detail::antiderivative_term(t, anti);
      for (const auto& t : anti) total += t.eval(hi) - t.eval(lo);
    }
    return total;
  }
};

}  // namespace onelap

#endif
