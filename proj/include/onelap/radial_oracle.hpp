#ifndef ONELAP_RADIAL_ORACLE_HPP_
#define ONELAP_RADIAL_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "onelap/certificate.hpp"
#include "onelap/constants.hpp"
#include "onelap/errors.hpp"
#include "onelap/extrapolation.hpp"
#include "onelap/fields.hpp"
#include "onelap/gauss.hpp"
#include "onelap/piecewise_power.hpp"

namespace onelap {

// Radial reduction on B_R(0): with w = |u'|^{p-2} u' and v = r^{N-1} w, the
// equation -Delta_p u = lambda |grad u|^{p-2} grad u . x/|x|^2 + f becomes
// the linear first-order ODE (r^lambda v)' = -r^{lambda+N-1} f.  The
// finite-energy branch has v(0) = 0, hence
//   v(r) = -r^{-lambda} \int_0^r s^{lambda+N-1} f(s) ds,
// and u is recovered from u(r) = \int_r^R |v(s)/s^{N-1}|^{1/(p-1)} ds.
// The homogeneous branch C r^{-lambda-N+1} is discarded: any C != 0 gives
// non-finite p-energy near the origin for p near 1.

struct RadialProblem {
  int dim = 0;
  double radius = 0.0;
  double lambda = 0.0;
  double p = 0.0;
  AnalyticRadialField f;           // analytic path (tagged profile)
  std::vector<double> f_r, f_val;  // sampled path: sorted radii and values

  bool analytic() const { return f_r.empty(); }

  double f_eval(double r) const {
    if (analytic()) return f.eval(r);
    // linear interpolation, constant extrapolation at the ends
    if (r <= f_r.front()) return f_val.front();
    if (r >= f_r.back()) return f_val.back();
    const auto it = std::upper_bound(f_r.begin(), f_r.end(), r);
    const std::size_t j = static_cast<std::size_t>(it - f_r.begin());
    const double t = (r - f_r[j - 1]) / (f_r[j] - f_r[j - 1]);
    return (1.0 - t) * f_val[j - 1] + t * f_val[j];
  }

  void validate() const {
    require(dim >= 2, "radial problem: dim >= 2");
    require(radius > 0.0, "radial problem: radius > 0");
    require(std::abs(lambda) < dim - 1, "radial problem: out-of-range-lambda");
    require(p > 1.0, "radial problem: p > 1");
    // |lambda| < (N-p)/p is needed only for the a priori energy bound, which
    // enforces it itself; the flux construction needs just lambda + N - 1 > 0.
    if (!analytic())
      require(f_r.size() == f_val.size() && f_r.size() >= 2 &&
                  std::is_sorted(f_r.begin(), f_r.end()),
              "radial problem: sampled datum must be sorted (r, value) pairs");
  }
};

struct RadialSolution {
  int dim = 0;
  double radius = 0.0;
  double lambda = 0.0;
  double p = 0.0;
  bool symbolic = false;          // closed-form piecewise-power path

  std::vector<double> r;          // grid nodes, r.front() = 0, r.back() = R
  std::vector<double> v;          // flux potential, v(0) = 0, v <= 0
  std::vector<double> w;          // v / r^{N-1}
  std::vector<double> du;         // u' = -|w|^{1/(p-1)} <= 0
  std::vector<double> u;          // nonincreasing, u(R) = 0

  std::vector<double> residual;   // strong-form residual at interior nodes
  double max_residual = 0.0;

  double energy = 0.0;            // \int |grad u|^p
  double norm_l1 = 0.0;
  double norm_linf = 0.0;

  // retained closed forms (meaningful on the analytic path)
  PiecewisePower v_pp, w_pp;
  std::optional<PiecewisePower> slope_pp;
};

/// Geometric node grid on [0, R] clustered at the origin (default ratio
/// 1.05), with the datum's segment breakpoints inserted.
inline std::vector<double> radial_grid(const RadialProblem& prob, double ratio = 1.05,
                                       double inner_rel = 1e-4) {
  std::vector<double> g;
  g.push_back(0.0);
  double rr = prob.radius * inner_rel;
  while (rr < prob.radius) {
    g.push_back(rr);
    rr *= ratio;
  }
  g.push_back(prob.radius);
  for (const auto& seg : prob.f.profile.segments)
    if (seg.lo > 0.0 && seg.lo < prob.radius) g.push_back(seg.lo);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end(),
                      [&](double a, double b) { return std::abs(a - b) < 1e-14 * prob.radius; }),
          g.end());
  return g;
}

namespace detail {

inline void reject_sign_changing(const RadialProblem& prob) {
  for (int i = 1; i <= 512; ++i) {
    const double rr = prob.radius * i / 512.0;
    if (prob.f_eval(rr) < 0.0)
      throw ValidationError("flux potential: unsupported-datum (f changes sign)");
  }
}

}  // namespace detail

/// Closed-form flux potential v(r) = -r^{-lambda} \int_0^r s^{lambda+N-1} f,
/// available on the analytic path.
inline PiecewisePower flux_potential_pp(const RadialProblem& prob) {
  prob.validate();
  require(prob.analytic(), "flux_potential_pp: analytic datum required");
  detail::reject_sign_changing(prob);
  const PiecewisePower g = prob.f.profile.times_power(prob.lambda + prob.dim - 1.0);
  return g.antiderivative_from_zero().times_power(-prob.lambda).scaled(-1.0);
}

/// Flux potential sampled on a grid.  Analytic data evaluate the closed form;
/// sampled data use cumulative trapezoid quadrature of s^{lambda+N-1} f(s).
inline std::vector<double> flux_potential(const RadialProblem& prob,
                                          const std::vector<double>& grid) {
  std::vector<double> v(grid.size(), 0.0);
  if (prob.analytic()) {
    const PiecewisePower vpp = flux_potential_pp(prob);
    for (std::size_t j = 0; j < grid.size(); ++j)
      v[j] = grid[j] == 0.0 ? 0.0 : vpp.eval(grid[j]);
    return v;
  }
  prob.validate();
  detail::reject_sign_changing(prob);
  const double e = prob.lambda + prob.dim - 1.0;
  auto g = [&](double s) {
    if (s == 0.0) return 0.0;
    return std::pow(s, e) * prob.f_eval(s);
  };
  double acc = 0.0;
  for (std::size_t j = 1; j < grid.size(); ++j) {
    acc += 0.5 * (g(grid[j - 1]) + g(grid[j])) * (grid[j] - grid[j - 1]);
    v[j] = -std::pow(grid[j], -prob.lambda) * acc;
  }
  return v;
}

/// Solves the radial problem: exactly (piecewise powers) where the slope has
/// a closed form, otherwise by quadrature on the exact or sampled flux.
inline RadialSolution radial_solution(const RadialProblem& prob,
                                      std::vector<double> grid = {}) {
  prob.validate();
  if (grid.empty()) {
    grid = prob.analytic() ? radial_grid(prob) : [&] {
      std::vector<double> g = prob.f_r;
      if (g.front() > 0.0) g.insert(g.begin(), 0.0);
      if (g.back() < prob.radius) g.push_back(prob.radius);
      return g;
    }();
  }

  RadialSolution sol;
  sol.dim = prob.dim;
  sol.radius = prob.radius;
  sol.lambda = prob.lambda;
  sol.p = prob.p;
  sol.r = grid;
  const double invp1 = 1.0 / (prob.p - 1.0);
  const std::size_t n = grid.size();

  sol.v = flux_potential(prob, grid);
  sol.w.resize(n);
  sol.du.resize(n);
  sol.u.assign(n, 0.0);

  std::function<double(double)> slope_fn;

  if (prob.analytic()) {
    sol.v_pp = flux_potential_pp(prob);
    sol.w_pp = sol.v_pp.times_power(1.0 - prob.dim);
    sol.slope_pp = sol.w_pp.scaled(-1.0).abs_pow(invp1);
    sol.symbolic = sol.slope_pp.has_value();
    for (std::size_t j = 0; j < n; ++j) {
      const double rr = grid[j] == 0.0 ? 1e-300 * prob.radius : grid[j];
      sol.w[j] = sol.w_pp.eval(rr);
      sol.du[j] = -std::pow(std::abs(sol.w[j]), invp1);
    }
    if (sol.symbolic) {
      for (const auto& seg : sol.slope_pp->segments) {
        if (&seg != &sol.slope_pp->segments.front()) break;
        if (!seg.terms.empty() && seg.terms[0].coef != 0.0 && seg.terms[0].exponent <= -1.0)
          throw NumericalError("radial solution: blow-up-at-origin (slope not integrable)");
      }
      slope_fn = [&sol](double s) { return sol.slope_pp->eval(s); };
    } else {
      slope_fn = [&sol, invp1](double s) {
        return std::pow(std::abs(sol.w_pp.eval(s)), invp1);
      };
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      sol.w[j] = grid[j] == 0.0 ? 0.0 : sol.v[j] * std::pow(grid[j], 1.0 - prob.dim);
      sol.du[j] = -std::pow(std::abs(sol.w[j]), invp1);
    }
    // crude origin guard: slope growing faster than 1/r is not integrable
    if (n > 2 && grid[1] > 0.0) {
      const double s1 = std::abs(sol.du[1]), s2 = std::abs(sol.du[2]);
      if (s1 > 0.0 && s2 > 0.0 && s1 * grid[1] > 8.0 * s2 * grid[2])
        throw NumericalError("radial solution: blow-up-at-origin (slope not integrable)");
    }
  }

  // u by integrating the slope from the boundary inward
  if (sol.symbolic) {
    const PiecewisePower big_u = sol.slope_pp->antiderivative_from_zero();
    const double at_r = big_u.eval(prob.radius);
    for (std::size_t j = 0; j < n; ++j) sol.u[j] = at_r - big_u.eval(grid[j]);
  } else if (slope_fn) {
    for (std::size_t j = n - 1; j > 0; --j)
      sol.u[j - 1] = sol.u[j] + gauss8(slope_fn, grid[j - 1], grid[j]);
  } else {
    for (std::size_t j = n - 1; j > 0; --j)
      sol.u[j - 1] = sol.u[j] + 0.5 * (std::abs(sol.du[j - 1]) + std::abs(sol.du[j])) *
                                    (grid[j] - grid[j - 1]);
  }
  for (auto& val : sol.u) val = std::max(val, 0.0);

  // strong-form residual at interior grid points; exact derivative of the
  // closed-form flux on the symbolic path, central differences otherwise
  const std::optional<PiecewisePower> vprime =
      prob.analytic() ? std::optional<PiecewisePower>(sol.v_pp.derivative()) : std::nullopt;
  sol.residual.assign(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double rr = grid[j];
    const double dv = vprime ? vprime->eval(rr)
                             : (sol.v[j + 1] - sol.v[j - 1]) / (grid[j + 1] - grid[j - 1]);
    sol.residual[j] =
        -std::pow(rr, 1.0 - prob.dim) * dv - prob.lambda * sol.w[j] / rr - prob.f_eval(rr);
    sol.max_residual = std::max(sol.max_residual, std::abs(sol.residual[j]));
  }

  // energy and norms
  const double surf = prob.dim * ball_volume(prob.dim);
  const auto slope_p = sol.symbolic ? sol.slope_pp->abs_pow(prob.p) : std::nullopt;
  if (slope_p) {
    sol.energy = surf * slope_p->times_power(prob.dim - 1.0).integral(0.0, prob.radius);
  } else if (slope_fn) {
    sol.energy = surf * gauss8_over(grid, [&](double s) {
                   return std::pow(slope_fn(s), prob.p) * std::pow(s, prob.dim - 1.0);
                 });
  } else {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double a = grid[j], b = grid[j + 1];
      sol.energy += 0.5 *
                    (std::pow(std::abs(sol.du[j]), prob.p) * std::pow(a, prob.dim - 1.0) +
                     std::pow(std::abs(sol.du[j + 1]), prob.p) * std::pow(b, prob.dim - 1.0)) *
                    (b - a);
    }
    sol.energy *= surf;
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double a = grid[j], b = grid[j + 1];
    sol.norm_l1 += 0.5 * (sol.u[j] * std::pow(a, prob.dim - 1.0) +
                          sol.u[j + 1] * std::pow(b, prob.dim - 1.0)) * (b - a);
  }
  sol.norm_l1 *= surf;
  sol.norm_linf = sol.u.front();
  return sol;
}

/// Per-grid-point trichotomy of u_p as p -> 1+ along a decreasing schedule.
struct TrichotomyRecord {
  std::vector<double> p_values;
  std::vector<double> grid;
  std::vector<std::vector<double>> u_per_p;  // one nodal vector per schedule entry
  std::vector<PointClassification> points;   // one per grid node
  std::vector<double> sup_norms;
  PointClassification sup_norm_class;
};

inline TrichotomyRecord limit_p_to_one(RadialProblem prob, const std::vector<double>& schedule,
                                       const LimitClassifier& opt = {}) {
  require(schedule.size() >= 2, "limit_p_to_one: schedule too short");
  for (std::size_t i = 0; i + 1 < schedule.size(); ++i)
    require(schedule[i] > schedule[i + 1] && schedule[i + 1] > 1.0,
            "limit_p_to_one: schedule must decrease strictly toward 1");

  TrichotomyRecord rec;
  rec.p_values = schedule;
  prob.p = schedule.front();
  rec.grid = radial_grid(prob);
  for (double p : schedule) {
    prob.p = p;
    const auto sol = radial_solution(prob, rec.grid);
    rec.u_per_p.push_back(sol.u);
    rec.sup_norms.push_back(sol.norm_linf);
  }
  rec.points.resize(rec.grid.size());
  std::vector<double> seq(schedule.size());
  for (std::size_t j = 0; j < rec.grid.size(); ++j) {
    for (std::size_t k = 0; k < schedule.size(); ++k) seq[k] = rec.u_per_p[k][j];
    rec.points[j] = classify_limit(schedule, seq, opt);
  }
  rec.sup_norm_class = classify_limit(schedule, rec.sup_norms, opt);
  return rec;
}

/// Candidate limit pair for a radial instance.  The vector field is
/// p-independent: z_p = |u_p'|^{p-2} u_p' x/|x| = w(r) x/|x| where w is the
/// slope flux, which depends only on (N, lambda, f).  The scalar limit is the
/// per-node extrapolant of u_p.
struct RadialCertificatePair {
  std::vector<double> grid;
  std::vector<double> u;
  std::vector<double> z_r;  // nodal values of w
  TrichotomyRecord trichotomy;
  LimitCertificate certificate;
};

inline RadialCertificatePair radial_limit_certificate(
    RadialProblem prob, const std::vector<double>& schedule,
    const CertificateOptions& opt = {}, const LimitClassifier& cls = {}) {
  RadialCertificatePair pair;
  pair.trichotomy = limit_p_to_one(prob, schedule, cls);
  pair.grid = pair.trichotomy.grid;
  pair.u.resize(pair.grid.size());
  for (std::size_t j = 0; j < pair.grid.size(); ++j) {
    const auto& pt = pair.trichotomy.points[j];
    if (pt.kind == PointLimit::ToInfinity)
      throw NumericalError("radial limit certificate: u_p blows up, no BV limit");
    if (pt.kind == PointLimit::Inconclusive)
      throw NumericalError("radial limit certificate: inconclusive limit trend");
    pair.u[j] = pt.kind == PointLimit::ToZero ? 0.0 : pt.value;
  }
  pair.u.back() = 0.0;

  prob.p = schedule.front();
  std::function<double(double)> z_fn;
  if (prob.analytic()) {
    const PiecewisePower wpp = flux_potential_pp(prob).times_power(1.0 - prob.dim);
    for (double r : pair.grid)
      pair.z_r.push_back(wpp.eval(std::max(r, 1e-300 * prob.radius)));
    z_fn = [wpp, R = prob.radius](double r) { return wpp.eval(std::max(r, 1e-300 * R)); };
  } else {
    const auto sol = radial_solution(prob, pair.grid);
    pair.z_r = sol.w;
    auto grid = pair.grid;
    auto w = sol.w;
    z_fn = [grid, w](double r) {
      const auto it = std::upper_bound(grid.begin(), grid.end(), r);
      std::size_t j = static_cast<std::size_t>(it - grid.begin());
      if (j == 0) return w.front();
      if (j >= grid.size()) return w.back();
      const double t = (r - grid[j - 1]) / (grid[j] - grid[j - 1]);
      return (1.0 - t) * w[j - 1] + t * w[j];
    };
  }

  auto f_fn = [&prob](double r) { return prob.f_eval(r); };
  pair.certificate = verify_radial_certificate(prob.dim, prob.radius, prob.lambda, f_fn,
                                               pair.grid, pair.u, z_fn, opt);
  return pair;
}

}  // namespace onelap

#endif
