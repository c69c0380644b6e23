#ifndef ONELAP_PLAP_SOLVER_HPP_
#define ONELAP_PLAP_SOLVER_HPP_

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "onelap/constants.hpp"
#include "onelap/errors.hpp"
#include "onelap/mesh.hpp"

namespace onelap {

/// T_k(s): truncation at level k > 0.
inline double truncate(double s, double k) {
  require(k > 0.0, "truncate: level must be positive");
  return std::clamp(s, -k, k);
}

/// G_k(s) = s - T_k(s), the over-level part.
inline double gk_part(double s, double k) { return s - truncate(s, k); }

struct SolverOptions {
  double nonlinear_tol = 1e-8;   // relative weak residual
  double linear_tol = 1e-10;     // relative CG tolerance (floor)
  int max_iterations = 250;
  double eps = -1.0;             // regularization; < 0 selects h^2 x gradient scale
  double gradient_scale_hint = 0.0;  // expected max |grad u| (warm-start predictor)
  double n_trunc = 1e4;          // drift damping / datum truncation level
  bool verbose = false;
};

struct DiscreteProblem {
  const Mesh* mesh = nullptr;
  double p = 0.0;
  double lambda = 0.0;  // Hardy drift lambda x/|x|^2; ignored when drift set
  std::function<double(const double*)> f;  // datum
  std::function<void(const double*, double*)> drift;  // optional generic F(x)
  SolverOptions opt;

  bool has_drift() const { return lambda != 0.0 || bool(drift); }

  void validate() const {
    require(mesh != nullptr, "discrete problem: mesh required");
    require(p > 1.0 && p < mesh->dim + 1e300, "discrete problem: p > 1");
    require(bool(f), "discrete problem: datum required");
    if (lambda != 0.0 && !drift)
      require(std::abs(lambda) < mesh->dim - 1, "discrete problem: out-of-range-lambda");
  }
};

struct SolveReport {
  double p = 0.0;
  double eps = 0.0;
  double n_trunc = 0.0;
  int iterations = 0;
  double residual = 0.0;  // final relative weak residual
  bool converged = false;
  double energy = 0.0;        // \int |grad u_h|^p (unregularized integrand)
  double norm_l1 = 0.0;
  double norm_l1star = 0.0;   // L^{N/(N-1)}
  double norm_linf = 0.0;
  double max_grad = 0.0;
  std::vector<double> u;      // nodal values (zero on the boundary)
};

namespace femdetail {

struct QuadRule {
  // barycentric points (nv entries each) and equal weights |T| * frac
  std::vector<std::array<double, 4>> bary;
  double frac = 0.0;
};

inline const QuadRule& quad_rule(int dim) {
  // degree-2 rules with strictly positive barycenters except 2D edge
  // midpoints; no point coincides with a vertex, so a vertex placed at the
  // origin never sees the Hardy singularity.
  static const QuadRule tri = {{{0.5, 0.5, 0.0, 0.0}, {0.0, 0.5, 0.5, 0.0}, {0.5, 0.0, 0.5, 0.0}},
                               1.0 / 3.0};
  static const double a = 0.5854101966249685, b = 0.1381966011250105;
  static const QuadRule tet = {{{a, b, b, b}, {b, a, b, b}, {b, b, a, b}, {b, b, b, a}},
                               1.0 / 4.0};
  return dim == 2 ? tri : tet;
}

}  // namespace femdetail

/// Regularized p-Laplacian solver with Hardy or generic drift:
///   -div( (|grad u|^2 + eps^2)^{(p-2)/2} grad u )
///       = damp(x) (|grad u|^2+eps^2)^{(p-2)/2} grad u . F + T_n(f),
///   damp = 1 / (1 + |grad u|^{p-1} |F| / n),
/// discretized with P1 elements and solved by Picard iteration: the diffusion
/// coefficient and the whole drift term lag one iterate.  Damping factor 0.5
/// engages whenever the weak residual fails to decrease.
class PlapSolver {
public:
  explicit PlapSolver(const DiscreteProblem& dp) : dp_(dp) {
    dp_.validate();
    const Mesh& m = *dp_.mesh;
    dof_of_node_.assign(m.n_nodes(), -1);
    for (std::size_t i = 0; i < m.n_nodes(); ++i)
      if (!m.on_boundary[i]) dof_of_node_[i] = n_dof_++;
    build_pattern();
    assemble_datum();
  }

  SolveReport solve(const std::vector<double>* warm_start = nullptr) {
    const Mesh& m = *dp_.mesh;
    const int nv = m.dim + 1;
    const double p = dp_.p;

    std::vector<double> u(m.n_nodes(), 0.0);
    if (warm_start) {
      require(warm_start->size() == m.n_nodes(), "solve: warm start size mismatch");
      u = *warm_start;
      for (std::size_t i = 0; i < m.n_nodes(); ++i)
        if (m.on_boundary[i]) u[i] = 0.0;
    }

    // regularization: eps = h^2 x (gradient scale); the scale tracks the
    // solution so the degenerate family keeps its homogeneity decay
    double gscale = dp_.opt.gradient_scale_hint;
    if (gscale <= 0.0 && warm_start) gscale = max_cell_gradient(u);
    if (gscale <= 0.0) gscale = 1.0;
    double eps = dp_.opt.eps > 0.0 ? dp_.opt.eps : m.h * m.h * gscale;

    Eigen::VectorXd x(n_dof_), b(n_dof_);
    for (std::size_t i = 0; i < m.n_nodes(); ++i)
      if (dof_of_node_[i] >= 0) x[dof_of_node_[i]] = u[i];

    SolveReport rep;
    rep.p = p;
    rep.n_trunc = dp_.opt.n_trunc;

    double prev_res = std::numeric_limits<double>::infinity();
    double omega = 1.0;
    bool converged = false;
    int it = 0;
    for (; it < dp_.opt.max_iterations; ++it) {
      assemble(u, eps, b);
      const double bnorm = b.norm();
      const double scale = std::max(bnorm, std::numeric_limits<double>::min());
      const double res = (mat_ * x - b).norm() / scale;

      if (res < dp_.opt.nonlinear_tol) {
        converged = true;
        rep.residual = res;
        break;
      }
      // adapt eps to the measured gradient scale (deadband factor 10)
      if (dp_.opt.eps <= 0.0 && it > 0) {
        const double gmax = max_cell_gradient(u);
        if (gmax > 0.0) {
          const double target = m.h * m.h * gmax;
          if (target > 10.0 * eps || target < 0.1 * eps) {
            eps = target;
            prev_res = std::numeric_limits<double>::infinity();
            continue;  // re-assemble with the new regularization
          }
        }
      }
      omega = res < prev_res ? std::min(1.0, omega * 2.0) : std::max(0.0625, 0.5 * omega);
      prev_res = res;

      Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper>
          cg;
      cg.setTolerance(std::max(dp_.opt.linear_tol, std::min(1e-4, 0.05 * res)));
      cg.setMaxIterations(4000);
      cg.compute(mat_);
      const Eigen::VectorXd xnew = cg.solveWithGuess(b, x);
      if (!xnew.allFinite()) {
        omega *= 0.5;
        if (omega < 1e-3)
          throw NumericalError("plap solver: singular linearization (non-finite update)");
        continue;
      }
      x += omega * (xnew - x);
      for (std::size_t i = 0; i < m.n_nodes(); ++i)
        if (dof_of_node_[i] >= 0) u[i] = x[dof_of_node_[i]];
    }
    if (!converged) {
      assemble(u, eps, b);
      rep.residual = (mat_ * x - b).norm() / std::max(b.norm(), 1e-300);
      converged = rep.residual < dp_.opt.nonlinear_tol;
    }

    rep.converged = converged;
    rep.iterations = it;
    rep.eps = eps;
    rep.u = u;

    // norms and energy
    const double one_star = m.dim / (m.dim - 1.0);
    double l1 = 0.0, l1s = 0.0, linf = 0.0;
    std::vector<double> lumped(m.n_nodes(), 0.0);
    for (std::size_t c = 0; c < m.n_cells(); ++c)
      for (int v = 0; v < nv; ++v) lumped[m.cell(c)[v]] += m.volume[c] / nv;
    for (std::size_t i = 0; i < m.n_nodes(); ++i) {
      l1 += lumped[i] * std::abs(u[i]);
      l1s += lumped[i] * std::pow(std::abs(u[i]), one_star);
      linf = std::max(linf, std::abs(u[i]));
    }
    rep.norm_l1 = l1;
    rep.norm_l1star = std::pow(l1s, 1.0 / one_star);
    rep.norm_linf = linf;
    double energy = 0.0, gmax = 0.0;
    for (std::size_t c = 0; c < m.n_cells(); ++c) {
      const double g = cell_gradient_norm(u, c);
      energy += m.volume[c] * std::pow(g, p);
      gmax = std::max(gmax, g);
    }
    rep.energy = energy;
    rep.max_grad = gmax;
    return rep;
  }

  double cell_gradient_norm(const std::vector<double>& u, std::size_t c) const {
    const Mesh& m = *dp_.mesh;
    double g2 = 0.0;
    for (int d = 0; d < m.dim; ++d) {
      double gd = 0.0;
      for (int v = 0; v <= m.dim; ++v) gd += u[m.cell(c)[v]] * m.grad(c, v)[d];
      g2 += gd * gd;
    }
    return std::sqrt(g2);
  }

  double max_cell_gradient(const std::vector<double>& u) const {
    double gmax = 0.0;
    for (std::size_t c = 0; c < dp_.mesh->n_cells(); ++c)
      gmax = std::max(gmax, cell_gradient_norm(u, c));
    return gmax;
  }

private:
  void build_pattern() {
    const Mesh& m = *dp_.mesh;
    const int nv = m.dim + 1;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(m.n_cells() * nv * nv);
    for (std::size_t c = 0; c < m.n_cells(); ++c) {
      const std::int32_t* ids = m.cell(c);
      for (int a = 0; a < nv; ++a)
        for (int bb = 0; bb < nv; ++bb) {
          const int da = dof_of_node_[ids[a]], db = dof_of_node_[ids[bb]];
          if (da >= 0 && db >= 0) trip.emplace_back(da, db, 0.0);
        }
    }
    mat_.resize(n_dof_, n_dof_);
    mat_.setFromTriplets(trip.begin(), trip.end());
    mat_.makeCompressed();

    // flat value positions for fast re-assembly
    pos_.assign(m.n_cells() * nv * nv, -1);
    for (std::size_t c = 0; c < m.n_cells(); ++c) {
      const std::int32_t* ids = m.cell(c);
      for (int a = 0; a < nv; ++a)
        for (int bb = 0; bb < nv; ++bb) {
          const int da = dof_of_node_[ids[a]], db = dof_of_node_[ids[bb]];
          if (da < 0 || db < 0) continue;
          const auto* outer = mat_.outerIndexPtr();
          const auto* inner = mat_.innerIndexPtr();
          // column-major: find row da within column db
          std::int64_t lo = outer[db], hi = outer[db + 1] - 1, found = -1;
          while (lo <= hi) {
            const std::int64_t mid = (lo + hi) / 2;
            if (inner[mid] < da) lo = mid + 1;
            else if (inner[mid] > da) hi = mid - 1;
            else { found = mid; break; }
          }
          pos_[(c * nv + a) * nv + bb] = found;
        }
    }
  }

  void assemble_datum() {
    const Mesh& m = *dp_.mesh;
    const int nv = m.dim + 1;
    const auto& rule = femdetail::quad_rule(m.dim);
    b_datum_ = Eigen::VectorXd::Zero(n_dof_);
    for (std::size_t c = 0; c < m.n_cells(); ++c) {
      const std::int32_t* ids = m.cell(c);
      for (const auto& bc : rule.bary) {
        double xq[3] = {0, 0, 0};
        for (int v = 0; v < nv; ++v)
          for (int d = 0; d < m.dim; ++d) xq[d] += bc[v] * m.node(ids[v])[d];
        const double fval = truncate_datum(dp_.f(xq));
        const double wq = m.volume[c] * rule.frac;
        for (int v = 0; v < nv; ++v) {
          const int dv = dof_of_node_[ids[v]];
          if (dv >= 0) b_datum_[dv] += wq * fval * bc[v];
        }
      }
    }
  }

  double truncate_datum(double val) const {
    const double n = dp_.opt.n_trunc;
    return n > 0.0 ? std::clamp(val, -n, n) : val;
  }

  void assemble(const std::vector<double>& u, double eps, Eigen::VectorXd& b) {
    const Mesh& m = *dp_.mesh;
    const int nv = m.dim + 1;
    const double p = dp_.p;
    const auto& rule = femdetail::quad_rule(m.dim);
    std::fill(mat_.valuePtr(), mat_.valuePtr() + mat_.nonZeros(), 0.0);
    b = b_datum_;

    const bool drift = dp_.has_drift();
    for (std::size_t c = 0; c < m.n_cells(); ++c) {
      const std::int32_t* ids = m.cell(c);
      double g[3] = {0, 0, 0};
      for (int d = 0; d < m.dim; ++d)
        for (int v = 0; v < nv; ++v) g[d] += u[ids[v]] * m.grad(c, v)[d];
      double g2 = 0.0;
      for (int d = 0; d < m.dim; ++d) g2 += g[d] * g[d];
      const double sigma = std::pow(g2 + eps * eps, 0.5 * (p - 2.0));

      // stiffness: sigma grad phi_a . grad phi_b |T|
      for (int a = 0; a < nv; ++a) {
        const int da = dof_of_node_[ids[a]];
        if (da < 0) continue;
        for (int bb = 0; bb < nv; ++bb) {
          const std::int64_t at = pos_[(c * nv + a) * nv + bb];
          if (at < 0) continue;
          double dot = 0.0;
          for (int d = 0; d < m.dim; ++d) dot += m.grad(c, a)[d] * m.grad(c, bb)[d];
          mat_.valuePtr()[at] += sigma * dot * m.volume[c];
        }
      }

      // lagged drift: sigma (g . F) damp, integrated with the cell rule
      if (drift && g2 > 0.0) {
        const double gnorm = std::sqrt(g2);
        for (const auto& bc : rule.bary) {
          double xq[3] = {0, 0, 0};
          for (int v = 0; v < nv; ++v)
            for (int d = 0; d < m.dim; ++d) xq[d] += bc[v] * m.node(ids[v])[d];
          double F[3] = {0, 0, 0};
          if (dp_.drift) {
            dp_.drift(xq, F);
          } else {
            double r2 = 0.0;
            for (int d = 0; d < m.dim; ++d) r2 += xq[d] * xq[d];
            for (int d = 0; d < m.dim; ++d) F[d] = dp_.lambda * xq[d] / r2;
          }
          double gF = 0.0, Fnorm2 = 0.0;
          for (int d = 0; d < m.dim; ++d) {
            gF += g[d] * F[d];
            Fnorm2 += F[d] * F[d];
          }
          const double damp =
              dp_.opt.n_trunc > 0.0
                  ? 1.0 / (1.0 + sigma * gnorm * std::sqrt(Fnorm2) / dp_.opt.n_trunc)
                  : 1.0;
          const double val = sigma * gF * damp * m.volume[c] * rule.frac;
          for (int v = 0; v < nv; ++v) {
            const int dv = dof_of_node_[ids[v]];
            if (dv >= 0) b[dv] += val * bc[v];
          }
        }
      }
    }
  }

  DiscreteProblem dp_;
  std::vector<int> dof_of_node_;
  int n_dof_ = 0;
  Eigen::SparseMatrix<double> mat_;
  std::vector<std::int64_t> pos_;
  Eigen::VectorXd b_datum_;
};

inline SolveReport solve_fixed_p(const DiscreteProblem& dp,
                                 const std::vector<double>* warm_start = nullptr) {
  PlapSolver solver(dp);
  return solver.solve(warm_start);
}

/// z = (|grad u|^2 + eps^2)^{(p-2)/2} grad u on each cell, with its L^q norms.
struct VectorFieldReport {
  std::vector<double> z;  // per cell, dim-strided
  double norm_l2 = 0.0, norm_l4 = 0.0, norm_l8 = 0.0, norm_inf = 0.0;
};

inline VectorFieldReport extract_z(const Mesh& m, const std::vector<double>& u, double p,
                                   double eps) {
  VectorFieldReport rep;
  rep.z.assign(m.n_cells() * m.dim, 0.0);
  double s2 = 0.0, s4 = 0.0, s8 = 0.0;
  for (std::size_t c = 0; c < m.n_cells(); ++c) {
    double g[3] = {0, 0, 0};
    for (int d = 0; d < m.dim; ++d)
      for (int v = 0; v <= m.dim; ++v) g[d] += u[m.cell(c)[v]] * m.grad(c, v)[d];
    double g2 = 0.0;
    for (int d = 0; d < m.dim; ++d) g2 += g[d] * g[d];
    const double sigma = std::pow(g2 + eps * eps, 0.5 * (p - 2.0));
    double zn2 = 0.0;
    for (int d = 0; d < m.dim; ++d) {
      rep.z[c * m.dim + d] = sigma * g[d];
      zn2 += rep.z[c * m.dim + d] * rep.z[c * m.dim + d];
    }
    s2 += m.volume[c] * zn2;
    s4 += m.volume[c] * zn2 * zn2;
    s8 += m.volume[c] * zn2 * zn2 * zn2 * zn2;
    rep.norm_inf = std::max(rep.norm_inf, std::sqrt(zn2));
  }
  rep.norm_l2 = std::sqrt(s2);
  rep.norm_l4 = std::pow(s4, 0.25);
  rep.norm_l8 = std::pow(s8, 0.125);
  return rep;
}

/// Superlevel-set decay table |A_k| = |{ |u| >= k }| on a geometric ladder,
/// the discrete sup estimate, and the pairwise Stampacchia inequality
/// |A_l| <= S_N / (l-k) |A_k|^{1 + 1/N} for l > k >= k0.
struct LevelSetReport {
  std::vector<double> levels;
  std::vector<double> measures;
  double estimate = 0.0;        // smallest empty level = discrete sup
  double theoretical_cap = 0.0; // k0 + 2^{N+1} S_N |A_{k0}|^{1/N}
  bool decay_ok = true;
  bool bound_guaranteed = false;  // requires datum in L^q, q > N
};

inline LevelSetReport linf_via_levels(const Mesh& m, const std::vector<double>& u,
                                      double datum_lq_exponent = 0.0,
                                      double check_tol = 1e-12) {
  LevelSetReport rep;
  rep.bound_guaranteed = datum_lq_exponent > m.dim;
  std::vector<double> lumped(m.n_nodes(), 0.0);
  for (std::size_t c = 0; c < m.n_cells(); ++c)
    for (int v = 0; v <= m.dim; ++v) lumped[m.cell(c)[v]] += m.volume[c] / (m.dim + 1);

  double linf = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i < m.n_nodes(); ++i) {
    linf = std::max(linf, std::abs(u[i]));
    l1 += lumped[i] * std::abs(u[i]);
  }
  rep.estimate = linf;
  if (linf == 0.0) return rep;  // empty table for the zero field

  const double k0 =
      std::min(std::pow(l1, (m.dim - 1.0) / m.dim), linf) / 64.0;
  for (double k = k0; k < linf * 1.0001; k *= 2.0) {
    double meas = 0.0;
    for (std::size_t i = 0; i < m.n_nodes(); ++i)
      if (std::abs(u[i]) >= k) meas += lumped[i];
    rep.levels.push_back(k);
    rep.measures.push_back(meas);
  }
  const double s_n = sharp_constants(m.dim).s_n;
  for (std::size_t a = 0; a < rep.levels.size(); ++a)
    for (std::size_t b = a + 1; b < rep.levels.size(); ++b) {
      const double bound = s_n / (rep.levels[b] - rep.levels[a]) *
                           std::pow(rep.measures[a], 1.0 + 1.0 / m.dim);
      if (rep.measures[b] > bound * (1.0 + check_tol)) rep.decay_ok = false;
    }
  rep.theoretical_cap = rep.levels.front() +
                        std::pow(2.0, m.dim + 1) * s_n *
                            std::pow(rep.measures.front(), 1.0 / m.dim);
  return rep;
}

}  // namespace onelap

#endif
