#ifndef ONELAP_CERTIFICATE_HPP_
#define ONELAP_CERTIFICATE_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "onelap/constants.hpp"
#include "onelap/errors.hpp"
#include "onelap/gauss.hpp"

namespace onelap {

struct CertificateOptions {
  double tol_z = 1e-8;           // || z ||_inf <= 1 + tol_z
  double tol_pde = 1e-8;         // normalized distributional residual
  double tol_pairing = 1e-8;     // normalized pairing defect
  double tol_boundary = 1e-8;    // boundary sign defect
  double activation_rel = 1e-6;  // boundary test active where |u| > rel * ||u||_inf
  int n_bumps = 24;              // pairing test battery size
  std::vector<double> k_fracs = {0.25, 0.5, 1.0, 2.0};  // truncation levels / ||u||_inf
};

/// Discrete residuals of the three conditions a limit pair (u, z) must
/// satisfy, plus the admissibility bound on z.  The pairing check is
/// one-sided: the reverse inequality is automatic for ||z|| <= 1, so only the
/// defect \int phi (|grad T_k u| - z . grad T_k u) is informative.
struct LimitCertificate {
  double z_max = 0.0;
  double residual_pde = 0.0;
  double residual_pairing = 0.0;
  double residual_boundary = 0.0;
  double pde_scale = 0.0;

  bool z_ok = false, pde_ok = false, pairing_ok = false, boundary_ok = false;
  bool accepted = false;
  std::string principal_failure;  // empty when accepted

  void finalize(const CertificateOptions& opt) {
    z_ok = z_max <= 1.0 + opt.tol_z;
    pde_ok = residual_pde <= opt.tol_pde;
    pairing_ok = residual_pairing <= opt.tol_pairing;
    boundary_ok = residual_boundary <= opt.tol_boundary;
    accepted = z_ok && pde_ok && pairing_ok && boundary_ok;
    // admissibility of z is a precondition of the other identities, so it is
    // reported first when violated
    if (!z_ok) principal_failure = "z-bound";
    else if (!pde_ok) principal_failure = "pde";
    else if (!pairing_ok) principal_failure = "pairing";
    else if (!boundary_ok) principal_failure = "boundary";
    else principal_failure.clear();
  }
};

/// Verifies a radial pair on B_R(0): u given nodally on `grid`, z through its
/// radial component z_r (z = z_r(r) x/|x|), f as a radial profile.
///  (1) -div z = lambda z.x/|x|^2 + f, tested against every interior nodal hat;
///  (2) (z, D T_k u) = |D T_k u|, tested against bump functions and the
///      truncation ladder;
///  (3) [z, nu] in Sgn(-u), tested where the inner trace of |u| exceeds the
///      activation threshold.  The trace is taken one node inside the
///      boundary: the nodal boundary value carries the Dirichlet constraint,
///      not the BV trace that detects detachment.
inline LimitCertificate verify_radial_certificate(
    int dim, double radius, double lambda, const std::function<double(double)>& f,
    const std::vector<double>& grid, const std::vector<double>& u,
    const std::function<double(double)>& z_r, const CertificateOptions& opt = {},
    std::optional<double> boundary_trace_z = std::nullopt) {
  require(dim >= 2, "certificate: dim >= 2");
  require(grid.size() >= 4 && grid.size() == u.size(),
          "certificate: grid/u size mismatch");
  require(std::abs(grid.back() - radius) < 1e-12 * radius,
          "certificate: grid must end at the boundary");

  const std::size_t n = grid.size();
  const double nm1 = dim - 1.0;
  LimitCertificate cert;

  // || z ||_inf over nodes and interval midpoints
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double a = grid[j] == 0.0 ? 0.5 * grid[j + 1] : grid[j];
    cert.z_max = std::max(cert.z_max, std::abs(z_r(a)));
    cert.z_max = std::max(cert.z_max, std::abs(z_r(0.5 * (a + grid[j + 1]))));
  }
  cert.z_max = std::max(cert.z_max, std::abs(z_r(radius)));

  // (1) distributional residual against interior nodal hats
  double max_res = 0.0, scale = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {  // hat centered at node i (r may be 0)
    const double lo = i == 0 ? grid[0] : grid[i - 1];
    const double mid = grid[i];
    const double hi = grid[i + 1];
    auto hat = [&](double s) {
      if (s <= mid) return lo == mid ? 1.0 : (s - lo) / (mid - lo);
      return (hi - s) / (hi - mid);
    };
    auto dhat = [&](double s) {
      if (s <= mid) return lo == mid ? 0.0 : 1.0 / (mid - lo);
      return -1.0 / (hi - mid);
    };
    double res = 0.0, sc = 0.0;
    auto piece = [&](double a, double b) {
      res += gauss8(
          [&](double s) {
            const double rp = std::pow(s, nm1);
            return (z_r(s) * dhat(s) - lambda * z_r(s) / s * hat(s) - f(s) * hat(s)) * rp;
          },
          a, b);
      sc += gauss8([&](double s) { return std::abs(f(s)) * hat(s) * std::pow(s, nm1); }, a, b);
    };
    if (lo < mid) piece(lo, mid);
    piece(mid, hi);
    max_res = std::max(max_res, std::abs(res));
    scale = std::max(scale, sc);
  }
  cert.pde_scale = scale > 0.0 ? scale : 1.0;
  cert.residual_pde = max_res / cert.pde_scale;

  // (2) pairing defect over bump battery x truncation ladder
  const double umax = *std::max_element(u.begin(), u.end(),
                                        [](double a, double b) { return std::abs(a) < std::abs(b); });
  const double uscale = std::abs(umax);
  double worst = 0.0;
  if (uscale > 0.0) {
    std::vector<std::function<double(double)>> bumps;
    const int nb = std::max(opt.n_bumps, 2);
    for (int b = 0; b < nb; ++b) {
      // quadratic bumps centered across (0, R)
      const double c = radius * (b + 1.0) / (nb + 1.0);
      const double halfw = radius * 1.5 / (nb + 1.0);
      bumps.push_back([c, halfw](double s) {
        const double t = (s - c) / halfw;
        return std::abs(t) < 1.0 ? (1.0 - t) * (1.0 + t) : 0.0;
      });
    }
    bumps.push_back([radius](double s) { return (s / radius) * (1.0 - s / radius) * 4.0; });

    for (double frac : opt.k_fracs) {
      const double k = frac * uscale;
      // nodal truncation, interval slopes of T_k(u)
      std::vector<double> tv(n);
      for (std::size_t j = 0; j < n; ++j)
        tv[j] = std::clamp(u[j], -k, k);
      for (const auto& phi : bumps) {
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
          const double a = grid[j], b = grid[j + 1];
          const double slope = (tv[j + 1] - tv[j]) / (b - a);
          if (slope == 0.0) continue;
          num += gauss8(
              [&](double s) {
                return phi(s) * (std::abs(slope) - z_r(s) * slope) * std::pow(s, nm1);
              },
              a, b);
          den += std::abs(slope) *
                 gauss8([&](double s) { return phi(s) * std::pow(s, nm1); }, a, b);
        }
        if (den > 0.0) worst = std::max(worst, num / den);
      }
    }
  }
  cert.residual_pairing = worst;

  // (3) boundary sign condition
  const double inner_trace = u[n - 2];
  const double delta = opt.activation_rel * uscale;
  if (std::abs(inner_trace) > delta && delta > 0.0) {
    const double zn = boundary_trace_z ? *boundary_trace_z : z_r(radius);
    const double sgn_u = inner_trace > 0.0 ? 1.0 : -1.0;
    cert.residual_boundary = std::abs(zn + sgn_u);
  }

  cert.finalize(opt);
  return cert;
}

}  // namespace onelap

#endif
