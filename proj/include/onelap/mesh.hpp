#ifndef ONELAP_MESH_HPP_
#define ONELAP_MESH_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "onelap/constants.hpp"
#include "onelap/errors.hpp"

namespace onelap {

/// Simplicial mesh in R^2 (triangles) or R^3 (tets) with homogeneous
/// Dirichlet boundary markers and precomputed P1 geometry.
struct Mesh {
  int dim = 0;
  double h = 0.0;  // nominal size used by the generator (0 for file meshes)
  std::vector<double> coords;         // node coordinates, dim-strided
  std::vector<std::int32_t> cells;    // (dim+1)-strided vertex ids
  std::vector<char> on_boundary;      // per node

  // derived
  std::vector<double> volume;         // per cell
  std::vector<double> grads;          // per cell: (dim+1) gradients, dim-strided
  double total_volume = 0.0;

  std::size_t n_nodes() const { return coords.size() / dim; }
  std::size_t n_cells() const { return cells.size() / (dim + 1); }

  const double* node(std::size_t i) const { return &coords[i * dim]; }
  const std::int32_t* cell(std::size_t c) const { return &cells[c * (dim + 1)]; }
  const double* grad(std::size_t c, int local) const {
    return &grads[(c * (dim + 1) + local) * dim];
  }

  void compute_geometry();
  void detect_boundary();
  void validate() const;
};

namespace meshdetail {

inline double det2(const double* a, const double* b) { return a[0] * b[1] - a[1] * b[0]; }

inline double det3(const double* a, const double* b, const double* c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

}  // namespace meshdetail

inline void Mesh::compute_geometry() {
  const int nv = dim + 1;
  const std::size_t nc = n_cells();
  volume.assign(nc, 0.0);
  grads.assign(nc * nv * dim, 0.0);
  total_volume = 0.0;

  for (std::size_t c = 0; c < nc; ++c) {
    std::int32_t* ids = &cells[c * nv];
    std::array<double, 9> e{};  // edge vectors from vertex 0
    for (int v = 1; v < nv; ++v)
      for (int d = 0; d < dim; ++d)
        e[(v - 1) * dim + d] = coords[ids[v] * dim + d] - coords[ids[0] * dim + d];

    double vol;
    if (dim == 2) {
      vol = 0.5 * meshdetail::det2(&e[0], &e[2]);
      if (vol < 0.0) {  // enforce positive orientation
        std::swap(ids[1], ids[2]);
        for (int d = 0; d < 2; ++d) std::swap(e[d], e[2 + d]);
        vol = -vol;
      }
    } else {
      vol = meshdetail::det3(&e[0], &e[3], &e[6]) / 6.0;
      if (vol < 0.0) {
        std::swap(ids[2], ids[3]);
        for (int d = 0; d < 3; ++d) std::swap(e[3 + d], e[6 + d]);
        vol = -vol;
      }
    }
    require(vol > 0.0, "mesh: degenerate cell " + std::to_string(c));
    volume[c] = vol;
    total_volume += vol;

    // P1 gradients: rows of the inverse edge matrix give grad phi_1..phi_N;
    // grad phi_0 = -(sum of the others)
    double* g = &grads[c * nv * dim];
    if (dim == 2) {
      // edge matrix M with columns e1, e2; rows of M^{-T} are grad phi_1/2
      const double a = e[0], b = e[2], cx = e[1], dy = e[3];
      const double det = a * dy - b * cx;
      g[1 * 2 + 0] = dy / det;
      g[1 * 2 + 1] = -b / det;
      g[2 * 2 + 0] = -cx / det;
      g[2 * 2 + 1] = a / det;
    } else {
      const double* e1 = &e[0];
      const double* e2 = &e[3];
      const double* e3 = &e[6];
      const double det = meshdetail::det3(e1, e2, e3);
      auto crossdiv = [&](const double* u, const double* v, double* out) {
        out[0] = (u[1] * v[2] - u[2] * v[1]) / det;
        out[1] = (u[2] * v[0] - u[0] * v[2]) / det;
        out[2] = (u[0] * v[1] - u[1] * v[0]) / det;
      };
      crossdiv(e2, e3, &g[1 * 3]);
      crossdiv(e3, e1, &g[2 * 3]);
      crossdiv(e1, e2, &g[3 * 3]);
    }
    for (int d = 0; d < dim; ++d) {
      double s = 0.0;
      for (int v = 1; v < nv; ++v) s += g[v * dim + d];
      g[d] = -s;
    }
  }
}

/// Boundary = nodes of faces incident to exactly one cell.
inline void Mesh::detect_boundary() {
  const int nv = dim + 1;
  on_boundary.assign(n_nodes(), 0);
  std::map<std::array<std::int32_t, 3>, int> face_count;
  for (std::size_t c = 0; c < n_cells(); ++c) {
    const std::int32_t* ids = cell(c);
    for (int skip = 0; skip < nv; ++skip) {
      std::array<std::int32_t, 3> f{-1, -1, -1};
      int k = 0;
      for (int v = 0; v < nv; ++v)
        if (v != skip) f[k++] = ids[v];
      std::sort(f.begin(), f.begin() + dim);
      ++face_count[f];
    }
  }
  for (const auto& [f, count] : face_count) {
    if (count == 1)
      for (int v = 0; v < dim; ++v) on_boundary[f[v]] = 1;
  }
}

inline void Mesh::validate() const {
  require(dim == 2 || dim == 3, "mesh: dim must be 2 or 3");
  require(n_nodes() >= std::size_t(dim + 1) && n_cells() >= 1, "mesh: too small");
  require(on_boundary.size() == n_nodes(), "mesh: boundary flags missing");
  for (std::int32_t id : cells)
    require(id >= 0 && std::size_t(id) < n_nodes(), "mesh: cell references missing node");
  bool any_boundary = false, any_interior = false;
  for (char b : on_boundary) (b ? any_boundary : any_interior) = true;
  require(any_boundary && any_interior, "mesh: needs both boundary and interior nodes");
}

// ---------------------------------------------------------------------------
// generators

namespace meshdetail {

/// Ring radii from the boundary inward: spacing h down to grade_radius, then
/// h / grade_factor toward the center.  Returned ascending, without 0.
inline std::vector<double> graded_radii(double R, double h, double grade_factor,
                                        double grade_radius) {
  std::vector<double> radii;
  double r = R;
  while (r > grade_radius + 0.5 * h) {
    radii.push_back(r);
    r -= h;
  }
  const double hf = h / grade_factor;
  while (r > 0.75 * hf) {
    radii.push_back(r);
    r -= hf;
  }
  std::reverse(radii.begin(), radii.end());
  return radii;
}

}  // namespace meshdetail

/// Unstructured-style disk mesh: center vertex, staggered rings with ~2 pi r / s
/// points, annuli triangulated by an angular two-pointer merge.  The ring
/// spacing drops by `grade_factor` inside `grade_radius_rel * R`.
inline Mesh disk_mesh(double R, double h, double grade_factor = 4.0,
                      double grade_radius_rel = 0.1) {
  require(R > 0.0 && h > 0.0 && h < R, "disk_mesh: need 0 < h < R");
  Mesh m;
  m.dim = 2;
  m.h = h;
  const auto radii = meshdetail::graded_radii(R, h, grade_factor, grade_radius_rel * R);

  m.coords = {0.0, 0.0};  // center node 0
  std::vector<std::vector<std::int32_t>> rings;
  std::vector<double> offsets;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const double rho = radii[j];
    const double spacing = rho <= grade_radius_rel * R ? h / grade_factor : h;
    const int n = std::max<int>(6, static_cast<int>(std::lround(2.0 * kPi * rho / spacing)));
    const double off = (j % 2) ? 0.5 : 0.0;
    std::vector<std::int32_t> ring(n);
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * kPi * (i + off) / n;
      ring[i] = static_cast<std::int32_t>(m.coords.size() / 2);
      m.coords.push_back(rho * std::cos(a));
      m.coords.push_back(rho * std::sin(a));
    }
    rings.push_back(std::move(ring));
    offsets.push_back(off);
  }

  // center fan
  const auto& first = rings.front();
  for (std::size_t i = 0; i < first.size(); ++i) {
    m.cells.push_back(0);
    m.cells.push_back(first[i]);
    m.cells.push_back(first[(i + 1) % first.size()]);
  }
  // annuli: advance whichever ring has the smaller next angle
  for (std::size_t j = 0; j + 1 < rings.size(); ++j) {
    const auto& A = rings[j];
    const auto& B = rings[j + 1];
    const double offA = offsets[j], offB = offsets[j + 1];
    const std::size_t nA = A.size(), nB = B.size();
    std::size_t i = 0, k = 0;
    while (i < nA || k < nB) {
      const double nextA = 2.0 * kPi * (i + 1 + offA) / nA;
      const double nextB = 2.0 * kPi * (k + 1 + offB) / nB;
      if (i < nA && (k >= nB || nextA <= nextB)) {
        m.cells.push_back(A[i % nA]);
        m.cells.push_back(A[(i + 1) % nA]);
        m.cells.push_back(B[k % nB]);
        ++i;
      } else {
        m.cells.push_back(B[k % nB]);
        m.cells.push_back(A[i % nA]);
        m.cells.push_back(B[(k + 1) % nB]);
        ++k;
      }
    }
  }

  m.compute_geometry();
  m.detect_boundary();
  m.validate();
  return m;
}

namespace meshdetail {

struct IcoSphere {
  std::vector<double> verts;              // unit vectors, 3-strided
  std::vector<std::int32_t> tris;         // 3-strided
};

/// Icosahedron subdivided `level` times and projected to the unit sphere.
inline IcoSphere icosphere(int level) {
  IcoSphere s;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double nrm = std::sqrt(1.0 + phi * phi);
  auto push = [&](double x, double y, double z) {
    s.verts.push_back(x / nrm);
    s.verts.push_back(y / nrm);
    s.verts.push_back(z / nrm);
  };
  push(-1, phi, 0); push(1, phi, 0); push(-1, -phi, 0); push(1, -phi, 0);
  push(0, -1, phi); push(0, 1, phi); push(0, -1, -phi); push(0, 1, -phi);
  push(phi, 0, -1); push(phi, 0, 1); push(-phi, 0, -1); push(-phi, 0, 1);
  s.tris = {0, 11, 5,  0, 5, 1,   0, 1, 7,   0, 7, 10,  0, 10, 11,
            1, 5, 9,   5, 11, 4,  11, 10, 2, 10, 7, 6,  7, 1, 8,
            3, 9, 4,   3, 4, 2,   3, 2, 6,   3, 6, 8,   3, 8, 9,
            4, 9, 5,   2, 4, 11,  6, 2, 10,  8, 6, 7,   9, 8, 1};

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<std::int32_t, std::int32_t>, std::int32_t> midpoint;
    auto mid = [&](std::int32_t a, std::int32_t b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      double x = s.verts[3 * a] + s.verts[3 * b];
      double y = s.verts[3 * a + 1] + s.verts[3 * b + 1];
      double z = s.verts[3 * a + 2] + s.verts[3 * b + 2];
      const double n = std::sqrt(x * x + y * y + z * z);
      const auto id = static_cast<std::int32_t>(s.verts.size() / 3);
      s.verts.push_back(x / n);
      s.verts.push_back(y / n);
      s.verts.push_back(z / n);
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::int32_t> next;
    next.reserve(s.tris.size() * 4);
    for (std::size_t t = 0; t < s.tris.size(); t += 3) {
      const std::int32_t a = s.tris[t], b = s.tris[t + 1], c = s.tris[t + 2];
      const std::int32_t ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      const std::int32_t quads[12] = {a, ab, ca, b, bc, ab, c, ca, bc, ab, bc, ca};
      next.insert(next.end(), quads, quads + 12);
    }
    s.tris = std::move(next);
  }
  return s;
}

}  // namespace meshdetail

/// Ball mesh from radial layers of a subdivided icosphere.  The angular
/// subdivision level is chosen so surface edges stay below h; layer spacing
/// follows the same graded rule as the disk.  Prisms between layers split
/// into three tets with the smallest-global-index diagonal rule, which keeps
/// neighboring splits conforming.
inline Mesh ball_mesh(double R, double h, double grade_factor = 4.0,
                      double grade_radius_rel = 0.1) {
  require(R > 0.0 && h > 0.0 && h < R, "ball_mesh: need 0 < h < R");
  const double ico_edge = 1.0514622242382672;  // icosahedron edge, unit circumsphere
  int level = 0;
  while (ico_edge * R / std::pow(2.0, level) > h) ++level;
  const auto sphere = meshdetail::icosphere(level);
  const auto nv_layer = static_cast<std::int32_t>(sphere.verts.size() / 3);
  const auto radii = meshdetail::graded_radii(R, h, grade_factor, grade_radius_rel * R);

  Mesh m;
  m.dim = 3;
  m.h = h;
  m.coords = {0.0, 0.0, 0.0};
  for (double rho : radii)
    for (std::int32_t v = 0; v < nv_layer; ++v) {
      m.coords.push_back(rho * sphere.verts[3 * v]);
      m.coords.push_back(rho * sphere.verts[3 * v + 1]);
      m.coords.push_back(rho * sphere.verts[3 * v + 2]);
    }
  auto gid = [&](std::size_t layer, std::int32_t v) {
    return static_cast<std::int32_t>(1 + layer * nv_layer + v);
  };

  // center fan into the first layer
  for (std::size_t t = 0; t < sphere.tris.size(); t += 3) {
    m.cells.push_back(0);
    m.cells.push_back(gid(0, sphere.tris[t]));
    m.cells.push_back(gid(0, sphere.tris[t + 1]));
    m.cells.push_back(gid(0, sphere.tris[t + 2]));
  }
  // prisms between consecutive layers
  for (std::size_t layer = 0; layer + 1 < radii.size(); ++layer) {
    for (std::size_t t = 0; t < sphere.tris.size(); t += 3) {
      std::array<std::int32_t, 3> loc = {sphere.tris[t], sphere.tris[t + 1],
                                         sphere.tris[t + 2]};
      std::sort(loc.begin(), loc.end());
      const std::int32_t i = gid(layer, loc[0]), j = gid(layer, loc[1]),
                         k = gid(layer, loc[2]);
      const std::int32_t ip = gid(layer + 1, loc[0]), jp = gid(layer + 1, loc[1]),
                         kp = gid(layer + 1, loc[2]);
      const std::int32_t tets[12] = {i, j, k, kp, i, j, kp, jp, i, jp, kp, ip};
      m.cells.insert(m.cells.end(), tets, tets + 12);
    }
  }

  m.compute_geometry();
  m.detect_boundary();
  m.validate();
  return m;
}

/// Uniform triangulation of the square (-L/2, L/2)^2.
inline Mesh square_mesh(double L, double h) {
  require(L > 0.0 && h > 0.0 && h < L, "square_mesh: need 0 < h < L");
  const int n = std::max(2, static_cast<int>(std::lround(L / h)));
  Mesh m;
  m.dim = 2;
  m.h = L / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      m.coords.push_back(-0.5 * L + L * i / n);
      m.coords.push_back(-0.5 * L + L * j / n);
    }
  auto id = [&](int i, int j) { return static_cast<std::int32_t>(j * (n + 1) + i); };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      m.cells.insert(m.cells.end(), {id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.cells.insert(m.cells.end(), {id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  m.compute_geometry();
  m.detect_boundary();
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// ASCII format:
//   dim <N>
//   nodes <count>          followed by: x y [z] <marker 0|1>
//   cells <count>          followed by: dim+1 node ids
// Markers are cross-checked against face incidence on load.

inline void write_mesh(const Mesh& m, std::ostream& os) {
  os << "dim " << m.dim << "\n";
  os << "nodes " << m.n_nodes() << "\n";
  os.precision(17);
  for (std::size_t i = 0; i < m.n_nodes(); ++i) {
    for (int d = 0; d < m.dim; ++d) os << m.coords[i * m.dim + d] << ' ';
    os << int(m.on_boundary[i]) << "\n";
  }
  os << "cells " << m.n_cells() << "\n";
  for (std::size_t c = 0; c < m.n_cells(); ++c) {
    for (int v = 0; v <= m.dim; ++v) os << m.cell(c)[v] << (v == m.dim ? '\n' : ' ');
  }
}

inline Mesh read_mesh(std::istream& is) {
  Mesh m;
  std::string key;
  std::size_t count = 0;
  require(bool(is >> key >> m.dim) && key == "dim", "mesh file: expected 'dim N'");
  require(m.dim == 2 || m.dim == 3, "mesh file: dim must be 2 or 3");
  require(bool(is >> key >> count) && key == "nodes", "mesh file: expected 'nodes COUNT'");
  m.coords.resize(count * m.dim);
  std::vector<char> markers(count);
  for (std::size_t i = 0; i < count; ++i) {
    for (int d = 0; d < m.dim; ++d)
      require(bool(is >> m.coords[i * m.dim + d]), "mesh file: truncated node record");
    int b = 0;
    require(bool(is >> b) && (b == 0 || b == 1), "mesh file: node marker must be 0 or 1");
    markers[i] = static_cast<char>(b);
  }
  require(bool(is >> key >> count) && key == "cells", "mesh file: expected 'cells COUNT'");
  m.cells.resize(count * (m.dim + 1));
  for (auto& id : m.cells) require(bool(is >> id), "mesh file: truncated cell record");
  m.compute_geometry();
  m.detect_boundary();
  for (std::size_t i = 0; i < m.n_nodes(); ++i)
    require(markers[i] == m.on_boundary[i],
            "mesh file: boundary marker of node " + std::to_string(i) +
                " inconsistent with face incidence");
  m.validate();
  return m;
}

inline Mesh read_mesh_file(const std::string& path) {
  std::ifstream is(path);
  require(is.good(), "mesh file: cannot open " + path);
  return read_mesh(is);
}

}  // namespace onelap

#endif
