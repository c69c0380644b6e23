#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <sstream>

#include "onelap/mesh.hpp"

using namespace onelap;

namespace {

// per-cell gradient of the nodal interpolant of an affine function must
// reproduce its slope exactly
void check_linear_exactness(const Mesh& m) {
  std::vector<double> slope(m.dim);
  for (int d = 0; d < m.dim; ++d) slope[d] = 1.0 + d;
  std::vector<double> u(m.n_nodes());
  for (std::size_t i = 0; i < m.n_nodes(); ++i) {
    double s = 0.5;
    for (int d = 0; d < m.dim; ++d) s += slope[d] * m.node(i)[d];
    u[i] = s;
  }
  for (std::size_t c = 0; c < m.n_cells(); c += 17) {
    for (int d = 0; d < m.dim; ++d) {
      double g = 0.0;
      for (int v = 0; v <= m.dim; ++v) g += u[m.cell(c)[v]] * m.grad(c, v)[d];
      CHECK(g == Catch::Approx(slope[d]).epsilon(1e-10));
    }
  }
}

}  // namespace

TEST_CASE("disk mesh geometry") {
  const auto m = disk_mesh(1.0, 1.0 / 16);
  CHECK(m.total_volume == Catch::Approx(kPi).epsilon(5e-3));
  // origin present and interior
  CHECK(m.node(0)[0] == 0.0);
  CHECK(m.on_boundary[0] == 0);
  // boundary nodes lie on the circle
  std::size_t nb = 0;
  for (std::size_t i = 0; i < m.n_nodes(); ++i) {
    if (!m.on_boundary[i]) continue;
    ++nb;
    const double r = std::hypot(m.node(i)[0], m.node(i)[1]);
    CHECK(r == Catch::Approx(1.0).epsilon(1e-12));
  }
  CHECK(nb >= 6);
  check_linear_exactness(m);
}

TEST_CASE("ball mesh geometry") {
  const auto m = ball_mesh(1.0, 0.25);
  CHECK(m.total_volume == Catch::Approx(4.0 * kPi / 3.0).epsilon(2e-2));
  CHECK(m.on_boundary[0] == 0);
  for (std::size_t i = 0; i < m.n_nodes(); ++i) {
    if (!m.on_boundary[i]) continue;
    const double* x = m.node(i);
    CHECK(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) ==
          Catch::Approx(1.0).epsilon(1e-12));
  }
  check_linear_exactness(m);
}

TEST_CASE("square mesh geometry") {
  const auto m = square_mesh(2.0, 0.25);
  CHECK(m.total_volume == Catch::Approx(4.0).epsilon(1e-12));
  check_linear_exactness(m);
}

TEST_CASE("mesh ASCII round trip") {
  const auto m = disk_mesh(1.0, 0.2);
  std::stringstream ss;
  write_mesh(m, ss);
  const auto back = read_mesh(ss);
  REQUIRE(back.n_nodes() == m.n_nodes());
  REQUIRE(back.n_cells() == m.n_cells());
  CHECK(back.total_volume == Catch::Approx(m.total_volume).epsilon(1e-14));
  for (std::size_t i = 0; i < m.coords.size(); i += 37)
    CHECK(back.coords[i] == m.coords[i]);
}

TEST_CASE("mesh reader rejects inconsistent boundary markers") {
  const auto m = disk_mesh(1.0, 0.3);
  std::stringstream ss;
  write_mesh(m, ss);
  std::string text = ss.str();
  // flip the first marker (node 0, the center, is interior => marker 0)
  const auto pos = text.find(" 0\n");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 3, " 1\n");
  std::stringstream corrupted(text);
  CHECK_THROWS_AS(read_mesh(corrupted), ValidationError);
}

TEST_CASE("generator parameter validation") {
  CHECK_THROWS_AS(disk_mesh(1.0, 2.0), ValidationError);
  CHECK_THROWS_AS(ball_mesh(-1.0, 0.1), ValidationError);
  CHECK_THROWS_AS(square_mesh(1.0, 0.0), ValidationError);
}
