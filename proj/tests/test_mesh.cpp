#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "gradrom/mesh.hpp"

using namespace gradrom;

namespace {

// independent shoelace area
double shoelace(const Mesh& mesh, Index e) {
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    const Vector2 a = mesh.triangle_vertex(e, c);
    const Vector2 b = mesh.triangle_vertex(e, (c + 1) % 3);
    s += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * s;
}

std::set<std::pair<Index, Index>> boundary_edge_keys(const Mesh& mesh) {
  std::map<std::pair<Index, Index>, int> uses;
  for (Index e = 0; e < mesh.n_elements(); ++e)
    for (int c = 0; c < 3; ++c) {
      Index a = mesh.triangles(e, c), b = mesh.triangles(e, (c + 1) % 3);
      ++uses[{std::min(a, b), std::max(a, b)}];
    }
  std::set<std::pair<Index, Index>> keys;
  for (auto& [k, n] : uses)
    if (n == 1) keys.insert(k);
  return keys;
}

}  // namespace

TEST_CASE("paper-scale grid has 2048 triangles") {
  const Mesh mesh = build_uniform_mesh(0.0, 256.0, 32, 32);
  CHECK(mesh.n_elements() == 2048);
  double area = 0.0;
  for (Index e = 0; e < mesh.n_elements(); ++e) area += shoelace(mesh, e);
  CHECK(area == doctest::Approx(256.0 * 256.0).epsilon(1e-12));
}

TEST_CASE("smallest grid: 2 triangles, 1 interior edge, 2 periodic pairs") {
  const Mesh mesh = build_uniform_mesh(0.0, 1.0, 1, 1);
  CHECK(mesh.n_elements() == 2);
  CHECK(mesh.interior_edges.size() == 1);
  CHECK(mesh.periodic_pairs.size() == 2);
  CHECK(boundary_edge_keys(mesh).size() == 4);
}

TEST_CASE("2x2 grid: 8 triangles, shoelace area equals domain area") {
  const Mesh mesh = build_uniform_mesh(0.0, 1.0, 2, 2);
  CHECK(mesh.n_elements() == 8);
  double area = 0.0;
  for (Index e = 0; e < mesh.n_elements(); ++e) {
    const double a = shoelace(mesh, e);
    CHECK(a > 0.0);  // counter-clockwise
    CHECK(a == doctest::Approx(mesh.triangle_area(e)).epsilon(1e-14));
    area += a;
  }
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("edge bookkeeping and Euler formula on several grids") {
  for (auto [nx, ny] : {std::pair<Index, Index>{1, 1}, {2, 3}, {5, 4}, {8, 8}}) {
    CAPTURE(nx);
    CAPTURE(ny);
    const Mesh mesh = build_uniform_mesh(-1.0, 3.0, nx, ny);
    const auto boundary = boundary_edge_keys(mesh);
    CHECK(boundary.size() == 2 * mesh.periodic_pairs.size());
    const Index V = mesh.vertices.rows();
    const Index E = static_cast<Index>(mesh.interior_edges.size() + boundary.size());
    const Index F = mesh.n_elements();
    CHECK(V - E + F == 1);

    double area = 0.0;
    for (Index e = 0; e < mesh.n_elements(); ++e) area += shoelace(mesh, e);
    CHECK(area == doctest::Approx(16.0).epsilon(1e-12));
  }
}

TEST_CASE("periodic pairing covers every boundary edge exactly once, as an involution") {
  const Mesh mesh = build_uniform_mesh(0.0, 2.0, 4, 3);
  auto keys = boundary_edge_keys(mesh);

  std::multiset<std::pair<Index, Index>> covered;
  auto key_near = [&](const Vector2& mid) {
    for (const auto& k : keys) {
      const Vector2 a = mesh.vertices.row(k.first).transpose();
      const Vector2 b = mesh.vertices.row(k.second).transpose();
      if ((0.5 * (a + b) - mid).norm() < 1e-12) return k;
    }
    REQUIRE(false);
    return std::pair<Index, Index>{-1, -1};
  };
  for (const MeshEdge& pair : mesh.periodic_pairs) {
    const Vector2 mid_l = 0.5 * (pair.p0 + pair.p1);
    const Vector2 mid_m = mid_l + pair.translation;
    covered.insert(key_near(mid_l));
    covered.insert(key_near(mid_m));
    // partner of the partner: translating the partner midpoint back lands on E_l
    CHECK((mid_m - pair.translation - mid_l).norm() == 0.0);
    // equal length, opposite sides
    CHECK(pair.translation.norm() == doctest::Approx(2.0));
    CHECK(pair.elem_left != pair.elem_right);
  }
  CHECK(covered.size() == keys.size());
  for (const auto& k : keys) CHECK(covered.count(k) == 1);
}

TEST_CASE("element diameters are the longest edge") {
  const Mesh mesh = build_uniform_mesh(0.0, 1.0, 2, 2);
  // cell 0.5 x 0.5, diagonal sqrt(0.5)
  for (Index e = 0; e < mesh.n_elements(); ++e)
    CHECK(mesh.element_diameters[e] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("invalid construction requests are rejected") {
  CHECK_THROWS_AS(build_uniform_mesh(1.0, 1.0, 4, 4), ConfigError);
  CHECK_THROWS_AS(build_uniform_mesh(2.0, 1.0, 4, 4), ConfigError);
  CHECK_THROWS_AS(build_uniform_mesh(0.0, 1.0, 0, 4), ConfigError);
  CHECK_THROWS_AS(build_uniform_mesh(0.0, 1.0, 4, 0), ConfigError);
}
