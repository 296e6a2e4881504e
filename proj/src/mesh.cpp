#include "gradrom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace gradrom {

double Mesh::triangle_area(Index e) const {
  const Vector2 a = triangle_vertex(e, 0);
  const Vector2 b = triangle_vertex(e, 1);
  const Vector2 c = triangle_vertex(e, 2);
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

namespace {

struct EdgeUse {
  Index elem;
  Index v0, v1;  // endpoints in the element's traversal order
};

Vector2 outward_normal(const Mesh& mesh, Index elem, const Vector2& p0, const Vector2& p1) {
  const Vector2 tangent = (p1 - p0).normalized();
  Vector2 n(tangent.y(), -tangent.x());
  const Vector2 centroid =
      (mesh.triangle_vertex(elem, 0) + mesh.triangle_vertex(elem, 1) + mesh.triangle_vertex(elem, 2)) / 3.0;
  const Vector2 mid = 0.5 * (p0 + p1);
  if (n.dot(mid - centroid) < 0.0) n = -n;
  return n;
}

}  // namespace

Mesh build_uniform_mesh(double lo, double hi, Index nx, Index ny) {
  if (!(hi > lo)) throw ConfigError("mesh: domain upper bound must exceed lower bound");
  if (nx < 1 || ny < 1) throw ConfigError("mesh: subdivision counts must be at least 1");

  Mesh mesh;
  mesh.lo = lo;
  mesh.hi = hi;
  mesh.nx = nx;
  mesh.ny = ny;

  const double hx = (hi - lo) / static_cast<double>(nx);
  const double hy = (hi - lo) / static_cast<double>(ny);

  mesh.vertices.resize((nx + 1) * (ny + 1), 2);
  for (Index j = 0; j <= ny; ++j)
    for (Index i = 0; i <= nx; ++i) {
      mesh.vertices(j * (nx + 1) + i, 0) = lo + hx * static_cast<double>(i);
      mesh.vertices(j * (nx + 1) + i, 1) = lo + hy * static_cast<double>(j);
    }

  // Cell (i,j) splits along the bottom-left/top-right diagonal:
  // lower triangle (bl, br, tr), upper triangle (bl, tr, tl).
  mesh.triangles.resize(2 * nx * ny, 3);
  auto vid = [nx](Index i, Index j) { return j * (nx + 1) + i; };
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) {
      const Index cell = j * nx + i;
      mesh.triangles.row(2 * cell) << vid(i, j), vid(i + 1, j), vid(i + 1, j + 1);
      mesh.triangles.row(2 * cell + 1) << vid(i, j), vid(i + 1, j + 1), vid(i, j + 1);
    }

  mesh.element_diameters.resize(mesh.n_elements());
  for (Index e = 0; e < mesh.n_elements(); ++e) {
    double d = 0.0;
    for (int c = 0; c < 3; ++c)
      d = std::max(d, (mesh.triangle_vertex(e, c) - mesh.triangle_vertex(e, (c + 1) % 3)).norm());
    mesh.element_diameters[e] = d;
  }

  // Group element edges by sorted vertex pair.
  std::map<std::pair<Index, Index>, std::vector<EdgeUse>> by_pair;
  for (Index e = 0; e < mesh.n_elements(); ++e)
    for (int c = 0; c < 3; ++c) {
      const Index a = mesh.triangles(e, c);
      const Index b = mesh.triangles(e, (c + 1) % 3);
      by_pair[{std::min(a, b), std::max(a, b)}].push_back({e, a, b});
    }

  std::vector<EdgeUse> boundary;
  for (const auto& [key, uses] : by_pair) {
    if (uses.size() == 2) {
      MeshEdge edge;
      edge.elem_left = std::min(uses[0].elem, uses[1].elem);
      edge.elem_right = std::max(uses[0].elem, uses[1].elem);
      edge.p0 = mesh.vertices.row(key.first).transpose();
      edge.p1 = mesh.vertices.row(key.second).transpose();
      edge.length = (edge.p1 - edge.p0).norm();
      edge.normal = outward_normal(mesh, edge.elem_left, edge.p0, edge.p1);
      mesh.interior_edges.push_back(edge);
    } else if (uses.size() == 1) {
      boundary.push_back(uses[0]);
    } else {
      throw NumericsError("mesh: edge shared by more than two triangles");
    }
  }

  // Pair boundary edges with their translate on the opposite side, matching
  // translated midpoints within 1e-10 * (hi - lo).
  const double tol = 1e-10 * (hi - lo);
  const double span = hi - lo;
  std::vector<bool> used(boundary.size(), false);
  auto midpoint = [&](const EdgeUse& u) -> Vector2 {
    return 0.5 * (mesh.vertices.row(u.v0) + mesh.vertices.row(u.v1)).transpose();
  };
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    if (used[i]) continue;
    const Vector2 mid = midpoint(boundary[i]);
    Vector2 translation = Vector2::Zero();
    if (std::abs(mid.x() - lo) < tol)
      translation = Vector2(span, 0.0);
    else if (std::abs(mid.x() - hi) < tol)
      translation = Vector2(-span, 0.0);
    else if (std::abs(mid.y() - lo) < tol)
      translation = Vector2(0.0, span);
    else
      translation = Vector2(0.0, -span);

    bool matched = false;
    for (std::size_t j = 0; j < boundary.size(); ++j) {
      if (j == i || used[j]) continue;
      if ((midpoint(boundary[j]) - (mid + translation)).norm() < tol) {
        MeshEdge edge;
        edge.elem_left = boundary[i].elem;
        edge.elem_right = boundary[j].elem;
        edge.p0 = mesh.vertices.row(boundary[i].v0).transpose();
        edge.p1 = mesh.vertices.row(boundary[i].v1).transpose();
        edge.length = (edge.p1 - edge.p0).norm();
        edge.normal = outward_normal(mesh, edge.elem_left, edge.p0, edge.p1);
        edge.translation = translation;
        mesh.periodic_pairs.push_back(edge);
        used[i] = used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) throw NumericsError("mesh: unpaired periodic boundary edge");
  }

  return mesh;
}

}  // namespace gradrom
