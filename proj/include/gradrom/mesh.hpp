#pragma once

#include <vector>

#include "gradrom/types.hpp"

namespace gradrom {

// One integration edge. Interior edges join two triangles directly
// (translation == 0); periodic edges join a boundary edge to its translate on
// the opposite side of the square, so points on the owning (left) side map to
// the partner element's frame via `translation`.
struct MeshEdge {
  Index elem_left = -1;
  Index elem_right = -1;
  Vector2 p0 = Vector2::Zero();  // endpoints on the left side
  Vector2 p1 = Vector2::Zero();
  double length = 0.0;
  Vector2 normal = Vector2::Zero();  // unit, pointing out of elem_left
  Vector2 translation = Vector2::Zero();
};

// Uniform triangulation of the square [lo,hi]^2 with periodic edge pairing.
// Each grid cell is split along its bottom-left/top-right diagonal, so an
// nx x ny grid has 2*nx*ny counter-clockwise triangles.
struct Mesh {
  double lo = 0.0;
  double hi = 1.0;
  Index nx = 0;
  Index ny = 0;

  Matrix vertices;                                  // n_vertices x 2
  Eigen::Matrix<Index, Eigen::Dynamic, 3> triangles;
  std::vector<MeshEdge> interior_edges;
  std::vector<MeshEdge> periodic_pairs;  // one entry per boundary edge pair
  Vector element_diameters;

  Index n_elements() const { return triangles.rows(); }
  double extent() const { return hi - lo; }
  double domain_area() const { return extent() * extent(); }
  double triangle_area(Index e) const;
  Vector2 triangle_vertex(Index e, int corner) const {
    return vertices.row(triangles(e, corner)).transpose();
  }
};

Mesh build_uniform_mesh(double lo, double hi, Index nx, Index ny);

}  // namespace gradrom
