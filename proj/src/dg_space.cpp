#include "gradrom/dg_space.hpp"

#include <Eigen/Dense>

namespace gradrom {

DGSpace::DGSpace(const Mesh& mesh, int q) : mesh_(&mesh), q_(q) {
  if (q != 1 && q != 2) throw ConfigError("dg space: polynomial degree must be 1 or 2");
  n_local_ = (q + 1) * (q + 2) / 2;

  rule_volume_ = triangle_rule(2 * q);
  rule_reaction_ = triangle_rule(4 * q);
  rule_edge_ = edge_rule(2 * q + 1);

  auto tabulate = [&](const TriangleRule& rule, Matrix& values) {
    values.resize(rule.points.rows(), n_local_);
    for (Index p = 0; p < rule.points.rows(); ++p)
      values.row(p) = shape_values(q_, rule.points.row(p).transpose()).transpose();
  };
  tabulate(rule_volume_, shapes_volume_);
  tabulate(rule_reaction_, shapes_reaction_);
  for (int d = 0; d < 2; ++d) dshapes_volume_[d].resize(rule_volume_.points.rows(), n_local_);
  for (Index p = 0; p < rule_volume_.points.rows(); ++p) {
    const Matrix g = shape_gradients(q_, rule_volume_.points.row(p).transpose());
    dshapes_volume_[0].row(p) = g.col(0).transpose();
    dshapes_volume_[1].row(p) = g.col(1).transpose();
  }

  if (q == 1) {
    ref_nodes_.resize(3, 2);
    ref_nodes_ << 0, 0, 1, 0, 0, 1;
  } else {
    ref_nodes_.resize(6, 2);
    ref_nodes_ << 0, 0, 1, 0, 0, 1, 0.5, 0, 0.5, 0.5, 0, 0.5;
  }

  geometry_.resize(mesh.n_elements());
  for (Index e = 0; e < mesh.n_elements(); ++e) {
    ElementGeometry& g = geometry_[e];
    const Vector2 v0 = mesh.triangle_vertex(e, 0);
    g.origin = v0;
    g.jacobian.col(0) = mesh.triangle_vertex(e, 1) - v0;
    g.jacobian.col(1) = mesh.triangle_vertex(e, 2) - v0;
    g.det = g.jacobian.determinant();
    if (g.det <= 0.0) throw NumericsError("dg space: triangle is not counter-clockwise");
    g.inv_jacobian = g.jacobian.inverse();
  }
}

Matrix DGSpace::node_coordinates() const {
  Matrix coords(dim(), 2);
  for (Index e = 0; e < n_elements(); ++e)
    for (Index i = 0; i < n_local_; ++i)
      coords.row(dof(e, i)) = to_physical(e, ref_nodes_.row(i).transpose()).transpose();
  return coords;
}

Vector DGSpace::shape_values(int q, const Vector2& ref) {
  const double x = ref.x(), y = ref.y();
  const double l0 = 1.0 - x - y, l1 = x, l2 = y;
  if (q == 1) {
    Vector v(3);
    v << l0, l1, l2;
    return v;
  }
  Vector v(6);
  v << l0 * (2.0 * l0 - 1.0), l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0),  //
      4.0 * l0 * l1, 4.0 * l1 * l2, 4.0 * l2 * l0;
  return v;
}

Matrix DGSpace::shape_gradients(int q, const Vector2& ref) {
  const double x = ref.x(), y = ref.y();
  const double l0 = 1.0 - x - y, l1 = x, l2 = y;
  if (q == 1) {
    Matrix g(3, 2);
    g << -1, -1, 1, 0, 0, 1;
    return g;
  }
  // Barycentric gradients: grad l0 = (-1,-1), grad l1 = (1,0), grad l2 = (0,1).
  Matrix g(6, 2);
  g.row(0) << -(4.0 * l0 - 1.0), -(4.0 * l0 - 1.0);
  g.row(1) << 4.0 * l1 - 1.0, 0.0;
  g.row(2) << 0.0, 4.0 * l2 - 1.0;
  g.row(3) << 4.0 * (l0 - l1), -4.0 * l1;
  g.row(4) << 4.0 * l2, 4.0 * l1;
  g.row(5) << -4.0 * l2, 4.0 * (l0 - l2);
  return g;
}

}  // namespace gradrom
