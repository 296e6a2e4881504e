#pragma once

#include <vector>

#include "gradrom/mesh.hpp"
#include "gradrom/quadrature.hpp"
#include "gradrom/types.hpp"

namespace gradrom {

// Discontinuous nodal Lagrange space of degree q (1 or 2) on a triangulation.
// Every basis function is supported on exactly one element; the global
// coefficient layout is element-major: dof(e, i) = e * n_local + i.
class DGSpace {
 public:
  DGSpace(const Mesh& mesh, int q);

  const Mesh& mesh() const { return *mesh_; }
  int degree() const { return q_; }
  Index n_local() const { return n_local_; }
  Index n_elements() const { return mesh_->n_elements(); }
  Index dim() const { return n_local_ * n_elements(); }

  Index dof(Index elem, Index local) const { return elem * n_local_ + local; }

  // Quadrature: degree 2q for mass/stiffness volume terms, 4q for cubic
  // reaction and potential terms, 2q+1 on edges.
  const TriangleRule& volume_rule() const { return rule_volume_; }
  const TriangleRule& reaction_rule() const { return rule_reaction_; }
  const EdgeRule& edge_quadrature() const { return rule_edge_; }

  // Shape values/gradients cached at the rule points (reference element).
  const Matrix& shapes_volume() const { return shapes_volume_; }
  const Matrix& shapes_reaction() const { return shapes_reaction_; }
  // d/dxi and d/deta of every shape at the volume rule points.
  const Matrix& dshapes_volume(int d) const { return dshapes_volume_[d]; }

  struct ElementGeometry {
    Vector2 origin;        // first vertex
    Matrix2 jacobian;      // columns v1-v0, v2-v0
    Matrix2 inv_jacobian;  // reference <- physical
    double det = 0.0;      // 2 * area
  };
  const ElementGeometry& geometry(Index e) const { return geometry_[e]; }

  Vector2 to_physical(Index e, const Vector2& ref) const {
    return geometry_[e].origin + geometry_[e].jacobian * ref;
  }
  Vector2 to_reference(Index e, const Vector2& phys) const {
    return geometry_[e].inv_jacobian * (phys - geometry_[e].origin);
  }

  // Reference nodes of the nodal basis and the physical coordinates of every
  // global degree of freedom (shared mesh vertices appear once per element).
  const Matrix& reference_nodes() const { return ref_nodes_; }
  Matrix node_coordinates() const;

  static Vector shape_values(int q, const Vector2& ref);
  static Matrix shape_gradients(int q, const Vector2& ref);  // n_local x 2, reference

  // Physical gradients of all shapes of element e at a reference point.
  Matrix physical_gradients(Index e, const Vector2& ref) const {
    return shape_gradients(q_, ref) * inv_jacobian_t(e).transpose();
  }
  Matrix2 inv_jacobian_t(Index e) const { return geometry_[e].inv_jacobian.transpose(); }

 private:
  const Mesh* mesh_;
  int q_;
  Index n_local_;
  TriangleRule rule_volume_, rule_reaction_;
  EdgeRule rule_edge_;
  Matrix shapes_volume_, shapes_reaction_;
  Matrix dshapes_volume_[2];
  Matrix ref_nodes_;
  std::vector<ElementGeometry> geometry_;
};

}  // namespace gradrom
