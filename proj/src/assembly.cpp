#include "gradrom/assembly.hpp"

namespace gradrom {

SparseMatrix assemble_mass(const DGSpace& space) {
  const Matrix& shapes = space.shapes_volume();
  const Vector& wts = space.volume_rule().weights;
  const Index nl = space.n_local();
  std::vector<Triplet> triplets;
  triplets.reserve(space.n_elements() * nl * nl);
  Matrix block(nl, nl);
  for (Index e = 0; e < space.n_elements(); ++e) {
    block.setZero();
    const double det = space.geometry(e).det;
    for (Index p = 0; p < shapes.rows(); ++p) {
      const auto phi = shapes.row(p).transpose();
      block += (wts[p] * det) * (phi * phi.transpose());
    }
    for (Index i = 0; i < nl; ++i)
      for (Index j = 0; j < nl; ++j)
        triplets.emplace_back(space.dof(e, i), space.dof(e, j), block(i, j));
  }
  SparseMatrix mass(space.dim(), space.dim());
  mass.setFromTriplets(triplets.begin(), triplets.end());
  return mass;
}

namespace {

// Consistency, symmetry and penalty terms of one edge shared by elements
// (left, right). Point values on the right side are taken at the translated
// coordinates, which makes periodic edges identical to interior ones.
void assemble_edge(const DGSpace& space, const MeshEdge& edge, double kappa,
                   std::vector<Triplet>& triplets) {
  const EdgeRule& rule = space.edge_quadrature();
  const Index nl = space.n_local();
  const int q = space.degree();
  Matrix local = Matrix::Zero(2 * nl, 2 * nl);

  for (Index p = 0; p < rule.points.size(); ++p) {
    const double s = rule.points[p];
    const double w = rule.weights[p] * edge.length;
    const Vector2 x_left = edge.p0 + s * (edge.p1 - edge.p0);
    const Vector2 x_right = x_left + edge.translation;

    const Vector2 ref_l = space.to_reference(edge.elem_left, x_left);
    const Vector2 ref_r = space.to_reference(edge.elem_right, x_right);

    // side-stacked values: entry i in [0,nl) lives on the left element with
    // jump sign +1, entry nl+i on the right element with jump sign -1
    Vector vals(2 * nl);
    Vector grad_n(2 * nl);
    vals.head(nl) = DGSpace::shape_values(q, ref_l);
    vals.tail(nl) = DGSpace::shape_values(q, ref_r);
    grad_n.head(nl) = (space.physical_gradients(edge.elem_left, ref_l) * edge.normal);
    grad_n.tail(nl) = (space.physical_gradients(edge.elem_right, ref_r) * edge.normal);

    Vector jump(2 * nl), avg(2 * nl);
    jump.head(nl) = vals.head(nl);
    jump.tail(nl) = -vals.tail(nl);
    avg = 0.5 * grad_n;

    local += (w * kappa / edge.length) * (jump * jump.transpose());
    local -= w * (avg * jump.transpose() + jump * avg.transpose());
  }

  auto dof_of = [&](Index k) {
    return k < nl ? space.dof(edge.elem_left, k) : space.dof(edge.elem_right, k - nl);
  };
  for (Index i = 0; i < 2 * nl; ++i)
    for (Index j = 0; j < 2 * nl; ++j)
      triplets.emplace_back(dof_of(i), dof_of(j), local(i, j));
}

}  // namespace

SparseMatrix assemble_stiffness(const DGSpace& space, double kappa) {
  if (kappa <= 0.0) throw ConfigError("stiffness: penalty parameter must be positive");
  const Index nl = space.n_local();
  std::vector<Triplet> triplets;
  triplets.reserve(space.n_elements() * nl * nl * 5);

  // volume gradients
  const Vector& wts = space.volume_rule().weights;
  Matrix block(nl, nl);
  for (Index e = 0; e < space.n_elements(); ++e) {
    block.setZero();
    const double det = space.geometry(e).det;
    const Matrix2 invJt = space.inv_jacobian_t(e);
    for (Index p = 0; p < wts.size(); ++p) {
      Matrix grad(nl, 2);
      grad.col(0) = space.dshapes_volume(0).row(p).transpose();
      grad.col(1) = space.dshapes_volume(1).row(p).transpose();
      const Matrix phys = grad * invJt.transpose();
      block += (wts[p] * det) * (phys * phys.transpose());
    }
    for (Index i = 0; i < nl; ++i)
      for (Index j = 0; j < nl; ++j)
        triplets.emplace_back(space.dof(e, i), space.dof(e, j), block(i, j));
  }

  for (const MeshEdge& edge : space.mesh().interior_edges)
    assemble_edge(space, edge, kappa, triplets);
  for (const MeshEdge& edge : space.mesh().periodic_pairs)
    assemble_edge(space, edge, kappa, triplets);

  SparseMatrix a(space.dim(), space.dim());
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

AssembledOperators assemble_operators(const DGSpace& space, double kappa) {
  AssembledOperators ops;
  ops.mass = assemble_mass(space);
  ops.stiffness = assemble_stiffness(space, kappa);
  ops.kappa = kappa;
  ops.quadrature = {space.volume_rule().degree, space.reaction_rule().degree,
                    space.edge_quadrature().degree};
  return ops;
}

}  // namespace gradrom
