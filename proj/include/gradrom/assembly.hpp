#pragma once

#include <array>
#include <vector>

#include "gradrom/dg_space.hpp"
#include "gradrom/types.hpp"

namespace gradrom {

struct QuadratureInfo {
  int volume_degree = 0;    // mass/stiffness volume terms
  int reaction_degree = 0;  // cubic reactions and potentials
  int edge_degree = 0;
};

// Sparse operators of the SIPG discretization. The mass matrix is block
// diagonal and SPD; the stiffness matrix contains volume, interior-edge and
// periodic-edge terms, is symmetric, and annihilates global constants.
struct AssembledOperators {
  SparseMatrix mass;
  SparseMatrix stiffness;
  double kappa = 0.0;
  QuadratureInfo quadrature;
};

// Standard choice: comfortably above the SIPG coercivity threshold.
inline double default_penalty(int q) { return 10.0 * q * q; }

SparseMatrix assemble_mass(const DGSpace& space);
SparseMatrix assemble_stiffness(const DGSpace& space, double kappa);
AssembledOperators assemble_operators(const DGSpace& space, double kappa);

inline double mass_weighted_sq(const SparseMatrix& mass, const Vector& x) {
  return x.dot(mass * x);
}

// Two-point Gauss rule on [0,1]; exact for the cubic xi-integrands of the
// averaged vector field.
inline const std::array<std::array<double, 2>, 2>& avf_xi_rule() {
  static const std::array<std::array<double, 2>, 2> rule = {{
      {0.5 - 0.28867513459481288225457439025098, 0.5},
      {0.5 + 0.28867513459481288225457439025098, 0.5},
  }};
  return rule;
}

// A Reaction bundles the pure (cubic) parts of a two-component reaction and
// their partial derivatives:
//   double f1(u, v), f2(u, v);
//   void d1(u, v, double& du, double& dv);   derivatives of f1
//   void d2(u, v, double& du, double& dv);
//   static constexpr bool has_second;        false if f2 == 0
//
// Values at the reaction-rule points of one element; all pointers optional.
// detail weight w includes the quadrature weight times det J.

template <class Reaction>
void element_reaction(const DGSpace& space, const Reaction& f, Index e,
                      const Vector& u_loc, const Vector& v_loc, Vector* b1, Vector* b2,
                      Matrix* j11, Matrix* j12, Matrix* j21, Matrix* j22) {
  const Matrix& shapes = space.shapes_reaction();
  const Vector& wts = space.reaction_rule().weights;
  const double det = space.geometry(e).det;
  const Index nl = space.n_local();
  if (b1) b1->setZero(nl);
  if (b2) b2->setZero(nl);
  if (j11) j11->setZero(nl, nl);
  if (j12) j12->setZero(nl, nl);
  if (j21) j21->setZero(nl, nl);
  if (j22) j22->setZero(nl, nl);
  for (Index p = 0; p < shapes.rows(); ++p) {
    const double u = shapes.row(p).dot(u_loc);
    const double v = shapes.row(p).dot(v_loc);
    const double w = wts[p] * det;
    const auto phi = shapes.row(p).transpose();
    if (b1) *b1 += (w * f.f1(u, v)) * phi;
    if (b2 && Reaction::has_second) *b2 += (w * f.f2(u, v)) * phi;
    if (j11 || j12) {
      double du = 0.0, dv = 0.0;
      f.d1(u, v, du, dv);
      if (j11) *j11 += (w * du) * (phi * phi.transpose());
      if (j12) *j12 += (w * dv) * (phi * phi.transpose());
    }
    if ((j21 || j22) && Reaction::has_second) {
      double du = 0.0, dv = 0.0;
      f.d2(u, v, du, dv);
      if (j21) *j21 += (w * du) * (phi * phi.transpose());
      if (j22) *j22 += (w * dv) * (phi * phi.transpose());
    }
  }
}

// AVF variant: values are int_0^1 f(xi (b) + (1-xi) (a)) dxi, and the
// derivative blocks are taken with respect to the b-state, i.e.
// int_0^1 xi f'(...) dxi. Exact for cubic reactions.
template <class Reaction>
void element_reaction_avf(const DGSpace& space, const Reaction& f, Index e,
                          const Vector& ua_loc, const Vector& va_loc, const Vector& ub_loc,
                          const Vector& vb_loc, Vector* b1, Vector* b2, Matrix* j11, Matrix* j12,
                          Matrix* j21, Matrix* j22) {
  const Matrix& shapes = space.shapes_reaction();
  const Vector& wts = space.reaction_rule().weights;
  const double det = space.geometry(e).det;
  const Index nl = space.n_local();
  if (b1) b1->setZero(nl);
  if (b2) b2->setZero(nl);
  if (j11) j11->setZero(nl, nl);
  if (j12) j12->setZero(nl, nl);
  if (j21) j21->setZero(nl, nl);
  if (j22) j22->setZero(nl, nl);
  for (Index p = 0; p < shapes.rows(); ++p) {
    const double ua = shapes.row(p).dot(ua_loc), ub = shapes.row(p).dot(ub_loc);
    const double va = shapes.row(p).dot(va_loc), vb = shapes.row(p).dot(vb_loc);
    const double w = wts[p] * det;
    const auto phi = shapes.row(p).transpose();
    for (const auto& [xi, wxi] : avf_xi_rule()) {
      const double u = xi * ub + (1.0 - xi) * ua;
      const double v = xi * vb + (1.0 - xi) * va;
      if (b1) *b1 += (w * wxi * f.f1(u, v)) * phi;
      if (b2 && Reaction::has_second) *b2 += (w * wxi * f.f2(u, v)) * phi;
      if (j11 || j12) {
        double du = 0.0, dv = 0.0;
        f.d1(u, v, du, dv);
        if (j11) *j11 += (w * wxi * xi * du) * (phi * phi.transpose());
        if (j12) *j12 += (w * wxi * xi * dv) * (phi * phi.transpose());
      }
      if ((j21 || j22) && Reaction::has_second) {
        double du = 0.0, dv = 0.0;
        f.d2(u, v, du, dv);
        if (j21) *j21 += (w * wxi * xi * du) * (phi * phi.transpose());
        if (j22) *j22 += (w * wxi * xi * dv) * (phi * phi.transpose());
      }
    }
  }
}

namespace detail {
template <class F>
struct ScalarReaction {
  const F& fn;
  static constexpr bool has_second = false;
  double f1(double a, double b) const { return fn(a, b); }
  double f2(double, double) const { return 0.0; }
  void d1(double, double, double&, double&) const {}
  void d2(double, double, double&, double&) const {}
};
}  // namespace detail

// Load vector b_j = sum_K int_K f(u_h, v_h) phi_j for a scalar integrand.
template <class F>
Vector assemble_nonlinear(const DGSpace& space, F&& f, const Vector& u, const Vector& v) {
  if (u.size() != space.dim() || v.size() != space.dim())
    throw NumericsError("assemble_nonlinear: coefficient length mismatch");
  detail::ScalarReaction<std::decay_t<F>> wrap{f};
  Vector b = Vector::Zero(space.dim());
  Vector local;
  const Index nl = space.n_local();
  for (Index e = 0; e < space.n_elements(); ++e) {
    element_reaction(space, wrap, e, u.segment(e * nl, nl), v.segment(e * nl, nl), &local,
                     nullptr, nullptr, nullptr, nullptr, nullptr);
    b.segment(e * nl, nl) += local;
  }
  return b;
}

// Block-diagonal Jacobian J_ij = sum_K int_K c(u_h, v_h) phi_j phi_i with
// c one partial derivative of the reaction.
template <class C>
SparseMatrix assemble_nonlinear_jacobian(const DGSpace& space, C&& c, const Vector& u,
                                         const Vector& v) {
  if (u.size() != space.dim() || v.size() != space.dim())
    throw NumericsError("assemble_nonlinear_jacobian: coefficient length mismatch");
  const Matrix& shapes = space.shapes_reaction();
  const Vector& wts = space.reaction_rule().weights;
  const Index nl = space.n_local();
  std::vector<Triplet> triplets;
  triplets.reserve(space.n_elements() * nl * nl);
  Matrix block(nl, nl);
  for (Index e = 0; e < space.n_elements(); ++e) {
    block.setZero();
    const double det = space.geometry(e).det;
    for (Index p = 0; p < shapes.rows(); ++p) {
      const double uv = shapes.row(p).dot(u.segment(e * nl, nl));
      const double vv = shapes.row(p).dot(v.segment(e * nl, nl));
      const auto phi = shapes.row(p).transpose();
      block += (wts[p] * det * c(uv, vv)) * (phi * phi.transpose());
    }
    for (Index i = 0; i < nl; ++i)
      for (Index j = 0; j < nl; ++j)
        triplets.emplace_back(space.dof(e, i), space.dof(e, j), block(i, j));
  }
  SparseMatrix jac(space.dim(), space.dim());
  jac.setFromTriplets(triplets.begin(), triplets.end());
  return jac;
}

// int_Omega F(u_h, v_h) with the reaction-degree rule.
template <class F>
double integrate_potential(const DGSpace& space, F&& potential, const Vector& u,
                           const Vector& v) {
  if (u.size() != space.dim() || v.size() != space.dim())
    throw NumericsError("integrate_potential: coefficient length mismatch");
  const Matrix& shapes = space.shapes_reaction();
  const Vector& wts = space.reaction_rule().weights;
  const Index nl = space.n_local();
  double total = 0.0;
  for (Index e = 0; e < space.n_elements(); ++e) {
    const double det = space.geometry(e).det;
    for (Index p = 0; p < shapes.rows(); ++p) {
      const double uv = shapes.row(p).dot(u.segment(e * nl, nl));
      const double vv = shapes.row(p).dot(v.segment(e * nl, nl));
      total += wts[p] * det * potential(uv, vv);
    }
  }
  return total;
}

}  // namespace gradrom
