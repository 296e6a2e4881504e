#include "gradrom/models.hpp"

#include "gradrom/rng.hpp"

namespace gradrom {

double evaluate_energy(const ModelSpec& model, const DGSpace& space,
                       const AssembledOperators& ops, const Vector& u, const Vector& v) {
  if (u.size() != space.dim() || v.size() != space.dim())
    throw NumericsError("energy: coefficient length mismatch");
  const double pot = integrate_potential(
      space, [&model](double a, double b) { return model.potential(a, b); }, u, v);
  if (model.kind == ModelKind::rgl)
    return 0.5 * u.dot(ops.stiffness * u) + 0.5 * v.dot(ops.stiffness * v) - pot;
  return -u.dot(ops.stiffness * v) - pot;
}

std::pair<Vector, Vector> initial_condition(const ModelSpec& model, const DGSpace& space,
                                            const AssembledOperators& ops, std::uint64_t seed) {
  Rng rng(seed);
  const Index n = space.dim();
  Vector u0(n);
  if (model.kind == ModelKind::rgl) {
    for (Index i = 0; i < n; ++i) u0[i] = 2.0 + rng.uniform01();
    return {u0, u0};
  }
  for (Index i = 0; i < n; ++i) u0[i] = rng.uniform(-5e-5, 5e-5);
  Eigen::SimplicialLLT<SparseMatrix> llt(ops.mass);
  if (llt.info() != Eigen::Success) throw NumericsError("initial condition: mass factorization failed");
  Vector v0 = llt.solve((ops.mass - ops.stiffness) * u0);
  return {u0, v0};
}

namespace {

// AVF reaction data for one Newton iteration: load vectors and the negated
// derivative blocks entering the Newton matrix.
template <class Reaction>
void assemble_reaction_data(const DGSpace& space, const Reaction& f, const Vector& ua,
                            const Vector& va, const Vector& ub, const Vector& vb, Vector* b1,
                            Vector* b2, std::vector<Matrix>* c11, std::vector<Matrix>* c12,
                            std::vector<Matrix>* c22) {
  const Index nl = space.n_local();
  if (b1) b1->setZero(space.dim());
  if (b2) b2->setZero(space.dim());
  Vector ua_loc(nl), va_loc(nl), ub_loc(nl), vb_loc(nl), eb1(nl), eb2(nl);
  Matrix j11(nl, nl), j12(nl, nl), j22(nl, nl);
  for (Index e = 0; e < space.n_elements(); ++e) {
    ua_loc = ua.segment(e * nl, nl);
    va_loc = va.segment(e * nl, nl);
    ub_loc = ub.segment(e * nl, nl);
    vb_loc = vb.segment(e * nl, nl);
    element_reaction_avf(space, f, e, ua_loc, va_loc, ub_loc, vb_loc, b1 ? &eb1 : nullptr,
                         b2 ? &eb2 : nullptr, c11 ? &j11 : nullptr, c12 ? &j12 : nullptr,
                         nullptr, c22 ? &j22 : nullptr);
    if (b1) b1->segment(e * nl, nl) = eb1;
    if (b2) b2->segment(e * nl, nl) = eb2;
    if (c11) (*c11)[e] = -j11;
    if (c12) (*c12)[e] = -j12;
    if (c22) (*c22)[e] = -j22;
  }
}

void apply_blocks(const std::vector<Matrix>& blocks, const Vector& x, Vector& y, Index nl) {
  for (std::size_t e = 0; e < blocks.size(); ++e)
    y.segment(e * nl, nl).noalias() += blocks[e] * x.segment(e * nl, nl);
}

void block_triplets(const std::vector<Matrix>& blocks, Index nl, Index row0, Index col0,
                    std::vector<Triplet>& out) {
  for (std::size_t e = 0; e < blocks.size(); ++e)
    for (Index i = 0; i < nl; ++i)
      for (Index j = 0; j < nl; ++j)
        out.emplace_back(row0 + e * nl + i, col0 + e * nl + j, blocks[e](i, j));
}

SparseMatrix block_diagonal_inverse(const DGSpace& space, const SparseMatrix& mass) {
  const Index nl = space.n_local();
  std::vector<Triplet> triplets;
  triplets.reserve(space.n_elements() * nl * nl);
  Matrix block(nl, nl);
  for (Index e = 0; e < space.n_elements(); ++e) {
    for (Index i = 0; i < nl; ++i)
      for (Index j = 0; j < nl; ++j)
        block(i, j) = mass.coeff(space.dof(e, i), space.dof(e, j));
    const Matrix inv = block.inverse();
    for (Index i = 0; i < nl; ++i)
      for (Index j = 0; j < nl; ++j)
        triplets.emplace_back(space.dof(e, i), space.dof(e, j), inv(i, j));
  }
  SparseMatrix result(space.dim(), space.dim());
  result.setFromTriplets(triplets.begin(), triplets.end());
  return result;
}

}  // namespace

FomSystem::FomSystem(const DGSpace& space, const AssembledOperators& ops, ModelSpec model,
                     SolverConfig solver)
    : space_(&space), ops_(&ops), model_(model), solver_(solver) {}

void FomSystem::prepare(double dt) {
  if (dt == dt_) return;
  if (dt == 0.0) throw ConfigError("fom: dt must be nonzero");
  dt_ = dt;
  prepare_dt(dt);
}

double FomSystem::component_norm2(const Vector& x, int comp) const {
  const Index n = space_->dim();
  return mass_weighted_sq(ops_->mass, comp == 0 ? x.head(n) : x.tail(n));
}

double FomSystem::component_diff_norm2(const Vector& x, const Vector& y, int comp) const {
  const Index n = space_->dim();
  const Vector d = comp == 0 ? (x.head(n) - y.head(n)).eval() : (x.tail(n) - y.tail(n)).eval();
  return mass_weighted_sq(ops_->mass, d);
}

double FomSystem::energy(const Vector& x) const {
  const Index n = space_->dim();
  return evaluate_energy(model_, *space_, *ops_, x.head(n), x.tail(n));
}

// ---------------------------------------------------------------------------
// RGL

RglFom::RglFom(const DGSpace& space, const AssembledOperators& ops, ModelSpec model,
               SolverConfig solver)
    : FomSystem(space, ops, model, solver) {
  c11_.resize(space.n_elements());
  c12_.resize(space.n_elements());
  c22_.resize(space.n_elements());
}

void RglFom::prepare_dt(double dt) {
  k_ = (1.0 / dt) * ops_->mass + 0.5 * (ops_->stiffness - model_.mu * ops_->mass);
  k_triplets_.clear();
  const Index n = space_->dim();
  for (Index col = 0; col < k_.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(k_, col); it; ++it) {
      k_triplets_.emplace_back(it.row(), it.col(), it.value());
      k_triplets_.emplace_back(n + it.row(), n + it.col(), it.value());
    }
  direct_analyzed_ = false;
  if (solver_.linear_solver == LinearSolverKind::frozen_pcg) {
    precond_.compute(k_);
    if (precond_.info() != Eigen::Success)
      throw NumericsError("rgl: factorization of the linear part failed");
  }
}

void RglFom::begin_step(const Vector& x_n) {
  const Index n = space_->dim();
  u_n_ = x_n.head(n);
  v_n_ = x_n.tail(n);
}

Vector RglFom::residual(const Vector& x_plus) {
  const Index n = space_->dim();
  const Vector u = x_plus.head(n), v = x_plus.tail(n);
  Vector b1, b2;
  assemble_reaction_data(*space_, RglReaction{}, u_n_, v_n_, u, v, &b1, &b2, nullptr, nullptr,
                         nullptr);
  Vector r(2 * n);
  r.head(n) = (1.0 / dt_) * (ops_->mass * (u - u_n_)) +
              0.5 * (ops_->stiffness * (u + u_n_)) -
              0.5 * model_.mu * (ops_->mass * (u + u_n_)) - b1;
  r.tail(n) = (1.0 / dt_) * (ops_->mass * (v - v_n_)) +
              0.5 * (ops_->stiffness * (v + v_n_)) -
              0.5 * model_.mu * (ops_->mass * (v + v_n_)) - b2;
  return r;
}

void RglFom::prepare_linear(const Vector& x_plus) {
  const Index n = space_->dim();
  const Vector u = x_plus.head(n), v = x_plus.tail(n);
  assemble_reaction_data(*space_, RglReaction{}, u_n_, v_n_, u, v, nullptr, nullptr, &c11_,
                         &c12_, &c22_);
  if (solver_.linear_solver != LinearSolverKind::direct) return;

  const Index nl = space_->n_local();
  std::vector<Triplet> triplets = k_triplets_;
  block_triplets(c11_, nl, 0, 0, triplets);
  block_triplets(c12_, nl, 0, n, triplets);
  block_triplets(c12_, nl, n, 0, triplets);  // symmetric cross coupling
  block_triplets(c22_, nl, n, n, triplets);
  SparseMatrix jac(2 * n, 2 * n);
  jac.setFromTriplets(triplets.begin(), triplets.end());
  if (!direct_analyzed_) {
    direct_.analyzePattern(jac);
    direct_analyzed_ = true;
  }
  direct_.factorize(jac);
  if (direct_.info() != Eigen::Success) throw NumericsError("rgl: newton factorization failed");
}

Vector RglFom::solve_linear(const Vector& r) {
  const Index n = space_->dim();
  if (solver_.linear_solver == LinearSolverKind::direct) return direct_.solve(r);

  const Index nl = space_->n_local();
  auto apply = [&](const Vector& x, Vector& y) {
    y.resize(2 * n);
    y.head(n).noalias() = k_ * x.head(n);
    y.tail(n).noalias() = k_ * x.tail(n);
    Vector yu = y.head(n), yv = y.tail(n);
    apply_blocks(c11_, x.head(n), yu, nl);
    apply_blocks(c12_, x.tail(n), yu, nl);
    apply_blocks(c12_, x.head(n), yv, nl);
    apply_blocks(c22_, x.tail(n), yv, nl);
    y.head(n) = yu;
    y.tail(n) = yv;
  };
  auto precond = [&](const Vector& rr, Vector& z) {
    z.resize(2 * n);
    z.head(n) = precond_.solve(rr.head(n));
    z.tail(n) = precond_.solve(rr.tail(n));
  };
  Vector x;
  pcg(apply, precond, r, x, solver_.linear_tol, solver_.linear_max_iters);
  return x;
}

// ---------------------------------------------------------------------------
// SH

ShFom::ShFom(const DGSpace& space, const AssembledOperators& ops, ModelSpec model,
             SolverConfig solver)
    : FomSystem(space, ops, model, solver) {
  c11_.resize(space.n_elements());
  m_inv_ = block_diagonal_inverse(space, ops.mass);
  w_ = 0.5 * (ops.mass - ops.stiffness);
}

void ShFom::prepare_dt(double dt) {
  SparseMatrix wmw = (w_ * (m_inv_ * w_)).pruned();
  s0_ = (1.0 / dt) * ops_->mass - 0.5 * model_.mu * ops_->mass + 2.0 * wmw;
  direct_analyzed_ = false;
  if (solver_.linear_solver == LinearSolverKind::frozen_pcg) {
    precond_.compute(s0_);
    if (precond_.info() != Eigen::Success)
      throw NumericsError("sh: factorization of the linear part failed");
  }
}

void ShFom::begin_step(const Vector& x_n) {
  const Index n = space_->dim();
  u_n_ = x_n.head(n);
  v_n_ = x_n.tail(n);
}

Vector ShFom::residual(const Vector& x_plus) {
  const Index n = space_->dim();
  const Vector u = x_plus.head(n), v = x_plus.tail(n);
  Vector b1;
  assemble_reaction_data(*space_, ShReaction{}, u_n_, v_n_, u, v, &b1, nullptr, nullptr, nullptr,
                         nullptr);
  Vector r(2 * n);
  r.head(n) = (1.0 / dt_) * (ops_->mass * (u - u_n_)) + w_ * (v + v_n_) -
              0.5 * model_.mu * (ops_->mass * (u + u_n_)) - b1;
  // algebraic constraint on the averaged state: (M - A) u_bar - M v_bar = 0
  r.tail(n) = w_ * (u + u_n_) - 0.5 * (ops_->mass * (v + v_n_));
  return r;
}

void ShFom::prepare_linear(const Vector& x_plus) {
  const Index n = space_->dim();
  const Vector u = x_plus.head(n), v = x_plus.tail(n);
  assemble_reaction_data(*space_, ShReaction{}, u_n_, v_n_, u, v, nullptr, nullptr, &c11_,
                         nullptr, nullptr);
  if (solver_.linear_solver != LinearSolverKind::direct) return;

  const Index nl = space_->n_local();
  std::vector<Triplet> triplets;
  triplets.reserve(s0_.nonZeros() + space_->n_elements() * nl * nl);
  for (Index col = 0; col < s0_.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(s0_, col); it; ++it)
      triplets.emplace_back(it.row(), it.col(), it.value());
  block_triplets(c11_, nl, 0, 0, triplets);
  SparseMatrix s(n, n);
  s.setFromTriplets(triplets.begin(), triplets.end());
  if (!direct_analyzed_) {
    direct_.analyzePattern(s);
    direct_analyzed_ = true;
  }
  direct_.factorize(s);
  if (direct_.info() != Eigen::Success) throw NumericsError("sh: newton factorization failed");
}

Vector ShFom::solve_linear(const Vector& r) {
  const Index n = space_->dim();
  const Index nl = space_->n_local();
  const Vector rhs = r.head(n) + 2.0 * (w_ * (m_inv_ * r.tail(n)));
  Vector du;
  if (solver_.linear_solver == LinearSolverKind::direct) {
    du = direct_.solve(rhs);
  } else {
    auto apply = [&](const Vector& x, Vector& y) {
      y.noalias() = s0_ * x;
      apply_blocks(c11_, x, y, nl);
    };
    auto precond = [&](const Vector& rr, Vector& z) { z = precond_.solve(rr); };
    pcg(apply, precond, rhs, du, solver_.linear_tol, solver_.linear_max_iters);
  }
  const Vector dv = 2.0 * (m_inv_ * (w_ * du - r.tail(n)));
  Vector d(2 * n);
  d.head(n) = du;
  d.tail(n) = dv;
  return d;
}

std::unique_ptr<FomSystem> make_fom_system(const DGSpace& space, const AssembledOperators& ops,
                                           ModelSpec model, SolverConfig solver) {
  if (model.kind == ModelKind::rgl)
    return std::make_unique<RglFom>(space, ops, model, solver);
  return std::make_unique<ShFom>(space, ops, model, solver);
}

}  // namespace gradrom
