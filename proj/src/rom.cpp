#include "gradrom/rom.hpp"

#include <algorithm>
#include <chrono>

namespace gradrom {

namespace {

template <class Reaction>
void element_rows(const DGSpace& space, const Reaction& f, Index e, const Vector& ua,
                  const Vector& va, const Vector& ub, const Vector& vb, bool avf, Vector* b1,
                  Vector* b2, Matrix* j11, Matrix* j12, Matrix* j21, Matrix* j22) {
  if (avf)
    element_reaction_avf(space, f, e, ua, va, ub, vb, b1, b2, j11, j12, j21, j22);
  else
    element_reaction(space, f, e, ub, vb, b1, b2, j11, j12, j21, j22);
}

}  // namespace

ReducedSystem::ReducedSystem(const DGSpace& space, const AssembledOperators& ops,
                             ModelSpec model, RomMode mode, PodBasis pod_u, PodBasis pod_v,
                             std::optional<DeimOperator> deim1,
                             std::optional<DeimOperator> deim2, SolverConfig solver)
    : space_(&space),
      ops_(&ops),
      model_(model),
      mode_(mode),
      pod_u_(std::move(pod_u)),
      pod_v_(std::move(pod_v)),
      deim1_(std::move(deim1)),
      deim2_(std::move(deim2)),
      solver_(solver) {
  const auto t0 = std::chrono::steady_clock::now();
  k_u_ = pod_u_.psi.cols();
  k_v_ = pod_v_.psi.cols();
  if (pod_u_.psi.rows() != space.dim() || pod_v_.psi.rows() != space.dim())
    throw NumericsError("rom: basis row count does not match the dG space");
  if (mode_ == RomMode::deim) {
    if (!deim1_) throw NumericsError("rom: deim mode requires a deim operator");
    if (model_.kind == ModelKind::rgl && !deim2_)
      throw NumericsError("rom: rgl deim mode requires both deim operators");
    if (deim1_->projector.rows() != k_u_)
      throw NumericsError("rom: deim projector does not match the state basis");
    if (deim2_ && deim2_->projector.rows() != k_v_)
      throw NumericsError("rom: second deim projector does not match the state basis");
  }

  const SparseMatrix& a = ops.stiffness;
  const SparseMatrix& m = ops.mass;
  if (model_.kind == ModelKind::rgl) {
    ar_u_ = pod_u_.psi.transpose() * (a * pod_u_.psi);
    ar_v_ = pod_v_.psi.transpose() * (a * pod_v_.psi);
  } else {
    ar_uv_ = pod_u_.psi.transpose() * (a * pod_v_.psi);
    mr_uv_ = pod_u_.psi.transpose() * (m * pod_v_.psi);
    // constraint tested against the v-basis so the algebraic block is square
    cvu_ = pod_v_.psi.transpose() * ((m - a) * pod_u_.psi);
  }

  if (mode_ == RomMode::deim) {
    const Index nl = space.n_local();
    std::vector<Index> elems;
    auto gather = [&](const DeimOperator& op) {
      for (Index g : op.indices) elems.push_back(g / nl);
    };
    gather(*deim1_);
    if (deim2_) gather(*deim2_);
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    deim_elements_ = elems;
    deim_rows_.assign(2, {});
    auto fill = [&](const DeimOperator& op, Index slot) {
      for (std::size_t i = 0; i < op.indices.size(); ++i)
        deim_rows_[slot].push_back({op.indices[i], static_cast<Index>(i)});
    };
    fill(*deim1_, 0);
    if (deim2_) fill(*deim2_, 1);
  }
  offline_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void ReducedSystem::prepare(double dt) {
  if (dt == 0.0) throw ConfigError("rom: dt must be nonzero");
  dt_ = dt;
}

void ReducedSystem::begin_step(const Vector& x_n) {
  ur_n_ = x_n.head(k_u_);
  vr_n_ = x_n.tail(k_v_);
  if (mode_ == RomMode::galerkin) {
    u_full_n_ = pod_u_.psi * ur_n_;
    v_full_n_ = pod_v_.psi * vr_n_;
  }
}

void ReducedSystem::assemble_reduced_reaction(const Vector& ur_a, const Vector& vr_a,
                                              const Vector& ur_b, const Vector& vr_b, bool avf,
                                              Vector* n1, Vector* n2, Matrix* j11, Matrix* j12,
                                              Matrix* j21, Matrix* j22) {
  const Index nl = space_->n_local();
  const bool second = model_.kind == ModelKind::rgl;
  last_rows_assembled_ = 0;

  if (n1) n1->setZero(k_u_);
  if (n2) n2->setZero(k_v_);
  if (j11) j11->setZero(k_u_, k_u_);
  if (j12) j12->setZero(k_u_, k_v_);
  if (j21) j21->setZero(k_v_, k_u_);
  if (j22) j22->setZero(k_v_, k_v_);

  Vector eb1(nl), eb2(nl);
  Matrix ej11(nl, nl), ej12(nl, nl), ej21(nl, nl), ej22(nl, nl);
  Vector ua(nl), va(nl), ub(nl), vb(nl);

  auto kernel = [&](Index e) {
    if (mode_ == RomMode::galerkin && avf) {
      ua = u_full_n_.segment(e * nl, nl);
      va = v_full_n_.segment(e * nl, nl);
    } else {
      ua = pod_u_.psi.middleRows(e * nl, nl) * ur_a;
      va = pod_v_.psi.middleRows(e * nl, nl) * vr_a;
    }
    ub = pod_u_.psi.middleRows(e * nl, nl) * ur_b;
    vb = pod_v_.psi.middleRows(e * nl, nl) * vr_b;
    if (second)
      element_rows(*space_, RglReaction{}, e, ua, va, ub, vb, avf, n1 ? &eb1 : nullptr,
                   n2 ? &eb2 : nullptr, j11 ? &ej11 : nullptr, j12 ? &ej12 : nullptr,
                   j21 ? &ej21 : nullptr, j22 ? &ej22 : nullptr);
    else
      element_rows(*space_, ShReaction{}, e, ua, va, ub, vb, avf, n1 ? &eb1 : nullptr, nullptr,
                   j11 ? &ej11 : nullptr, nullptr, nullptr, nullptr);
  };

  if (mode_ == RomMode::galerkin) {
    for (Index e = 0; e < space_->n_elements(); ++e) {
      kernel(e);
      const auto pu = pod_u_.psi.middleRows(e * nl, nl);
      const auto pv = pod_v_.psi.middleRows(e * nl, nl);
      if (n1) n1->noalias() += pu.transpose() * eb1;
      if (n2 && second) n2->noalias() += pv.transpose() * eb2;
      if (j11) j11->noalias() += pu.transpose() * ej11 * pu;
      if (j12) j12->noalias() += pu.transpose() * ej12 * pv;
      if (j21 && second) j21->noalias() += pv.transpose() * ej21 * pu;
      if (j22 && second) j22->noalias() += pv.transpose() * ej22 * pv;
    }
    return;
  }

  // deim mode: only the rows at the interpolation indices are assembled
  const Index m1 = deim1_->m;
  const Index m2 = second && deim2_ ? deim2_->m : 0;
  Vector r1 = Vector::Zero(m1), r2 = Vector::Zero(m2);
  Matrix jr1u(m1, k_u_), jr1v(m1, k_v_), jr2u(m2, k_u_), jr2v(m2, k_v_);
  jr1u.setZero();
  jr1v.setZero();
  jr2u.setZero();
  jr2v.setZero();

  for (Index e : deim_elements_) {
    kernel(e);
    const auto pu = pod_u_.psi.middleRows(e * nl, nl);
    const auto pv = pod_v_.psi.middleRows(e * nl, nl);
    for (const auto& [g, i] : deim_rows_[0]) {
      if (g / nl != e) continue;
      const Index l = g % nl;
      ++last_rows_assembled_;
      if (n1) r1[i] = eb1[l];
      if (j11) jr1u.row(i) = ej11.row(l) * pu;
      if (j12) jr1v.row(i) = ej12.row(l) * pv;
    }
    if (second && deim2_)
      for (const auto& [g, i] : deim_rows_[1]) {
        if (g / nl != e) continue;
        const Index l = g % nl;
        ++last_rows_assembled_;
        if (n2) r2[i] = eb2[l];
        if (j21) jr2u.row(i) = ej21.row(l) * pu;
        if (j22) jr2v.row(i) = ej22.row(l) * pv;
      }
  }
  if (n1) n1->noalias() = deim1_->projector * r1;
  if (j11) j11->noalias() = deim1_->projector * jr1u;
  if (j12) j12->noalias() = deim1_->projector * jr1v;
  if (second && deim2_) {
    if (n2) n2->noalias() = deim2_->projector * r2;
    if (j21) j21->noalias() = deim2_->projector * jr2u;
    if (j22) j22->noalias() = deim2_->projector * jr2v;
  }
}

Vector ReducedSystem::residual(const Vector& x_plus) {
  const Vector ur = x_plus.head(k_u_), vr = x_plus.tail(k_v_);
  Vector n1, n2;
  if (model_.kind == ModelKind::rgl) {
    assemble_reduced_reaction(ur_n_, vr_n_, ur, vr, true, &n1, &n2, nullptr, nullptr, nullptr,
                              nullptr);
    Vector r(k_u_ + k_v_);
    r.head(k_u_) = (ur - ur_n_) / dt_ + 0.5 * (ar_u_ * (ur + ur_n_)) -
                   0.5 * model_.mu * (ur + ur_n_) - n1;
    r.tail(k_v_) = (vr - vr_n_) / dt_ + 0.5 * (ar_v_ * (vr + vr_n_)) -
                   0.5 * model_.mu * (vr + vr_n_) - n2;
    return r;
  }
  assemble_reduced_reaction(ur_n_, vr_n_, ur, vr, true, &n1, nullptr, nullptr, nullptr, nullptr,
                            nullptr);
  Vector r(k_u_ + k_v_);
  r.head(k_u_) = (ur - ur_n_) / dt_ - 0.5 * (ar_uv_ * (vr + vr_n_)) +
                 0.5 * (mr_uv_ * (vr + vr_n_)) - 0.5 * model_.mu * (ur + ur_n_) - n1;
  r.tail(k_v_) = 0.5 * (vr + vr_n_) - 0.5 * (cvu_ * (ur + ur_n_));
  return r;
}

void ReducedSystem::prepare_linear(const Vector& x_plus) {
  const Vector ur = x_plus.head(k_u_), vr = x_plus.tail(k_v_);
  Matrix jac(k_u_ + k_v_, k_u_ + k_v_);
  if (model_.kind == ModelKind::rgl) {
    Matrix j11, j12, j21, j22;
    assemble_reduced_reaction(ur_n_, vr_n_, ur, vr, true, nullptr, nullptr, &j11, &j12, &j21,
                              &j22);
    jac.topLeftCorner(k_u_, k_u_) = Matrix::Identity(k_u_, k_u_) / dt_ + 0.5 * ar_u_ -
                                    0.5 * model_.mu * Matrix::Identity(k_u_, k_u_) - j11;
    jac.topRightCorner(k_u_, k_v_) = -j12;
    jac.bottomLeftCorner(k_v_, k_u_) = -j21;
    jac.bottomRightCorner(k_v_, k_v_) = Matrix::Identity(k_v_, k_v_) / dt_ + 0.5 * ar_v_ -
                                        0.5 * model_.mu * Matrix::Identity(k_v_, k_v_) - j22;
  } else {
    Matrix j11;
    assemble_reduced_reaction(ur_n_, vr_n_, ur, vr, true, nullptr, nullptr, &j11, nullptr,
                              nullptr, nullptr);
    jac.topLeftCorner(k_u_, k_u_) =
        Matrix::Identity(k_u_, k_u_) / dt_ - 0.5 * model_.mu * Matrix::Identity(k_u_, k_u_) - j11;
    jac.topRightCorner(k_u_, k_v_) = 0.5 * (mr_uv_ - ar_uv_);
    jac.bottomLeftCorner(k_v_, k_u_) = -0.5 * cvu_;
    jac.bottomRightCorner(k_v_, k_v_) = 0.5 * Matrix::Identity(k_v_, k_v_);
  }
  lu_.compute(jac);
}

Vector ReducedSystem::solve_linear(const Vector& r) {
  Vector d = lu_.solve(r);
  if (!d.allFinite()) throw NumericsError("rom: singular reduced newton system");
  return d;
}

double ReducedSystem::component_norm2(const Vector& x, int comp) const {
  return comp == 0 ? x.head(k_u_).squaredNorm() : x.tail(k_v_).squaredNorm();
}

double ReducedSystem::component_diff_norm2(const Vector& x, const Vector& y, int comp) const {
  return comp == 0 ? (x.head(k_u_) - y.head(k_u_)).squaredNorm()
                   : (x.tail(k_v_) - y.tail(k_v_)).squaredNorm();
}

Vector ReducedSystem::reduced_initial_state(const Vector& u0, const Vector& v0) const {
  Vector x0(k_u_ + k_v_);
  x0.head(k_u_) = reduce_u(u0);
  if (model_.kind == ModelKind::sh)
    x0.tail(k_v_) = cvu_ * x0.head(k_u_);
  else
    x0.tail(k_v_) = reduce_v(v0);
  return x0;
}

std::pair<Vector, Vector> ReducedSystem::reduced_nonlinearity(const Vector& ur,
                                                              const Vector& vr) {
  Vector n1, n2;
  if (model_.kind == ModelKind::rgl)
    assemble_reduced_reaction(ur, vr, ur, vr, false, &n1, &n2, nullptr, nullptr, nullptr,
                              nullptr);
  else {
    assemble_reduced_reaction(ur, vr, ur, vr, false, &n1, nullptr, nullptr, nullptr, nullptr,
                              nullptr);
    n2 = Vector::Zero(k_v_);
  }
  return {n1, n2};
}

std::pair<Vector, Vector> ReducedSystem::full_cubic_vectors(const Vector& ur,
                                                            const Vector& vr) const {
  const Vector u = pod_u_.psi * ur;
  const Vector v = pod_v_.psi * vr;
  if (model_.kind == ModelKind::rgl) {
    Vector b1 = assemble_nonlinear(
        *space_, [](double a, double b) { return -(a * a + b * b) * a; }, u, v);
    Vector b2 = assemble_nonlinear(
        *space_, [](double a, double b) { return -(a * a + b * b) * b; }, u, v);
    return {b1, b2};
  }
  Vector b1 = assemble_nonlinear(
      *space_, [](double a, double) { return -a * a * a; }, u, v);
  return {b1, Vector()};
}

double ReducedSystem::lifted_energy(const Vector& x) const {
  return evaluate_energy(model_, *space_, *ops_, pod_u_.psi * x.head(k_u_),
                         pod_v_.psi * x.tail(k_v_));
}

ReducedSystem build_rom(const DGSpace& space, const AssembledOperators& ops, ModelSpec model,
                        RomMode mode, PodBasis pod_u, PodBasis pod_v,
                        std::optional<DeimOperator> deim1, std::optional<DeimOperator> deim2,
                        SolverConfig solver) {
  return ReducedSystem(space, ops, model, mode, std::move(pod_u), std::move(pod_v),
                       std::move(deim1), std::move(deim2), solver);
}

Trajectory run_rom(ReducedSystem& system, const Vector& x0, const TimeGrid& grid,
                   const SolverConfig& solver, bool steady_stop) {
  return run_to_steady_state(system, x0, grid, solver, 1, {}, steady_stop);
}

}  // namespace gradrom
