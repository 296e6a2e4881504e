#include "gradrom/diagnostics.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>

namespace gradrom {

EnergySeries energy_series(const Trajectory& traj) {
  if (traj.energy.empty()) throw NumericsError("energy series: trajectory has no recorded energies");
  EnergySeries s;
  s.times = traj.level_times;
  s.values = traj.energy;
  return s;
}

EnergySeries energy_series_from_states(const Trajectory& traj, const ModelSpec& model,
                                       const DGSpace& space, const AssembledOperators& ops) {
  EnergySeries s;
  s.times = traj.snapshot_times;
  for (Index j = 0; j < traj.n_snapshots(); ++j)
    s.values.push_back(
        evaluate_energy(model, space, ops, traj.u_snapshots.col(j), traj.v_snapshots.col(j)));
  return s;
}

EnergySeries rom_energy_series(const Trajectory& reduced, const ReducedSystem& system) {
  EnergySeries s;
  s.times = reduced.snapshot_times;
  Vector x(reduced.n_u + reduced.n_v);
  for (Index j = 0; j < reduced.n_snapshots(); ++j) {
    x.head(reduced.n_u) = reduced.u_snapshots.col(j);
    x.tail(reduced.n_v) = reduced.v_snapshots.col(j);
    s.values.push_back(system.lifted_energy(x));
  }
  return s;
}

DissipationReport check_dissipation(const EnergySeries& series, double slack) {
  DissipationReport rep;
  for (std::size_t n = 0; n + 1 < series.values.size(); ++n) {
    if (series.values[n + 1] > series.values[n] + slack * (1.0 + std::abs(series.values[n]))) {
      rep.violations.push_back(static_cast<Index>(n));
      rep.pass = false;
    }
  }
  return rep;
}

std::vector<double> avf_identity_residuals(const EnergySeries& series,
                                           const std::vector<double>& du_norm2,
                                           const std::vector<double>& dv_norm2, double dt,
                                           ModelKind kind) {
  if (series.values.size() != du_norm2.size() + 1)
    throw NumericsError("identity: series/step length mismatch");
  std::vector<double> res;
  for (std::size_t n = 0; n < du_norm2.size(); ++n) {
    double rate = du_norm2[n];
    if (kind == ModelKind::rgl) rate += dv_norm2[n];
    res.push_back((series.values[n] - series.values[n + 1]) - rate / dt);
  }
  return res;
}

std::vector<double> avf_identity_residuals(const Trajectory& traj, const ModelSpec& model,
                                           const DGSpace& space, const AssembledOperators& ops) {
  if (traj.stride != 1)
    throw NumericsError("identity: state-based residuals need a stride-1 trajectory");
  const EnergySeries s = energy_series_from_states(traj, model, space, ops);
  std::vector<double> res;
  for (Index n = 0; n + 1 < traj.n_snapshots(); ++n) {
    const Vector du = traj.u_snapshots.col(n + 1) - traj.u_snapshots.col(n);
    double rate = mass_weighted_sq(ops.mass, du);
    if (model.kind == ModelKind::rgl) {
      const Vector dv = traj.v_snapshots.col(n + 1) - traj.v_snapshots.col(n);
      rate += mass_weighted_sq(ops.mass, dv);
    }
    res.push_back((s.values[n] - s.values[n + 1]) - rate / traj.dt);
  }
  return res;
}

double mass_inverse_spectral_norm(const SparseMatrix& mass, double rel_tol) {
  Eigen::SimplicialLLT<SparseMatrix> llt(mass);
  if (llt.info() != Eigen::Success) throw NumericsError("mass norm: factorization failed");
  Vector x = Vector::Constant(mass.rows(), 1.0 / std::sqrt(double(mass.rows())));
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    const Vector y = llt.solve(x);
    const double next = y.norm();
    x = y / next;
    if (it > 0 && std::abs(next - lambda) <= rel_tol * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

BoundReport stepsize_bound(const Trajectory& reduced, ReducedSystem& system, double r_inv_norm,
                           double dt) {
  if (system.mode() != RomMode::deim)
    throw NumericsError("stepsize bound: requires a deim-mode reduced system");
  const bool two_components = system.model().kind == ModelKind::rgl;
  const DeimOperator* d1 = system.deim1();
  const DeimOperator* d2 = system.deim2();

  BoundReport rep;
  rep.r_inv_norm = r_inv_norm;
  rep.inv_ptq_1 = d1->inv_ptq_norm;
  rep.inv_ptq_2 = two_components && d2 ? d2->inv_ptq_norm : 0.0;

  const double inf = std::numeric_limits<double>::infinity();
  for (Index n = 0; n + 1 < reduced.n_snapshots(); ++n) {
    const Vector du = reduced.u_snapshots.col(n + 1) - reduced.u_snapshots.col(n);
    const Vector dv = reduced.v_snapshots.col(n + 1) - reduced.v_snapshots.col(n);
    const Vector ur_mid = 0.5 * (reduced.u_snapshots.col(n + 1) + reduced.u_snapshots.col(n));
    const Vector vr_mid = 0.5 * (reduced.v_snapshots.col(n + 1) + reduced.v_snapshots.col(n));
    auto [b1, b2] = system.full_cubic_vectors(ur_mid, vr_mid);

    const double res1 = (b1 - d1->q * (d1->q.transpose() * b1)).norm();
    const double nu = du.norm();
    rep.du_norm.push_back(nu);
    rep.residual_1.push_back(res1);

    double bound = inf;
    const double denom1 = d1->inv_ptq_norm * res1;
    if (nu > 0.0 && denom1 > 0.0) bound = nu / denom1;

    if (two_components && d2) {
      const double res2 = (b2 - d2->q * (d2->q.transpose() * b2)).norm();
      const double nv = dv.norm();
      rep.dv_norm.push_back(nv);
      rep.residual_2.push_back(res2);
      const double denom2 = d2->inv_ptq_norm * res2;
      double bound2 = inf;
      if (nv > 0.0 && denom2 > 0.0) bound2 = nv / denom2;
      bound = std::min(bound, bound2);
    }
    bound /= r_inv_norm;
    rep.dt_max.push_back(bound);
    const bool ok = dt <= bound;
    rep.satisfied.push_back(ok);
    if (ok) ++rep.n_satisfied;
  }
  return rep;
}

double l2l2_error(const Matrix& states_a, const Matrix& states_b, const SparseMatrix& mass,
                  double dt) {
  if (states_a.rows() != states_b.rows() || states_a.cols() != states_b.cols())
    throw NumericsError("l2l2 error: trajectory grids do not match");
  double total = 0.0;
  for (Index j = 0; j < states_a.cols(); ++j) {
    const Vector d = states_a.col(j) - states_b.col(j);
    total += mass_weighted_sq(mass, d) * dt;
  }
  return std::sqrt(total);
}

double energy_error(const EnergySeries& a, const EnergySeries& b, double dt) {
  if (a.values.size() != b.values.size())
    throw NumericsError("energy error: series lengths do not match");
  double total = 0.0;
  for (std::size_t n = 0; n < a.values.size(); ++n) {
    const double d = a.values[n] - b.values[n];
    total += d * d * dt;
  }
  return std::sqrt(total);
}

TimingReport timing_report(double fom_seconds, double pod_online_seconds,
                           double deim_online_seconds) {
  TimingReport rep;
  rep.fom_seconds = fom_seconds;
  rep.pod_online_seconds = pod_online_seconds;
  rep.deim_online_seconds = deim_online_seconds;
  rep.speedup_pod = pod_online_seconds > 0.0 ? fom_seconds / pod_online_seconds : 0.0;
  rep.speedup_deim = deim_online_seconds > 0.0 ? fom_seconds / deim_online_seconds : 0.0;
  return rep;
}

}  // namespace gradrom
