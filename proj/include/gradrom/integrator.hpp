#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gradrom/types.hpp"

namespace gradrom {

enum class LinearSolverKind {
  direct,      // sparse factorization of the Newton matrix, redone every iteration
  frozen_pcg,  // CG on the exact Newton matrix, preconditioned by the factored
               // constant (linear) part; the reaction blocks enter matrix-free
};

struct SolverConfig {
  double newton_tol = 1e-10;
  int max_newton_iters = 10;
  LinearSolverKind linear_solver = LinearSolverKind::direct;
  double linear_tol = 1e-13;
  int linear_max_iters = 600;
  double steady_tol = 1e-4;
  double steady_floor = 1e-14;  // denominator guard for the relative-change test
};

struct TimeGrid {
  double dt = 0.0;
  double t_max = 0.0;
  Index step_count() const {
    if (dt <= 0.0) throw ConfigError("time grid: dt must be positive");
    return static_cast<Index>(std::llround(t_max / dt));
  }
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<double> history;  // residual norms, starting at the initial guess
};

// Newton iteration on a System exposing
//   Vector residual(const Vector& x)
//   void prepare_linear(const Vector& x)
//   Vector solve_linear(const Vector& r)   // returns J(x)^{-1} r
template <class System>
NewtonReport newton_iterate(System& sys, Vector& x, const SolverConfig& cfg) {
  NewtonReport rep;
  for (int it = 0;; ++it) {
    const Vector r = sys.residual(x);
    const double rn = r.norm();
    rep.history.push_back(rn);
    rep.iterations = it;
    rep.residual_norm = rn;
    if (!std::isfinite(rn)) return rep;
    if (rn <= cfg.newton_tol) {
      rep.converged = true;
      return rep;
    }
    if (it >= cfg.max_newton_iters) return rep;
    sys.prepare_linear(x);
    x -= sys.solve_linear(r);
  }
}

// Callable-based variant with a dense Jacobian, solved by partial-pivot LU.
template <class ResidualFn, class JacobianFn>
std::pair<Vector, NewtonReport> newton_solve(ResidualFn&& residual, JacobianFn&& jacobian,
                                             Vector guess, const SolverConfig& cfg) {
  struct Wrap {
    ResidualFn& res;
    JacobianFn& jac;
    Eigen::PartialPivLU<Matrix> lu;
    Vector residual(const Vector& x) { return res(x); }
    void prepare_linear(const Vector& x) { lu.compute(jac(x)); }
    Vector solve_linear(const Vector& r) {
      Vector d = lu.solve(r);
      if (!d.allFinite()) throw NumericsError("newton: singular linear solve");
      return d;
    }
  } wrap{residual, jacobian, {}};
  NewtonReport rep = newton_iterate(wrap, guess, cfg);
  return {std::move(guess), rep};
}

// Preconditioned conjugate gradient for SPD operators, starting from zero.
// apply(x, y) writes y = A x; precond(r, z) writes z = P^{-1} r.
template <class Apply, class Precond>
Index pcg(Apply&& apply, Precond&& precond, const Vector& b, Vector& x, double rel_tol,
          Index max_iters) {
  x.setZero(b.size());
  Vector r = b;
  const double b_norm = b.norm();
  if (b_norm == 0.0) return 0;
  Vector z(b.size()), q(b.size());
  precond(r, z);
  Vector p = z;
  double rho = r.dot(z);
  for (Index it = 1; it <= max_iters; ++it) {
    apply(p, q);
    const double alpha = rho / p.dot(q);
    x += alpha * p;
    r -= alpha * q;
    if (r.norm() <= rel_tol * b_norm) return it;
    precond(r, z);
    const double rho_next = r.dot(z);
    p = z + (rho_next / rho) * p;
    rho = rho_next;
  }
  throw NumericsError("pcg: no convergence within iteration limit");
}

// One implicit step of the averaged-vector-field scheme. The System caches the
// level-n state in begin_step and evaluates the full nonlinear residual at the
// trial level-(n+1) state.
template <class System>
NewtonReport avf_step(System& sys, const Vector& x_n, double dt, const SolverConfig& cfg,
                      Vector& x_out) {
  sys.prepare(dt);
  sys.begin_step(x_n);
  x_out = x_n;
  return newton_iterate(sys, x_out, cfg);
}

// Time history of a run. States are recorded every `stride` levels (level 0
// included); the scalar per-step series are always kept at full resolution.
struct Trajectory {
  double dt = 0.0;
  Index stride = 1;
  Index n_u = 0, n_v = 0;

  std::vector<double> snapshot_times;
  Matrix u_snapshots, v_snapshots;  // one column per recorded level

  std::vector<double> level_times;      // size steps + 1
  std::vector<double> energy;           // per level; empty without an observer
  std::vector<double> du_norm2, dv_norm2;  // squared step differences, system metric
  std::vector<int> newton_iters;        // per step

  Vector final_u, final_v;
  double online_seconds = 0.0;
  Index steps = 0;
  bool reached_tol = false;

  Index n_snapshots() const { return static_cast<Index>(snapshot_times.size()); }
};

// Advances until both components satisfy the relative-change criterion
// ||w_{n+1} - w_n|| / max(||w_n||, floor) <= steady_tol (in the system's
// metric) or t reaches t_max. Energy is recorded per level through the
// observer when one is given.
template <class System>
Trajectory run_to_steady_state(System& sys, const Vector& x0, const TimeGrid& grid,
                               const SolverConfig& cfg, Index snapshot_stride,
                               const std::function<double(const Vector&)>& energy_observer = {},
                               bool steady_stop = true) {
  if (snapshot_stride < 1) throw ConfigError("run: snapshot stride must be at least 1");
  const Index max_steps = grid.step_count();
  const auto t_start = std::chrono::steady_clock::now();

  Trajectory traj;
  traj.dt = grid.dt;
  traj.stride = snapshot_stride;
  traj.n_u = sys.n_u();
  traj.n_v = sys.n_v();

  std::vector<Vector> u_cols, v_cols;
  auto record = [&](double t, const Vector& x) {
    traj.snapshot_times.push_back(t);
    u_cols.push_back(x.head(traj.n_u));
    v_cols.push_back(x.tail(traj.n_v));
  };

  Vector x = x0, x_next;
  traj.level_times.push_back(0.0);
  if (energy_observer) traj.energy.push_back(energy_observer(x));
  record(0.0, x);

  for (Index n = 0; n < max_steps; ++n) {
    const double t_next = grid.dt * static_cast<double>(n + 1);
    NewtonReport rep = avf_step(sys, x, grid.dt, cfg, x_next);
    if (!rep.converged) {
      std::string msg = "avf step failed at t = " + std::to_string(t_next) +
                        " (level " + std::to_string(n + 1) + "); newton residuals:";
      for (double h : rep.history) msg += " " + std::to_string(h);
      throw NumericsError(msg);
    }

    const double du2 = sys.component_diff_norm2(x_next, x, 0);
    const double dv2 = sys.component_diff_norm2(x_next, x, 1);
    traj.du_norm2.push_back(du2);
    traj.dv_norm2.push_back(dv2);
    traj.newton_iters.push_back(rep.iterations);
    traj.level_times.push_back(t_next);

    const double un = std::sqrt(sys.component_norm2(x, 0));
    const double vn = std::sqrt(sys.component_norm2(x, 1));
    x.swap(x_next);
    traj.steps = n + 1;

    if (energy_observer) traj.energy.push_back(energy_observer(x));
    if ((n + 1) % snapshot_stride == 0) record(t_next, x);

    const double rel_u = std::sqrt(du2) / std::max(un, cfg.steady_floor);
    const double rel_v = std::sqrt(dv2) / std::max(vn, cfg.steady_floor);
    if (steady_stop && rel_u <= cfg.steady_tol && rel_v <= cfg.steady_tol) {
      traj.reached_tol = true;
      break;
    }
  }

  traj.final_u = x.head(traj.n_u);
  traj.final_v = x.tail(traj.n_v);
  traj.u_snapshots.resize(traj.n_u, static_cast<Index>(u_cols.size()));
  traj.v_snapshots.resize(traj.n_v, static_cast<Index>(v_cols.size()));
  for (Index j = 0; j < traj.u_snapshots.cols(); ++j) {
    traj.u_snapshots.col(j) = u_cols[j];
    traj.v_snapshots.col(j) = v_cols[j];
  }
  traj.online_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return traj;
}

}  // namespace gradrom
