#pragma once

#include <vector>

#include "gradrom/integrator.hpp"
#include "gradrom/models.hpp"
#include "gradrom/rom.hpp"
#include "gradrom/types.hpp"

namespace gradrom {

struct EnergySeries {
  std::vector<double> times;
  std::vector<double> values;

  Index size() const { return static_cast<Index>(values.size()); }
  std::vector<double> deltas() const {  // E[n] - E[n+1]
    std::vector<double> d;
    for (std::size_t n = 0; n + 1 < values.size(); ++n) d.push_back(values[n] - values[n + 1]);
    return d;
  }
};

// Per-level energies recorded during the run (preferred; full step resolution).
EnergySeries energy_series(const Trajectory& traj);
// Energies evaluated on stored states (requires stride-1 snapshots for per-step use).
EnergySeries energy_series_from_states(const Trajectory& traj, const ModelSpec& model,
                                       const DGSpace& space, const AssembledOperators& ops);
EnergySeries rom_energy_series(const Trajectory& reduced, const ReducedSystem& system);

struct DissipationReport {
  bool pass = true;
  std::vector<Index> violations;  // steps n with E[n+1] > E[n] + slack (1 + |E[n]|)
};
DissipationReport check_dissipation(const EnergySeries& series, double slack);

// Per-step residual of the discrete energy identity:
//   r_n = (E_n - E_{n+1}) - (1/dt) (||du_n||^2 [+ ||dv_n||^2])
// The v-difference enters for the parabolic-parabolic model only. Norms are
// the squared step differences in the run metric (M-weighted for full order,
// Euclidean on reduced coefficients).
std::vector<double> avf_identity_residuals(const EnergySeries& series,
                                           const std::vector<double>& du_norm2,
                                           const std::vector<double>& dv_norm2, double dt,
                                           ModelKind kind);
// State-based variant over consecutive stored levels of a stride-1 trajectory.
std::vector<double> avf_identity_residuals(const Trajectory& traj, const ModelSpec& model,
                                           const DGSpace& space, const AssembledOperators& ops);

// ||R^{-1}||_2 = lambda_min(M)^{-1/2}, by power iteration on M^{-1}.
double mass_inverse_spectral_norm(const SparseMatrix& mass, double rel_tol = 1e-6);

// Per-step admissible step size of the energy-decay bound for a deim-mode
// reduced run. The unobservable intermediate state is evaluated at the AVF
// midpoint; all matrix/vector norms are Euclidean.
struct BoundReport {
  double r_inv_norm = 0.0;
  double inv_ptq_1 = 0.0;
  double inv_ptq_2 = 0.0;
  std::vector<double> dt_max;       // per step; +inf when the step difference vanishes
  std::vector<double> residual_1;   // ||(I - Q Q^T) b|| at the midpoint state
  std::vector<double> residual_2;   // second component (parabolic-parabolic only)
  std::vector<double> du_norm;      // reduced step differences
  std::vector<double> dv_norm;
  std::vector<bool> satisfied;      // dt <= dt_max
  Index n_satisfied = 0;
};
BoundReport stepsize_bound(const Trajectory& reduced, ReducedSystem& system, double r_inv_norm,
                           double dt);

// sqrt( sum_n (x_n - y_n)^T M (x_n - y_n) dt ) over matching columns.
double l2l2_error(const Matrix& states_a, const Matrix& states_b, const SparseMatrix& mass,
                  double dt);
// sqrt( sum_n (Ea_n - Eb_n)^2 dt )
double energy_error(const EnergySeries& a, const EnergySeries& b, double dt);

struct TimingReport {
  double fom_seconds = 0.0;
  double pod_online_seconds = 0.0;
  double deim_online_seconds = 0.0;
  double speedup_pod = 0.0;   // fom / pod
  double speedup_deim = 0.0;  // fom / deim
};
TimingReport timing_report(double fom_seconds, double pod_online_seconds,
                           double deim_online_seconds);

}  // namespace gradrom
