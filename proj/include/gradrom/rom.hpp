#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gradrom/assembly.hpp"
#include "gradrom/integrator.hpp"
#include "gradrom/models.hpp"
#include "gradrom/reduction.hpp"
#include "gradrom/types.hpp"

namespace gradrom {

enum class RomMode { galerkin, deim };

// Reduced AVF step system. Reduced masses are identities because the bases are
// M-orthonormal, so the state metric is plainly Euclidean (which coincides
// with the lifted L2 norm). In deim mode the nonlinear terms touch only the
// elements containing interpolation indices.
class ReducedSystem {
 public:
  ReducedSystem(const DGSpace& space, const AssembledOperators& ops, ModelSpec model,
                RomMode mode, PodBasis pod_u, PodBasis pod_v,
                std::optional<DeimOperator> deim1, std::optional<DeimOperator> deim2,
                SolverConfig solver);

  Index n_u() const { return k_u_; }
  Index n_v() const { return k_v_; }
  RomMode mode() const { return mode_; }
  const ModelSpec& model() const { return model_; }
  const Matrix& psi_u() const { return pod_u_.psi; }
  const Matrix& psi_v() const { return pod_v_.psi; }
  const PodBasis& pod_u() const { return pod_u_; }
  const PodBasis& pod_v() const { return pod_v_; }
  const DeimOperator* deim1() const { return deim1_ ? &*deim1_ : nullptr; }
  const DeimOperator* deim2() const { return deim2_ ? &*deim2_ : nullptr; }
  double offline_seconds() const { return offline_seconds_; }

  // time stepping interface (see run_to_steady_state)
  void prepare(double dt);
  void begin_step(const Vector& x_n);
  Vector residual(const Vector& x_plus);
  void prepare_linear(const Vector& x_plus);
  Vector solve_linear(const Vector& r);
  double component_norm2(const Vector& x, int comp) const;
  double component_diff_norm2(const Vector& x, const Vector& y, int comp) const;

  Vector lift_u(const Vector& ur) const { return pod_u_.psi * ur; }
  Vector lift_v(const Vector& vr) const { return pod_v_.psi * vr; }
  Vector reduce_u(const Vector& u) const { return pod_u_.psi.transpose() * (ops_->mass * u); }
  Vector reduce_v(const Vector& v) const { return pod_v_.psi.transpose() * (ops_->mass * v); }

  // Reduced initial state; the algebraic component of the SH system is made
  // consistent with the reduced constraint.
  Vector reduced_initial_state(const Vector& u0, const Vector& v0) const;

  // Instantaneous reduced nonlinearity at a reduced state, by full assembly
  // and projection (galerkin) or by interpolation of the extracted rows (deim).
  std::pair<Vector, Vector> reduced_nonlinearity(const Vector& ur, const Vector& vr);

  // Full cubic load vectors at a lifted state (diagnostics).
  std::pair<Vector, Vector> full_cubic_vectors(const Vector& ur, const Vector& vr) const;

  double lifted_energy(const Vector& x) const;

  // rows extracted during the last nonlinearity/Jacobian assembly (deim cost accounting)
  Index last_rows_assembled() const { return last_rows_assembled_; }

 private:
  void assemble_reduced_reaction(const Vector& ur_a, const Vector& vr_a, const Vector& ur_b,
                                 const Vector& vr_b, bool avf, Vector* n1, Vector* n2,
                                 Matrix* j11, Matrix* j12, Matrix* j21, Matrix* j22);

  const DGSpace* space_;
  const AssembledOperators* ops_;
  ModelSpec model_;
  RomMode mode_;
  PodBasis pod_u_, pod_v_;
  std::optional<DeimOperator> deim1_, deim2_;
  SolverConfig solver_;
  Index k_u_ = 0, k_v_ = 0;
  double offline_seconds_ = 0.0;

  // reduced operators: rgl uses ar_u_, ar_v_; sh uses ar_uv_, mr_uv_, cvu_
  Matrix ar_u_, ar_v_, ar_uv_, mr_uv_, cvu_;
  std::vector<Index> deim_elements_;                  // elements owning any index
  std::vector<std::vector<std::pair<Index, Index>>> deim_rows_;  // (local row, target) per op

  double dt_ = 0.0;
  Vector ur_n_, vr_n_;
  Vector u_full_n_, v_full_n_;  // lifted level-n state (galerkin mode)
  Eigen::PartialPivLU<Matrix> lu_;
  Index last_rows_assembled_ = 0;
};

ReducedSystem build_rom(const DGSpace& space, const AssembledOperators& ops, ModelSpec model,
                        RomMode mode, PodBasis pod_u, PodBasis pod_v,
                        std::optional<DeimOperator> deim1 = std::nullopt,
                        std::optional<DeimOperator> deim2 = std::nullopt,
                        SolverConfig solver = {});

// Integrates the reduced system over the given grid; by default it runs the
// whole horizon (for comparability with the recorded full-order run), with the
// steady-state stop as an option.
Trajectory run_rom(ReducedSystem& system, const Vector& x0, const TimeGrid& grid,
                   const SolverConfig& solver, bool steady_stop = false);

}  // namespace gradrom
