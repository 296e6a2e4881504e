#pragma once

// Test helper: AVF stepping of the linear system M w' = -A w, which the
// integrator handles as the midpoint rule. Also used for the manufactured
// heat-equation convergence study.

#include <Eigen/SparseCholesky>

#include "gradrom/integrator.hpp"
#include "gradrom/types.hpp"

namespace gradrom::testing {

class LinearAvfSystem {
 public:
  LinearAvfSystem(SparseMatrix mass, SparseMatrix stiffness)
      : mass_(std::move(mass)), stiffness_(std::move(stiffness)) {}

  Index n_u() const { return mass_.rows(); }
  Index n_v() const { return 0; }

  void prepare(double dt) {
    if (dt == dt_) return;
    dt_ = dt;
    SparseMatrix j = mass_ / dt_ + 0.5 * stiffness_;
    solver_.compute(j);
    if (solver_.info() != Eigen::Success)
      throw NumericsError("linear avf: factorization failed");
  }
  void begin_step(const Vector& x_n) { x_n_ = x_n; }
  Vector residual(const Vector& x) {
    return mass_ * (x - x_n_) / dt_ + 0.5 * (stiffness_ * (x + x_n_));
  }
  void prepare_linear(const Vector&) {}
  Vector solve_linear(const Vector& r) { return solver_.solve(r); }

  double component_norm2(const Vector& x, int comp) const {
    return comp == 0 ? x.dot(mass_ * x) : 0.0;
  }
  double component_diff_norm2(const Vector& x, const Vector& y, int comp) const {
    if (comp != 0) return 0.0;
    const Vector d = x - y;
    return d.dot(mass_ * d);
  }

 private:
  SparseMatrix mass_, stiffness_;
  Eigen::SimplicialLDLT<SparseMatrix> solver_;
  double dt_ = 0.0;
  Vector x_n_;
};

}  // namespace gradrom::testing
