#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/SparseCholesky>

#include "gradrom/assembly.hpp"
#include "gradrom/integrator.hpp"
#include "gradrom/types.hpp"

namespace gradrom {

enum class ModelKind { rgl, sh };

// Linear reaction terms (mu u, mu v, -v, u - v) are wired as matrices in the
// systems below; only the pure cubic parts flow through the nonlinear vectors.
struct ModelSpec {
  ModelKind kind = ModelKind::rgl;
  double mu = 0.0;

  bool parabolic_elliptic() const { return kind == ModelKind::sh; }

  double potential(double u, double v) const {
    if (kind == ModelKind::rgl) {
      const double s = u * u + v * v;
      return 0.5 * mu * s - 0.25 * s * s;
    }
    return 0.5 * mu * u * u - 0.25 * u * u * u * u - u * v + 0.5 * v * v;
  }

  // Full reactions including the linear parts (f = Q grad_w F).
  double reaction1(double u, double v) const {
    return kind == ModelKind::rgl ? mu * u - (u * u + v * v) * u : mu * u - u * u * u - v;
  }
  double reaction2(double u, double v) const {
    return kind == ModelKind::rgl ? mu * v - (u * u + v * v) * v : u - v;
  }
};

inline ModelSpec make_model(ModelKind kind, double mu) { return {kind, mu}; }

// Cubic parts used by the nonlinear vectors and their Jacobians.
struct RglReaction {
  static constexpr bool has_second = true;
  double f1(double u, double v) const { return -(u * u + v * v) * u; }
  double f2(double u, double v) const { return -(u * u + v * v) * v; }
  void d1(double u, double v, double& du, double& dv) const {
    du = -(3.0 * u * u + v * v);
    dv = -2.0 * u * v;
  }
  void d2(double u, double v, double& du, double& dv) const {
    du = -2.0 * u * v;
    dv = -(u * u + 3.0 * v * v);
  }
};

struct ShReaction {
  static constexpr bool has_second = false;
  double f1(double u, double) const { return -u * u * u; }
  double f2(double, double) const { return 0.0; }
  void d1(double u, double, double& du, double& dv) const {
    du = -3.0 * u * u;
    dv = 0.0;
  }
  void d2(double, double, double&, double&) const {}
};

// Discrete free energy. RGL: 1/2 a(u,u) + 1/2 a(v,v) - int F; SH: -a(u,v) - int F.
double evaluate_energy(const ModelSpec& model, const DGSpace& space,
                       const AssembledOperators& ops, const Vector& u, const Vector& v);

// RGL: u0 = v0 = 2 + r with one uniform draw on [0,1) per dG node.
// SH:  u0 uniform on [-5e-5, 5e-5] per node, v0 solves M v0 = (M - A) u0.
std::pair<Vector, Vector> initial_condition(const ModelSpec& model, const DGSpace& space,
                                            const AssembledOperators& ops, std::uint64_t seed);

// Full-order AVF step systems. The state is the stacked vector [u; v]; the
// steady-state metric is the L2(Omega) norm, i.e. M-weighted coefficients.
class FomSystem {
 public:
  FomSystem(const DGSpace& space, const AssembledOperators& ops, ModelSpec model,
            SolverConfig solver);
  virtual ~FomSystem() = default;

  Index n_u() const { return space_->dim(); }
  Index n_v() const { return space_->dim(); }
  Index size() const { return 2 * space_->dim(); }
  const ModelSpec& model() const { return model_; }
  const DGSpace& space() const { return *space_; }
  const AssembledOperators& operators() const { return *ops_; }

  void prepare(double dt);
  virtual void begin_step(const Vector& x_n) = 0;
  virtual Vector residual(const Vector& x_plus) = 0;
  virtual void prepare_linear(const Vector& x_plus) = 0;
  virtual Vector solve_linear(const Vector& r) = 0;

  double component_norm2(const Vector& x, int comp) const;
  double component_diff_norm2(const Vector& x, const Vector& y, int comp) const;
  double energy(const Vector& x) const;

 protected:
  virtual void prepare_dt(double dt) = 0;

  const DGSpace* space_;
  const AssembledOperators* ops_;
  ModelSpec model_;
  SolverConfig solver_;
  double dt_ = 0.0;
  Vector u_n_, v_n_;
};

// Parabolic-parabolic coupling; the Newton matrix is SPD.
class RglFom : public FomSystem {
 public:
  RglFom(const DGSpace& space, const AssembledOperators& ops, ModelSpec model,
         SolverConfig solver);
  void begin_step(const Vector& x_n) override;
  Vector residual(const Vector& x_plus) override;
  void prepare_linear(const Vector& x_plus) override;
  Vector solve_linear(const Vector& r) override;

 private:
  void prepare_dt(double dt) override;

  SparseMatrix k_;  // M/dt + (A - mu M)/2
  std::vector<Triplet> k_triplets_;
  std::vector<Matrix> c11_, c12_, c22_;  // AVF reaction blocks, negated
  Eigen::SimplicialLDLT<SparseMatrix> direct_;
  bool direct_analyzed_ = false;
  Eigen::SimplicialLDLT<SparseMatrix> precond_;  // factorization of k_
};

// Parabolic-elliptic coupling; Newton solves go through the exact block
// elimination of the algebraic component, leaving an SPD system in du.
class ShFom : public FomSystem {
 public:
  ShFom(const DGSpace& space, const AssembledOperators& ops, ModelSpec model,
        SolverConfig solver);
  void begin_step(const Vector& x_n) override;
  Vector residual(const Vector& x_plus) override;
  void prepare_linear(const Vector& x_plus) override;
  Vector solve_linear(const Vector& r) override;

 private:
  void prepare_dt(double dt) override;

  SparseMatrix w_;        // (M - A)/2
  SparseMatrix m_inv_;    // block-diagonal inverse of M
  SparseMatrix s0_;       // M/dt - (mu/2) M + 2 W M^{-1} W
  std::vector<Matrix> c11_;  // AVF reaction blocks, negated
  Eigen::SimplicialLDLT<SparseMatrix> direct_;
  bool direct_analyzed_ = false;
  Eigen::SimplicialLDLT<SparseMatrix> precond_;  // factorization of s0_
};

std::unique_ptr<FomSystem> make_fom_system(const DGSpace& space, const AssembledOperators& ops,
                                           ModelSpec model, SolverConfig solver);

}  // namespace gradrom
