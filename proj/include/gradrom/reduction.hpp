#pragma once

#include <string>
#include <vector>

#include "gradrom/rng.hpp"
#include "gradrom/types.hpp"

namespace gradrom {

struct SvdResult {
  Matrix u;      // left singular vectors, one column per retained mode
  Vector sigma;  // non-increasing
  Matrix v;      // right singular vectors
  Index rank = 0;
  bool deterministic_fallback = false;
};

// Randomized range finder with a Gaussian test matrix of width
// target_rank + oversampling and re-orthonormalized power iterations, followed
// by an exact SVD of the projected matrix. Falls back to a deterministic SVD
// when the sketch would exceed the matrix dimensions.
SvdResult rsvd(const Matrix& a, Index target_rank, Index oversampling, int power_iters,
               Rng& rng);

SvdResult deterministic_svd(const Matrix& a);

// Smallest k whose relative information content sum_{i<=k} sigma_i^2 / total
// reaches 1 - eps. The overload without an explicit total uses the given
// spectrum's own energy; the other returns 0 when the truncated spectrum
// cannot certify the threshold.
Index select_modes_by_ric(const Vector& sigma, double eps);
Index select_modes_by_ric(const Vector& sigma, double eps, double total_sq);

struct RsvdOptions {
  Index oversampling = -1;  // -1: p = k
  int power_iters = 1;
  Index initial_rank = 16;  // adaptive doubling start
};

struct PodBasis {
  Matrix psi;    // N x k, mass-orthonormal columns
  Vector sigma;  // computed leading singular values of R W
  Index k = 0;
  double achieved_ric = 0.0;
  double total_energy = 0.0;  // ||R W||_F^2, the exact RIC denominator
  bool deterministic_fallback = false;
  std::string tag;
};

// POD of a snapshot matrix in the M-weighted inner product: SVD of R W with
// M = R^T R, truncation by RIC(eps), and Psi = R^{-1} U_k. The target rank is
// doubled adaptively until the threshold is certified against the exact
// Frobenius total.
PodBasis compute_pod_basis(const Matrix& snapshots, const SparseMatrix& mass, double eps,
                           const RsvdOptions& opts, Rng& rng, std::string tag = {});

struct DeimOperator {
  Matrix q;  // N x m, orthonormal (Euclidean)
  std::vector<Index> indices;
  Matrix projector;  // Psi^T Q (P^T Q)^{-1}, maps extracted rows to reduced space
  double inv_ptq_norm = 0.0;  // ||(P^T Q)^{-1}||_2
  Vector sigma;
  Index m = 0;
  double achieved_ric = 0.0;
  bool deterministic_fallback = false;
  std::vector<std::string> notes;
};

// Euclidean POD of the nonlinear snapshots truncated by RIC(eps), then the
// greedy interpolation-index selection and the precomputed projector for the
// given state basis.
DeimOperator deim_build(const Matrix& nonlinear_snapshots, double eps, const PodBasis& pod,
                        const RsvdOptions& opts, Rng& rng);

// Recomputes the projector and the conditioning diagnostic for an operator
// whose basis and indices are already populated (e.g. loaded from disk).
void deim_finalize(DeimOperator& op, const PodBasis& pod);

inline Vector deim_apply(const DeimOperator& op, const Vector& rows) {
  if (rows.size() != op.m) throw NumericsError("deim_apply: row count mismatch");
  return op.projector * rows;
}

}  // namespace gradrom
