#include "gradrom/reduction.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace gradrom {

namespace {

Matrix thin_q(const Matrix& y) {
  Eigen::HouseholderQR<Matrix> qr(y);
  return qr.householderQ() * Matrix::Identity(y.rows(), std::min(y.rows(), y.cols()));
}

Matrix gaussian(Index rows, Index cols, Rng& rng) {
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = rng.normal();
  return g;
}

}  // namespace

SvdResult deterministic_svd(const Matrix& a) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult res;
  res.u = svd.matrixU();
  res.sigma = svd.singularValues();
  res.v = svd.matrixV();
  res.rank = res.sigma.size();
  res.deterministic_fallback = true;
  return res;
}

SvdResult rsvd(const Matrix& a, Index target_rank, Index oversampling, int power_iters,
               Rng& rng) {
  if (target_rank < 1) throw NumericsError("rsvd: target rank must be positive");
  const Index small = std::min(a.rows(), a.cols());
  const Index l = target_rank + std::max<Index>(oversampling, 0);
  if (l > small) return deterministic_svd(a);  // sketch wider than the matrix

  Matrix q = thin_q(a * gaussian(a.cols(), l, rng));
  for (int it = 0; it < power_iters; ++it) {
    const Matrix z = thin_q(a.transpose() * q);
    q = thin_q(a * z);
  }
  const Matrix b = q.transpose() * a;
  Eigen::BDCSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);

  const Index keep = std::min(target_rank, static_cast<Index>(svd.singularValues().size()));
  SvdResult res;
  res.u = q * svd.matrixU().leftCols(keep);
  res.sigma = svd.singularValues().head(keep);
  res.v = svd.matrixV().leftCols(keep);
  res.rank = keep;
  return res;
}

Index select_modes_by_ric(const Vector& sigma, double eps) {
  double total = 0.0;
  for (Index i = 0; i < sigma.size(); ++i) total += sigma[i] * sigma[i];
  if (total <= 0.0) throw NumericsError("ric: all singular values are zero");
  const Index k = select_modes_by_ric(sigma, eps, total);
  return k > 0 ? k : sigma.size();
}

Index select_modes_by_ric(const Vector& sigma, double eps, double total_sq) {
  if (sigma.size() == 0) throw NumericsError("ric: empty spectrum");
  if (total_sq <= 0.0) throw NumericsError("ric: nonpositive total energy");
  double cum = 0.0;
  for (Index k = 0; k < sigma.size(); ++k) {
    if (sigma[k] < 0.0) throw NumericsError("ric: negative singular value");
    if (k > 0 && sigma[k] > sigma[k - 1] * (1.0 + 1e-12))
      throw NumericsError("ric: singular values not sorted");
    cum += sigma[k] * sigma[k];
    if (cum >= (1.0 - eps) * total_sq) return k + 1;
  }
  return 0;  // threshold not certified by this (truncated) spectrum
}

namespace {

// Adaptive rank doubling until RIC(eps) is certified against total_sq.
SvdResult adaptive_pod_svd(const Matrix& a, double eps, double total_sq,
                           const RsvdOptions& opts, Rng& rng, Index& k_out, double& ric_out) {
  const Index small = std::min(a.rows(), a.cols());
  Index target = std::min(std::max<Index>(opts.initial_rank, 1), small);
  for (;;) {
    const Index p = opts.oversampling < 0 ? target : opts.oversampling;
    SvdResult res = (target + p > small) ? deterministic_svd(a)
                                         : rsvd(a, target, p, opts.power_iters, rng);
    // a deterministic spectrum is complete; its own energy is the consistent total
    double total = total_sq;
    if (res.deterministic_fallback) {
      total = 0.0;
      for (Index i = 0; i < res.sigma.size(); ++i) total += res.sigma[i] * res.sigma[i];
    }
    const Index k = select_modes_by_ric(res.sigma, eps, total);
    // accept only if the cut lies strictly inside the computed spectrum
    if (k > 0 && (k < res.rank || res.deterministic_fallback)) {
      double cum = 0.0;
      for (Index i = 0; i < k; ++i) cum += res.sigma[i] * res.sigma[i];
      k_out = k;
      ric_out = cum / total;
      return res;
    }
    if (res.deterministic_fallback) {
      k_out = res.rank;
      ric_out = 1.0;
      return res;
    }
    target = std::min(target * 2, small);
  }
}

}  // namespace

PodBasis compute_pod_basis(const Matrix& snapshots, const SparseMatrix& mass, double eps,
                           const RsvdOptions& opts, Rng& rng, std::string tag) {
  if (snapshots.cols() < 1) throw NumericsError("pod: empty snapshot matrix");
  if (!snapshots.allFinite()) throw NumericsError("pod: snapshot matrix has non-finite entries");

  Eigen::SimplicialLLT<SparseMatrix> llt(mass);
  if (llt.info() != Eigen::Success)
    throw NumericsError("pod: mass matrix Cholesky factorization failed");

  // M = R^T R with R = L^T P; any square root gives the same basis.
  const SparseMatrix l_factor = llt.matrixL();
  SparseMatrix lt = l_factor.transpose();
  const Matrix permuted = llt.permutationP() * snapshots;
  Matrix rw = lt * permuted;

  PodBasis pod;
  pod.tag = std::move(tag);
  pod.total_energy = rw.squaredNorm();
  if (pod.total_energy <= 0.0) throw NumericsError("pod: zero snapshot matrix");

  Index k = 0;
  double ric = 0.0;
  SvdResult res = adaptive_pod_svd(rw, eps, pod.total_energy, opts, rng, k, ric);

  Matrix uk = res.u.leftCols(k);
  lt.triangularView<Eigen::Upper>().solveInPlace(uk);
  pod.psi = llt.permutationP().inverse() * uk;
  pod.sigma = res.sigma;
  pod.k = k;
  pod.achieved_ric = ric;
  pod.deterministic_fallback = res.deterministic_fallback;
  return pod;
}

DeimOperator deim_build(const Matrix& nonlinear_snapshots, double eps, const PodBasis& pod,
                        const RsvdOptions& opts, Rng& rng) {
  if (nonlinear_snapshots.cols() < 1) throw NumericsError("deim: empty snapshot matrix");
  const double total = nonlinear_snapshots.squaredNorm();
  if (total <= 0.0) throw NumericsError("deim: zero nonlinear snapshots");

  DeimOperator op;
  Index m = 0;
  double ric = 0.0;
  SvdResult res = adaptive_pod_svd(nonlinear_snapshots, eps, total, opts, rng, m, ric);
  op.q = res.u.leftCols(m);
  op.sigma = res.sigma;
  op.achieved_ric = ric;
  op.deterministic_fallback = res.deterministic_fallback;

  // Greedy interpolation indices: start at the largest entry of the first
  // mode, then repeatedly take the largest interpolation residual.
  op.indices.clear();
  Index p0 = 0;
  op.q.col(0).cwiseAbs().maxCoeff(&p0);
  op.indices.push_back(p0);
  for (Index j = 1; j < m; ++j) {
    const Index nsel = static_cast<Index>(op.indices.size());
    Matrix sub(nsel, nsel);
    Vector rhs(nsel);
    for (Index r = 0; r < nsel; ++r) {
      for (Index c = 0; c < nsel; ++c) sub(r, c) = op.q(op.indices[r], c);
      rhs[r] = op.q(op.indices[r], j);
    }
    const Vector coeff = sub.partialPivLu().solve(rhs);
    Vector residual = op.q.col(j) - op.q.leftCols(nsel) * coeff;
    Index pj = 0;
    const double rmax = residual.cwiseAbs().maxCoeff(&pj);
    if (rmax <= 1e-14) {
      op.notes.push_back("deim: residual vanished after " + std::to_string(nsel) +
                         " indices; basis truncated");
      m = nsel;
      op.q = op.q.leftCols(m).eval();
      op.sigma = op.sigma.head(m).eval();
      break;
    }
    op.indices.push_back(pj);
  }
  op.m = m;

  deim_finalize(op, pod);
  return op;
}

void deim_finalize(DeimOperator& op, const PodBasis& pod) {
  op.m = static_cast<Index>(op.indices.size());
  if (op.q.cols() != op.m) throw NumericsError("deim: basis/index count mismatch");
  Matrix ptq(op.m, op.m);
  for (Index r = 0; r < op.m; ++r) ptq.row(r) = op.q.row(op.indices[r]);
  Eigen::JacobiSVD<Matrix> svd(ptq);
  const double smin = svd.singularValues().minCoeff();
  if (smin <= 0.0) throw NumericsError("deim: interpolation matrix is singular");
  op.inv_ptq_norm = 1.0 / smin;
  op.projector = (pod.psi.transpose() * op.q) * ptq.partialPivLu().inverse();
}

}  // namespace gradrom
