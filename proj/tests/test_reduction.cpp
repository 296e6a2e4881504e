#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "gradrom/assembly.hpp"
#include "gradrom/reduction.hpp"
#include "gradrom/rng.hpp"

using namespace gradrom;

namespace {

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

Matrix orthonormal(Index rows, Index cols, Rng& rng) {
  const Matrix g = random_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

// matrix with prescribed singular values
Matrix with_spectrum(Index rows, Index cols, const Vector& sigma, Rng& rng) {
  const Index r = sigma.size();
  return orthonormal(rows, r, rng) * sigma.asDiagonal() * orthonormal(cols, r, rng).transpose();
}

SparseMatrix random_spd_sparse(Index n, Rng& rng) {
  Matrix a = random_matrix(n, n, rng);
  Matrix spd = a * a.transpose() + double(n) * Matrix::Identity(n, n);
  return SparseMatrix(spd.sparseView());
}

}  // namespace

TEST_CASE("rsvd recovers an embedded diagonal exactly") {
  Rng rng(1);
  Matrix a = Matrix::Zero(10, 10);
  a(0, 0) = 3.0;
  a(1, 1) = 2.0;
  a(2, 2) = 1.0;
  const SvdResult res = rsvd(a, 3, 3, 1, rng);
  REQUIRE(res.sigma.size() == 3);
  CHECK(res.sigma[0] == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(res.sigma[1] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(res.sigma[2] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((res.u.transpose() * res.u - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((res.v.transpose() * res.v - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("rsvd matches the deterministic svd on exactly rank-k matrices") {
  Rng rng(2);
  Vector sigma(4);
  sigma << 5.0, 2.5, 1.0, 0.25;
  const Matrix a = with_spectrum(30, 20, sigma, rng);
  const SvdResult res = rsvd(a, 4, 4, 1, rng);
  const SvdResult ref = deterministic_svd(a);
  for (Index i = 0; i < 4; ++i)
    CHECK(res.sigma[i] == doctest::Approx(ref.sigma[i]).epsilon(1e-8));
}

TEST_CASE("rsvd with one power iteration is accurate on geometric decay") {
  Rng rng(3);
  Vector sigma(40);
  for (Index i = 0; i < sigma.size(); ++i) sigma[i] = std::pow(2.0, -double(i));
  const Matrix a = with_spectrum(200, 200, sigma, rng);
  const SvdResult res = rsvd(a, 20, 20, 1, rng);
  const SvdResult ref = deterministic_svd(a);
  for (Index i = 0; i < 10; ++i)
    CHECK(std::abs(res.sigma[i] - ref.sigma[i]) <= 1e-6 * ref.sigma[i]);
}

TEST_CASE("rsvd falls back to the deterministic svd when the sketch is too wide") {
  Rng rng(4);
  const Matrix a = random_matrix(6, 4, rng);
  const SvdResult res = rsvd(a, 3, 3, 1, rng);  // 3 + 3 > min(6, 4)
  CHECK(res.deterministic_fallback);
  const SvdResult ref = deterministic_svd(a);
  for (Index i = 0; i < std::min<Index>(res.sigma.size(), ref.sigma.size()); ++i)
    CHECK(res.sigma[i] == doctest::Approx(ref.sigma[i]).epsilon(1e-12));
}

TEST_CASE("relative information content selection") {
  Vector sigma(2);
  sigma << 2.0, 1.0;
  CHECK(select_modes_by_ric(sigma, 0.25) == 1);  // RIC(1) = 4/5 = 0.8 >= 0.75
  CHECK(select_modes_by_ric(sigma, 0.10) == 2);  // RIC(1) = 0.8 < 0.9
  Vector padded(4);
  padded << 2.0, 1.0, 0.0, 0.0;
  CHECK(select_modes_by_ric(padded, 0.0) == 2);  // last nonzero singular value

  CHECK_THROWS_AS(select_modes_by_ric(Vector::Zero(3), 0.5), NumericsError);

  // threshold selection is monotone: smaller eps never selects fewer modes
  Rng rng(5);
  Vector spectrum(12);
  double v = 1.0;
  for (Index i = 0; i < spectrum.size(); ++i) {
    spectrum[i] = v;
    v *= rng.uniform(0.3, 0.95);
  }
  Index prev = 1;
  for (double eps : {0.5, 0.1, 0.01, 1e-4, 1e-8}) {
    const Index k = select_modes_by_ric(spectrum, eps);
    CHECK(k >= prev);
    prev = k;
  }
}

TEST_CASE("pod basis") {
  Rng rng(6);
  const Mesh mesh = build_uniform_mesh(0.0, 1.0, 2, 2);
  const DGSpace space(mesh, 1);
  const SparseMatrix mass = assemble_mass(space);
  const Index n = space.dim();

  SUBCASE("single snapshot is normalized in the mass norm") {
    Matrix w = random_matrix(n, 1, rng);
    const PodBasis pod = compute_pod_basis(w, mass, 1e-10, RsvdOptions{}, rng);
    CHECK(pod.k == 1);
    const double wnorm = std::sqrt(w.col(0).dot(mass * w.col(0)));
    CHECK((pod.psi.col(0) - w.col(0) / wnorm).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("proportional snapshots collapse to one mode") {
    Matrix w(n, 2);
    w.col(0) = random_matrix(n, 1, rng);
    w.col(1) = 2.0 * w.col(0);
    for (double eps : {0.5, 1e-4, 1e-10}) {
      const PodBasis pod = compute_pod_basis(w, mass, eps, RsvdOptions{}, rng);
      CHECK(pod.k == 1);
    }
  }

  SUBCASE("basis is mass-orthonormal and solves the snapshot eigenproblem") {
    const Index rows = 5, cols = 3;
    Rng local(7);
    const SparseMatrix m_small = random_spd_sparse(rows, local);
    const Matrix w = random_matrix(rows, cols, local);
    const PodBasis pod = compute_pod_basis(w, m_small, 1e-14, RsvdOptions{}, local);
    const Matrix gram = pod.psi.transpose() * m_small * pod.psi;
    CHECK((gram - Matrix::Identity(pod.k, pod.k)).cwiseAbs().maxCoeff() <= 1e-10);
    for (Index i = 0; i < pod.k; ++i) {
      const Vector lhs = w * (w.transpose() * (m_small * pod.psi.col(i)));
      const Vector rhs = pod.sigma[i] * pod.sigma[i] * pod.psi.col(i);
      CHECK((lhs - rhs).norm() <= 1e-8 * rhs.norm());
    }
  }

  SUBCASE("non-spd weight is rejected") {
    Matrix bad = -Matrix::Identity(4, 4);
    CHECK_THROWS_AS(
        compute_pod_basis(Matrix::Ones(4, 2), SparseMatrix(bad.sparseView()), 1e-4,
                          RsvdOptions{}, rng),
        NumericsError);
  }

  SUBCASE("pod projection error is optimal among random candidates") {
    Rng local(8);
    const Index rows = 6, cols = 4, k = 2;
    const SparseMatrix m_small = random_spd_sparse(rows, local);
    const Matrix w = random_matrix(rows, cols, local);
    PodBasis pod = compute_pod_basis(w, m_small, 1e-14, RsvdOptions{}, local);
    REQUIRE(pod.k >= k);
    const Matrix psi_k = pod.psi.leftCols(k);

    auto projection_error = [&](const Matrix& basis) {
      double err = 0.0;
      for (Index j = 0; j < cols; ++j) {
        const Vector r = w.col(j) - basis * (basis.transpose() * (m_small * w.col(j)));
        err += r.dot(m_small * r);
      }
      return err;
    };
    const double pod_err = projection_error(psi_k);
    for (int trial = 0; trial < 200; ++trial) {
      // random M-orthonormal basis via Gram-Schmidt in the M inner product
      Matrix g = random_matrix(rows, k, local);
      for (Index c = 0; c < k; ++c) {
        for (Index p = 0; p < c; ++p)
          g.col(c) -= g.col(p) * (g.col(p).dot(m_small * g.col(c)));
        g.col(c) /= std::sqrt(g.col(c).dot(m_small * g.col(c)));
      }
      CHECK(pod_err <= projection_error(g) + 1e-12);
    }
  }
}

TEST_CASE("deim operator") {
  Rng rng(9);
  const Mesh mesh = build_uniform_mesh(0.0, 1.0, 2, 2);
  const DGSpace space(mesh, 1);
  const SparseMatrix mass = assemble_mass(space);
  const Index n = space.dim();

  // state basis for the projector
  const Matrix w = random_matrix(n, 3, rng);
  const PodBasis pod = compute_pod_basis(w, mass, 1e-14, RsvdOptions{}, rng);

  // exactly rank-2 nonlinear snapshots
  Vector sigma(2);
  sigma << 4.0, 1.5;
  const Matrix b = with_spectrum(n, 6, sigma, rng);
  const DeimOperator op = deim_build(b, 1e-12, pod, RsvdOptions{}, rng);
  REQUIRE(op.m == 2);

  SUBCASE("basis is orthonormal with distinct indices and invertible interpolation") {
    CHECK((op.q.transpose() * op.q - Matrix::Identity(op.m, op.m)).cwiseAbs().maxCoeff() <=
          1e-10);
    CHECK(op.indices[0] != op.indices[1]);
    CHECK(op.inv_ptq_norm > 0.0);
    CHECK(std::isfinite(op.inv_ptq_norm));
  }

  SUBCASE("reconstruction is exact at full snapshot rank") {
    for (Index j = 0; j < b.cols(); ++j) {
      Vector rows(op.m);
      for (Index i = 0; i < op.m; ++i) rows[i] = b(op.indices[i], j);
      // dense interpolation formula Q (P^T Q)^{-1} P^T b
      Matrix ptq(op.m, op.m);
      for (Index i = 0; i < op.m; ++i) ptq.row(i) = op.q.row(op.indices[i]);
      const Vector rebuilt = op.q * ptq.partialPivLu().solve(rows);
      CHECK((rebuilt - b.col(j)).norm() <= 1e-10 * b.col(j).norm());
    }
  }

  SUBCASE("first index maximizes the first mode (brute force)") {
    Index argmax = 0;
    op.q.col(0).cwiseAbs().maxCoeff(&argmax);
    CHECK(op.indices[0] == argmax);
  }

  SUBCASE("deim_apply equals the dense projector formula") {
    Rng local(10);
    const Vector full = random_matrix(n, 1, local);
    Vector rows(op.m);
    for (Index i = 0; i < op.m; ++i) rows[i] = full[op.indices[i]];
    const Vector reduced = deim_apply(op, rows);

    Matrix ptq(op.m, op.m);
    for (Index i = 0; i < op.m; ++i) ptq.row(i) = op.q.row(op.indices[i]);
    Matrix p = Matrix::Zero(n, op.m);
    for (Index i = 0; i < op.m; ++i) p(op.indices[i], i) = 1.0;
    const Vector dense =
        pod.psi.transpose() * op.q * ptq.inverse() * (p.transpose() * full);
    CHECK((reduced - dense).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + dense.norm()));
  }

  SUBCASE("zero rows give zero output") {
    CHECK(deim_apply(op, Vector::Zero(op.m)).norm() == 0.0);
  }

  SUBCASE("vectors in the deim range are projected exactly") {
    const Vector c = random_matrix(op.m, 1, rng);
    const Vector in_range = op.q * c;
    Vector rows(op.m);
    for (Index i = 0; i < op.m; ++i) rows[i] = in_range[op.indices[i]];
    const Vector via_deim = deim_apply(op, rows);
    const Vector galerkin = pod.psi.transpose() * in_range;
    CHECK((via_deim - galerkin).norm() <= 1e-10 * (1.0 + galerkin.norm()));
  }
}
