#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "gradrom/assembly.hpp"
#include "gradrom/models.hpp"
#include "gradrom/rng.hpp"

using namespace gradrom;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// exact monomial integral over the reference triangle
double ref_monomial(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

Matrix dense(const SparseMatrix& s) { return Matrix(s); }

}  // namespace

TEST_CASE("triangle rules integrate monomials exactly up to their degree") {
  for (int degree : {2, 4, 8}) {
    const TriangleRule rule = triangle_rule(degree);
    REQUIRE(rule.degree >= degree);
    for (int a = 0; a + 0 <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) {
        double q = 0.0;
        for (Index p = 0; p < rule.points.rows(); ++p)
          q += rule.weights[p] * std::pow(rule.points(p, 0), a) * std::pow(rule.points(p, 1), b);
        CHECK(q == doctest::Approx(ref_monomial(a, b)).epsilon(1e-12));
      }
  }
}

TEST_CASE("edge rules integrate monomials exactly up to their degree") {
  for (int degree : {3, 5}) {
    const EdgeRule rule = edge_rule(degree);
    for (int k = 0; k <= degree; ++k) {
      double q = 0.0;
      for (Index p = 0; p < rule.points.size(); ++p)
        q += rule.weights[p] * std::pow(rule.points[p], k);
      CHECK(q == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("mass matrix: constants integrate to the domain area") {
  for (int q : {1, 2}) {
    const Mesh mesh = build_uniform_mesh(0.0, 1.0, 2, 2);
    const DGSpace space(mesh, q);
    const SparseMatrix m = assemble_mass(space);
    const Vector ones = Vector::Ones(space.dim());
    CHECK(ones.dot(m * ones) == doctest::Approx(1.0).epsilon(1e-13));
  }
  const Mesh big = build_uniform_mesh(0.0, 256.0, 4, 4);
  const DGSpace space(big, 1);
  const SparseMatrix m = assemble_mass(space);
  const Vector ones = Vector::Ones(space.dim());
  CHECK(ones.dot(m * ones) == doctest::Approx(256.0 * 256.0).epsilon(1e-13));
}

TEST_CASE("local linear mass block is |K|/12 [[2,1,1],[1,2,1],[1,1,2]]") {
  const Mesh mesh = build_uniform_mesh(0.0, 1.0, 1, 1);
  const DGSpace space(mesh, 1);
  const Matrix m = dense(assemble_mass(space));
  const double area = mesh.triangle_area(0);
  Matrix expected(3, 3);
  expected << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  expected *= area / 12.0;
  CHECK((m.topLeftCorner(3, 3) - expected).cwiseAbs().maxCoeff() < 1e-14);
  // block diagonal: no coupling between the two elements
  CHECK(m.topRightCorner(3, 3).cwiseAbs().maxCoeff() == 0.0);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("stiffness: symmetric, annihilates constants, nearly positive semidefinite") {
  for (int q : {1, 2}) {
    CAPTURE(q);
    const Mesh mesh = build_uniform_mesh(0.0, 1.0, 4, 4);
    const DGSpace space(mesh, q);
    const Matrix a = dense(assemble_stiffness(space, default_penalty(q)));

    const double amax = a.cwiseAbs().maxCoeff();
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * amax);

    const Vector ones = Vector::Ones(space.dim());
    CHECK((a * ones).cwiseAbs().maxCoeff() <= 1e-12 * amax);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
    const double lambda_max = eig.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * lambda_max);
  }
}

TEST_CASE("stiffness rejects nonpositive penalties") {
  const Mesh mesh = build_uniform_mesh(0.0, 1.0, 1, 1);
  const DGSpace space(mesh, 1);
  CHECK_THROWS_AS(assemble_stiffness(space, 0.0), ConfigError);
  CHECK_THROWS_AS(assemble_stiffness(space, -3.0), ConfigError);
}

TEST_CASE("nonlinear load vector") {
  const Mesh mesh = build_uniform_mesh(0.0, 1.0, 2, 2);
  const DGSpace space(mesh, 1);
  const SparseMatrix m = assemble_mass(space);
  auto cubic = [](double u, double v) { return -(u * u + v * v) * u; };

  SUBCASE("vanishes at the origin for reactions with f(0,0) = 0") {
    const Vector z = Vector::Zero(space.dim());
    CHECK(assemble_nonlinear(space, cubic, z, z).norm() == 0.0);
  }

  SUBCASE("constant field: each entry is -c^3 |K|/3 for the linear nodal basis") {
    const double c = 1.7;
    const Vector u = Vector::Constant(space.dim(), c);
    const Vector v = Vector::Zero(space.dim());
    const Vector b = assemble_nonlinear(space, cubic, u, v);
    for (Index e = 0; e < space.n_elements(); ++e) {
      const double area = mesh.triangle_area(e);
      for (Index i = 0; i < 3; ++i)
        CHECK(b[space.dof(e, i)] == doctest::Approx(-c * c * c * area / 3.0).epsilon(1e-13));
    }
  }

  SUBCASE("f(u,v) = u reproduces M u") {
    Rng rng(7);
    Vector u(space.dim()), v(space.dim());
    for (Index i = 0; i < space.dim(); ++i) {
      u[i] = rng.uniform(-1, 1);
      v[i] = rng.uniform(-1, 1);
    }
    const Vector b = assemble_nonlinear(space, [](double a, double) { return a; }, u, v);
    CHECK((b - m * u).norm() <= 1e-12 * (m * u).norm());
  }
}

TEST_CASE("reaction jacobian") {
  const Mesh mesh = build_uniform_mesh(0.0, 1.0, 2, 2);
  const DGSpace space(mesh, 1);
  const SparseMatrix m = assemble_mass(space);

  SUBCASE("f(u,v) = u gives the mass matrix") {
    const Vector u = Vector::Zero(space.dim());
    const Matrix j =
        dense(assemble_nonlinear_jacobian(space, [](double, double) { return 1.0; }, u, u));
    CHECK((j - dense(m)).cwiseAbs().maxCoeff() < 1e-13);
  }

  SUBCASE("cubic at zero state gives the zero matrix") {
    const Vector u = Vector::Zero(space.dim());
    const Matrix j = dense(assemble_nonlinear_jacobian(
        space, [](double a, double) { return -3.0 * a * a; }, u, u));
    CHECK(j.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("matches central finite differences on random states") {
    Rng rng(11);
    Vector u(space.dim()), v(space.dim()), du(space.dim());
    for (Index i = 0; i < space.dim(); ++i) {
      u[i] = rng.uniform(-1, 1);
      v[i] = rng.uniform(-1, 1);
      du[i] = rng.uniform(-1, 1);
    }
    auto f = [](double a, double b) { return -(a * a + b * b) * a; };
    auto dfdu = [](double a, double b) { return -(3.0 * a * a + b * b); };
    const SparseMatrix j = assemble_nonlinear_jacobian(space, dfdu, u, v);
    const double eps = 1e-5;
    const Vector fd = (assemble_nonlinear(space, f, u + eps * du, v) -
                       assemble_nonlinear(space, f, u - eps * du, v)) /
                      (2.0 * eps);
    const Vector jd = j * du;
    CHECK((jd - fd).norm() <= 1e-6 * fd.norm());
  }
}

TEST_CASE("discrete energy") {
  const Mesh mesh = build_uniform_mesh(0.0, 2.0, 2, 2);
  const DGSpace space(mesh, 1);
  const AssembledOperators ops = assemble_operators(space, default_penalty(1));
  CHECK(ops.quadrature.volume_degree >= 2);
  CHECK(ops.quadrature.reaction_degree >= 4);
  CHECK(ops.quadrature.edge_degree >= 3);

  SUBCASE("zero state has zero energy for both models") {
    const Vector z = Vector::Zero(space.dim());
    CHECK(evaluate_energy(make_model(ModelKind::rgl, 0.5), space, ops, z, z) == 0.0);
    CHECK(evaluate_energy(make_model(ModelKind::sh, 0.3), space, ops, z, z) == 0.0);
  }

  SUBCASE("constant state: stiffness part drops, closed-form potential") {
    const double c = 0.8, mu = 0.5, area = 4.0;
    const Vector u = Vector::Constant(space.dim(), c);
    const Vector v = Vector::Zero(space.dim());
    const double expected = -area * (0.5 * mu * c * c - 0.25 * c * c * c * c);
    CHECK(evaluate_energy(make_model(ModelKind::rgl, mu), space, ops, u, v) ==
          doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("avf xi-average of a cubic equals the closed form") {
  // int_0^1 (xi a + (1-xi) b)^3 dxi = (a^3 + a^2 b + a b^2 + b^3) / 4
  const double a = 1.3, b = -0.7;
  double q = 0.0;
  for (const auto& [xi, w] : avf_xi_rule()) q += w * std::pow(xi * a + (1.0 - xi) * b, 3);
  const double closed = (a * a * a + a * a * b + a * b * b + b * b * b) / 4.0;
  CHECK(q == doctest::Approx(closed).epsilon(1e-14));
  // independent high-resolution quadrature oracle
  double fine = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const double xi = (i + 0.5) / n;
    fine += std::pow(xi * a + (1.0 - xi) * b, 3) / n;
  }
  CHECK(q == doctest::Approx(fine).epsilon(1e-6));
}
