#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gradrom/models.hpp"
#include "gradrom/rng.hpp"

using namespace gradrom;

namespace {

struct Setup {
  Mesh mesh;
  DGSpace space;
  AssembledOperators ops;
  Setup(double lo, double hi, Index n, int q = 1)
      : mesh(build_uniform_mesh(lo, hi, n, n)),
        space(mesh, q),
        ops(assemble_operators(space, default_penalty(q))) {}
};

// scalar AVF update c' = mu_lin c + cubic(c), solved by bisection:
//   (cp - c)/dt = mu_lin (cp + c)/2 + (cp^3 + cp^2 c + cp c^2 + c^3)/4 * sign
double scalar_avf_step(double c, double dt, double mu_lin, double cubic_sign) {
  auto g = [&](double cp) {
    const double avg = (cp * cp * cp + cp * cp * c + cp * c * c + c * c * c) / 4.0;
    return (cp - c) / dt - 0.5 * mu_lin * (cp + c) - cubic_sign * avg;
  };
  double lo = c - 10.0, hi = c + 10.0;
  REQUIRE(g(lo) * g(hi) < 0.0);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(lo) * g(mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

Vector random_vector(Index n, Rng& rng, double amp) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.uniform(-amp, amp);
  return v;
}

}  // namespace

TEST_CASE("reactions are the Q-weighted potential gradient") {
  Rng rng(3);
  for (ModelKind kind : {ModelKind::rgl, ModelKind::sh}) {
    const ModelSpec model = make_model(kind, kind == ModelKind::rgl ? 0.5 : 0.3);
    for (int trial = 0; trial < 50; ++trial) {
      const double u = rng.uniform(-2, 2), v = rng.uniform(-2, 2);
      const double h = 1e-6;
      const double dFdu = (model.potential(u + h, v) - model.potential(u - h, v)) / (2 * h);
      const double dFdv = (model.potential(u, v + h) - model.potential(u, v - h)) / (2 * h);
      // RGL: Q = I; SH: Q = diag(1, -1)
      CHECK(model.reaction1(u, v) == doctest::Approx(dFdu).epsilon(1e-8));
      if (kind == ModelKind::rgl)
        CHECK(model.reaction2(u, v) == doctest::Approx(dFdv).epsilon(1e-8));
      else
        CHECK(model.reaction2(u, v) == doctest::Approx(-dFdv).epsilon(1e-8));
      // closed-form gradient agrees to round-off
      if (kind == ModelKind::rgl) {
        const double exact = model.mu * u - (u * u + v * v) * u;
        CHECK(std::abs(model.reaction1(u, v) - exact) <= 1e-10);
      } else {
        CHECK(std::abs(model.reaction1(u, v) - (model.mu * u - u * u * u - v)) <= 1e-10);
        CHECK(std::abs(model.reaction2(u, v) - (u - v)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("zero state is a fixed point of one avf step") {
  Setup s(0.0, 1.0, 2);
  for (ModelKind kind : {ModelKind::rgl, ModelKind::sh}) {
    const ModelSpec model = make_model(kind, 0.5);
    auto sys = make_fom_system(s.space, s.ops, model, SolverConfig{});
    const Vector x0 = Vector::Zero(2 * s.space.dim());
    Vector x1;
    const NewtonReport rep = avf_step(*sys, x0, 0.01, SolverConfig{}, x1);
    CHECK(rep.converged);
    CHECK(rep.iterations == 0);
    CHECK(x1.norm() == 0.0);
  }
}

TEST_CASE("constant rgl state follows the scalar avf update") {
  Setup s(0.0, 1.0, 2);
  const double mu = 0.5, c = 1.3, dt = 0.01;
  const ModelSpec model = make_model(ModelKind::rgl, mu);
  auto sys = make_fom_system(s.space, s.ops, model, SolverConfig{});
  Vector x0(2 * s.space.dim());
  x0.head(s.space.dim()).setConstant(c);
  x0.tail(s.space.dim()).setZero();
  Vector x1;
  const NewtonReport rep = avf_step(*sys, x0, dt, SolverConfig{}, x1);
  CHECK(rep.converged);
  // with v = 0 the cubic part is -u^3
  const double expected = scalar_avf_step(c, dt, mu, -1.0);
  for (Index i = 0; i < s.space.dim(); ++i)
    CHECK(x1[i] == doctest::Approx(expected).epsilon(1e-11));
  CHECK(x1.tail(s.space.dim()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("rgl constant equilibria at +-sqrt(mu) stay put") {
  Setup s(0.0, 1.0, 2);
  const double mu = 0.5;
  const ModelSpec model = make_model(ModelKind::rgl, mu);
  auto sys = make_fom_system(s.space, s.ops, model, SolverConfig{});
  for (double c : {std::sqrt(mu), -std::sqrt(mu)}) {
    Vector x0(2 * s.space.dim());
    x0.head(s.space.dim()).setConstant(c);
    x0.tail(s.space.dim()).setZero();
    Vector x1;
    avf_step(*sys, x0, 0.01, SolverConfig{}, x1);
    CHECK((x1 - x0).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("constant sh state: constraint gives v = u and the scalar avf update") {
  Setup s(0.0, 1.0, 2);
  const double mu = 0.3, c = 0.4, dt = 0.01;
  const ModelSpec model = make_model(ModelKind::sh, mu);
  auto sys = make_fom_system(s.space, s.ops, model, SolverConfig{});
  Vector x0(2 * s.space.dim());
  x0.head(s.space.dim()).setConstant(c);
  x0.tail(s.space.dim()).setConstant(c);  // consistent constraint value
  Vector x1;
  const NewtonReport rep = avf_step(*sys, x0, dt, SolverConfig{}, x1);
  CHECK(rep.converged);
  // effective scalar dynamics c' = (mu - 1) c - c^3
  const double expected = scalar_avf_step(c, dt, mu - 1.0, -1.0);
  for (Index i = 0; i < s.space.dim(); ++i) {
    CHECK(x1[i] == doctest::Approx(expected).epsilon(1e-11));
    CHECK(x1[s.space.dim() + i] == doctest::Approx(expected).epsilon(1e-11));
  }

  // converged step satisfies the averaged algebraic constraint to solver tolerance
  const Vector u_bar = 0.5 * (x1.head(s.space.dim()) + x0.head(s.space.dim()));
  const Vector v_bar = 0.5 * (x1.tail(s.space.dim()) + x0.tail(s.space.dim()));
  const Vector constraint = (s.ops.mass - s.ops.stiffness) * u_bar - s.ops.mass * v_bar;
  CHECK(constraint.norm() <= 1e-10);
}

TEST_CASE("rgl dynamics are equivariant under swap and sign flip") {
  Setup s(0.0, 1.0, 3);
  const ModelSpec model = make_model(ModelKind::rgl, 0.5);
  SolverConfig cfg;
  Rng rng(17);
  const Index n = s.space.dim();
  const Vector u0 = random_vector(n, rng, 0.8);
  const Vector v0 = random_vector(n, rng, 0.8);

  auto step = [&](const Vector& u, const Vector& v) {
    auto sys = make_fom_system(s.space, s.ops, model, cfg);
    Vector x0(2 * n), x1;
    x0 << u, v;
    avf_step(*sys, x0, 0.01, cfg, x1);
    return x1;
  };

  const Vector base = step(u0, v0);
  const Vector swapped = step(v0, u0);
  CHECK((swapped.head(n) - base.tail(n)).norm() <= 1e-9);
  CHECK((swapped.tail(n) - base.head(n)).norm() <= 1e-9);

  const Vector negated = step(-u0, -v0);
  CHECK((negated + base).norm() <= 1e-9);
}

TEST_CASE("initial conditions") {
  Setup s(0.0, 256.0, 4);

  SUBCASE("fixed seed reproduces bit-identical fields") {
    const ModelSpec model = make_model(ModelKind::rgl, 0.5);
    auto [u1, v1] = initial_condition(model, s.space, s.ops, 42);
    auto [u2, v2] = initial_condition(model, s.space, s.ops, 42);
    CHECK((u1 - u2).cwiseAbs().maxCoeff() == 0.0);
    CHECK((v1 - v2).cwiseAbs().maxCoeff() == 0.0);
    auto [u3, v3] = initial_condition(model, s.space, s.ops, 43);
    CHECK((u1 - u3).cwiseAbs().maxCoeff() > 0.0);
  }

  SUBCASE("rgl: both components equal 2 + r with r in [0,1)") {
    const ModelSpec model = make_model(ModelKind::rgl, 0.5);
    auto [u0, v0] = initial_condition(model, s.space, s.ops, 7);
    CHECK((u0 - v0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(u0.minCoeff() >= 2.0);
    CHECK(u0.maxCoeff() < 3.0);
  }

  SUBCASE("sh: tiny noise and the consistent algebraic component") {
    const ModelSpec model = make_model(ModelKind::sh, 0.3);
    auto [u0, v0] = initial_condition(model, s.space, s.ops, 7);
    CHECK(u0.cwiseAbs().maxCoeff() <= 5e-5);
    const Vector res = s.ops.mass * v0 - (s.ops.mass - s.ops.stiffness) * u0;
    CHECK(res.norm() <= 1e-12);
  }
}
