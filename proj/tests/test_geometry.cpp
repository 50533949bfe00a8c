#include <doctest.h>

#include <numbers>
#include <random>

#include "gso/geometry.hpp"
#include "gso/hamiltonian.hpp"

using namespace gso;

namespace {

std::mt19937_64& rng() {
  static std::mt19937_64 gen(42);
  return gen;
}

Vector random_vec(Eigen::Index d) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = gauss(rng());
  return v;
}

AmplitudeState random_state(Eigen::Index d) { return AmplitudeState::normalized(random_vec(d)); }

SubspaceHamiltonian random_hamiltonian(Eigen::Index d) {
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = random_vec(1)[0];
  Matrix sym = 0.5 * (a + a.transpose());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < i; ++j) sym(i, j) = sym(j, i);
  return SubspaceHamiltonian(SubspaceBasis{}, std::move(sym));
}

// Independent geodesic oracle: integrate gamma'' = -|v|^2 gamma with RK4.
Vector rk4_geodesic(const Vector& x, const Vector& v, double eta, double step) {
  const double vn2 = v.squaredNorm();
  Vector p = x, q = v;
  double t = 0.0;
  while (t < eta) {
    const double h = std::min(step, eta - t);
    const Vector k1p = q, k1q = -vn2 * p;
    const Vector k2p = q + 0.5 * h * k1q, k2q = -vn2 * (p + 0.5 * h * k1p);
    const Vector k3p = q + 0.5 * h * k2q, k3q = -vn2 * (p + 0.5 * h * k2p);
    const Vector k4p = q + h * k3q, k4q = -vn2 * (p + h * k3p);
    p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    t += h;
  }
  return p;
}

}  // namespace

TEST_CASE("project_tangent basic cases") {
  AmplitudeState x(Vector{{1.0, 0.0}});
  CHECK(project_tangent(x, Vector{{0.0, 3.0}}).components().isApprox(Vector{{0.0, 3.0}}, 1e-15));
  CHECK(project_tangent(x, Vector{{5.0, 0.0}}).components().norm() == doctest::Approx(0.0));
  CHECK_THROWS_AS(project_tangent(x, Vector{{1.0, 2.0, 3.0}}), std::invalid_argument);
}

TEST_CASE("project_tangent matches dense projector and is idempotent") {
  const Eigen::Index d = 5;
  for (int trial = 0; trial < 20; ++trial) {
    const AmplitudeState x = random_state(d);
    const Vector w = random_vec(d);
    const Matrix proj = Matrix::Identity(d, d) - x.coords() * x.coords().transpose();
    const TangentVector pw = project_tangent(x, w);
    CHECK((pw.components() - proj * w).norm() < 1e-12);
    CHECK((project_tangent(x, pw.components()).components() - pw.components()).norm() < 1e-12);
    CHECK(std::abs(x.coords().dot(pw.components())) < 1e-12);
  }
}

TEST_CASE("riemannian_grad analytic cases") {
  AmplitudeState e1(Vector{{1.0, 0.0}});
  SubspaceHamiltonian diag(SubspaceBasis{}, Matrix{{2.0, 0.0}, {0.0, -1.0}});
  CHECK(riemannian_grad(e1, diag).norm() == doctest::Approx(0.0));

  SubspaceHamiltonian flip(SubspaceBasis{}, Matrix{{0.0, 1.0}, {1.0, 0.0}});
  const TangentVector g = riemannian_grad(e1, flip);
  CHECK(g.components()[0] == doctest::Approx(0.0));
  CHECK(g.components()[1] == doctest::Approx(2.0));
  CHECK(g.components().squaredNorm() == doctest::Approx(4.0));
}

TEST_CASE("riemannian_grad equals projected 2Hx") {
  const Eigen::Index d = 6;
  for (int trial = 0; trial < 10; ++trial) {
    const SubspaceHamiltonian H = random_hamiltonian(d);
    const AmplitudeState x = random_state(d);
    const Vector expected =
        project_tangent(x, 2.0 * H.dense() * x.coords()).components();
    CHECK((riemannian_grad(x, H).components() - expected).norm() < 1e-12);
  }
}

TEST_CASE("exp_map quarter circle and identity") {
  AmplitudeState x(Vector{{1.0, 0.0}});
  TangentVector v(x, Vector{{0.0, 2.0}});
  const AmplitudeState y = exp_map(x, v, std::numbers::pi / 4.0);
  CHECK(y.coords()[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(y.coords()[1] == doctest::Approx(1.0));
  CHECK(exp_map(x, v, 0.0).coords() == x.coords());
  CHECK_THROWS_AS(exp_map(x, v, -0.1), std::invalid_argument);
}

TEST_CASE("exp_map matches RK4 geodesic oracle") {
  const Eigen::Index d = 4;
  for (int trial = 0; trial < 5; ++trial) {
    const AmplitudeState x = random_state(d);
    const TangentVector v = project_tangent(x, random_vec(d));
    const double eta = 0.37;
    const Vector oracle = rk4_geodesic(x.coords(), v.components(), eta, 1e-4);
    CHECK((exp_map(x, v, eta).coords() - oracle).norm() < 1e-10);
  }
}

TEST_CASE("exp_map unit norm and great-circle closure") {
  for (Eigen::Index d : {2, 4, 8, 16}) {
    for (int trial = 0; trial < 20; ++trial) {
      const AmplitudeState x = random_state(d);
      const TangentVector v = project_tangent(x, random_vec(d));
      std::uniform_real_distribution<double> u01(0.0, 5.0);
      CHECK(std::abs(exp_map(x, v, u01(rng())).coords().norm() - 1.0) <= 1e-12);
      if (v.norm() > 0.0) {
        const double eta_loop = 2.0 * std::numbers::pi / v.norm();
        CHECK((exp_map(x, v, eta_loop).coords() - x.coords()).norm() <= 1e-10);
      }
    }
  }
}

TEST_CASE("parallel_transport quarter turn and invariant direction") {
  AmplitudeState x(Vector{{1.0, 0.0}});
  TangentVector v(x, Vector{{0.0, 1.0}});
  const TangentVector t = parallel_transport(x, v, v, std::numbers::pi / 2.0);
  CHECK(t.components()[0] == doctest::Approx(-1.0));
  CHECK(t.components()[1] == doctest::Approx(0.0).epsilon(1e-12));

  AmplitudeState x3(Vector{{1.0, 0.0, 0.0}});
  TangentVector v3(x3, Vector{{0.0, 1.0, 0.0}});
  TangentVector z3(x3, Vector{{0.0, 0.0, 1.0}});
  const TangentVector tz = parallel_transport(x3, v3, z3, 0.77);
  CHECK((tz.components() - z3.components()).norm() < 1e-12);
}

TEST_CASE("parallel_transport is a linear isometry with tangent output") {
  const Eigen::Index d = 5;
  for (int trial = 0; trial < 20; ++trial) {
    const AmplitudeState x = random_state(d);
    const TangentVector v = project_tangent(x, random_vec(d));
    const TangentVector z1 = project_tangent(x, random_vec(d));
    const TangentVector z2 = project_tangent(x, random_vec(d));
    const double eta = 0.9;
    const TangentVector t1 = parallel_transport(x, v, z1, eta);
    const TangentVector t2 = parallel_transport(x, v, z2, eta);
    CHECK(std::abs(t1.components().dot(t2.components()) -
                   z1.components().dot(z2.components())) <= 1e-10);
    const AmplitudeState base = exp_map(x, v, eta);
    CHECK(std::abs(base.coords().dot(t1.components())) <= 1e-10);
    // Self-transport closed form.
    const double a = eta * v.norm();
    const Vector self = std::cos(a) * v.components() - std::sin(a) * v.norm() * x.coords();
    CHECK((parallel_transport(x, v, v, eta).components() - self).norm() <= 1e-12);
  }
}

TEST_CASE("zero-velocity transport is the identity") {
  const AmplitudeState x = random_state(4);
  const TangentVector zero(x, Vector::Zero(4));
  const TangentVector z = project_tangent(x, random_vec(4));
  CHECK((parallel_transport(x, zero, z, 1.3).components() - z.components()).norm() < 1e-15);
}
