#include "doctest.h"

#include "regrom/sem.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

using namespace regrom;

namespace {
constexpr double pi = std::numbers::pi;

// The study thresholds are our reading of "practically eliminated" and
// "practically unaffected": below 5% and above 99% of the input amplitude.
constexpr double kEliminated = 0.05;
constexpr double kUnaffected = 0.99;
}  // namespace

TEST_CASE("GLL rule for order 2 and quadrature exactness") {
  const GllRule r2 = gll_rule(2);
  CHECK(r2.nodes[1] == doctest::Approx(0.0));
  CHECK(r2.weights[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(r2.weights[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));

  const GllRule r7 = gll_rule(7);
  // Exact through degree 2p - 1 = 13.
  for (int d = 0; d <= 13; ++d) {
    double q = 0.0;
    for (Index i = 0; i < r7.nodes.size(); ++i) q += r7.weights[i] * std::pow(r7.nodes[i], d);
    const double exact = d % 2 == 1 ? 0.0 : 2.0 / (d + 1.0);
    CHECK(q == doctest::Approx(exact).epsilon(1e-13));
  }
  const Matrix d = gll_derivative_matrix(r7);
  const Vector cube = r7.nodes.array().cube();
  CHECK((d * cube - Vector(3.0 * r7.nodes.array().square())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mass integrates one exactly") {
  const Sem1dSpace s = assemble_sem1d(1, 2, SemBoundary::neumann);
  CHECK(s.mass.sum() == doctest::Approx(1.0).epsilon(1e-14));
  const Sem1dSpace big = assemble_sem1d(64, 7, SemBoundary::neumann);
  CHECK(std::abs(big.mass.sum() - 1.0) < 1e-13);
}

TEST_CASE("stiffness quadratic form of u = x is one") {
  const Sem1dSpace s = assemble_sem1d(5, 4, SemBoundary::neumann);
  const Vector u = s.restrict_to_dofs(s.all_nodes);
  CHECK(u.dot(s.stiffness * u) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("node counts and boundary elimination") {
  const Sem1dSpace d = assemble_sem1d(64, 7, SemBoundary::dirichlet0);
  CHECK(d.n_global_nodes() == 449);
  CHECK(d.n_dofs() == 447);
  CHECK(assemble_sem1d(64, 7, SemBoundary::periodic).n_dofs() == 448);
  CHECK(assemble_sem1d(64, 7, SemBoundary::neumann).n_dofs() == 449);
  CHECK(d.all_nodes[0] == 0.0);
  CHECK(d.all_nodes[448] == 1.0);
  CHECK_THROWS_AS(assemble_sem1d(0, 7, SemBoundary::dirichlet0), DimensionError);
  CHECK_THROWS_AS(assemble_sem1d(4, 1, SemBoundary::dirichlet0), DimensionError);
}

TEST_CASE("stiffness is symmetric semi-definite with constants in its null space") {
  for (SemBoundary bc : {SemBoundary::neumann, SemBoundary::periodic, SemBoundary::dirichlet0}) {
    const Sem1dSpace s = assemble_sem1d(8, 5, bc);
    CHECK((s.stiffness - s.stiffness.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(s.stiffness);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    if (bc != SemBoundary::dirichlet0) {
      CHECK((s.stiffness * Vector::Ones(s.n_dofs())).cwiseAbs().maxCoeff() < 1e-11);
    } else {
      // smallest generalized eigenvalue of (K, M) approximates pi^2
      const Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> gen(s.stiffness, Matrix(s.mass.asDiagonal()));
      CHECK(gen.eigenvalues().minCoeff() == doctest::Approx(pi * pi).epsilon(1e-6));
    }
  }
}

TEST_CASE("delta = 0 is the identity") {
  const Sem1dSpace s = assemble_sem1d(16, 7, SemBoundary::dirichlet0);
  const Vector u = s.restrict_to_dofs((2.0 * pi * s.all_nodes.array()).sin().matrix());
  CHECK((sem_hoaf_apply(s, u, 0.0, 3) - u).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("m = 1 equals the discretized Helmholtz filter") {
  const Sem1dSpace s = assemble_sem1d(16, 7, SemBoundary::dirichlet0);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal;
  Vector u(s.n_dofs());
  for (Index i = 0; i < u.size(); ++i) u[i] = normal(gen);
  const double delta = 0.05;
  // (B + delta^2 A) ubar = B u
  const Matrix helm = s.mass_matrix() + delta * delta * s.stiffness;
  const Vector direct = helm.ldlt().solve(s.mass.cwiseProduct(u));
  // (I + delta^2 B^{-1} A) ubar = u, dense LU.
  const Matrix generic = Matrix::Identity(s.n_dofs(), s.n_dofs()) +
                         delta * delta * s.mass.cwiseInverse().asDiagonal() * s.stiffness;
  const Vector lu = generic.partialPivLu().solve(u);
  const Vector got = sem_hoaf_apply(s, u, delta, 1);
  CHECK((got - direct).norm() <= 1e-12 * u.norm());
  CHECK((got - lu).norm() <= 1e-12 * u.norm());
}

TEST_CASE("periodic sine is an approximate eigenfunction") {
  const Sem1dSpace s = assemble_sem1d(32, 7, SemBoundary::periodic);
  const double delta = 0.03;
  for (int k : {1, 3}) {
    const Vector u = s.restrict_to_dofs((2.0 * pi * k * s.all_nodes.array()).sin().matrix());
    const Vector out = sem_hoaf_apply(s, u, delta, 2);
    const double expect = 1.0 / (1.0 + std::pow(delta * 2.0 * pi * k, 4));
    CHECK((out - expect * u).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("filter is a B-norm contraction") {
  const Sem1dSpace s = assemble_sem1d(16, 6, SemBoundary::dirichlet0);
  std::mt19937_64 gen(11);
  std::normal_distribution<double> normal;
  auto b_norm = [&](const Vector& v) { return std::sqrt(v.dot(s.mass.cwiseProduct(v))); };
  for (int trial = 0; trial < 10; ++trial) {
    Vector u(s.n_dofs());
    for (Index i = 0; i < u.size(); ++i) u[i] = normal(gen);
    for (int m = 1; m <= 4; ++m) CHECK(b_norm(sem_hoaf_apply(s, u, 0.04, m)) <= b_norm(u) * (1.0 + 1e-12));
  }
}

TEST_CASE("three-mode low-pass study") {
  const FilterStudy study = run_filter_study(64, 7, 0.025, {1, 2, 3, 4});
  REQUIRE(study.amplitude_ratios.size() == 4);
  const auto k2 = [&](int i) { return study.amplitude_ratios[static_cast<std::size_t>(i)][0]; };
  const auto k20 = [&](int i) { return study.amplitude_ratios[static_cast<std::size_t>(i)][2]; };
  CHECK(k20(3) <= kEliminated);
  CHECK(k2(3) >= kUnaffected);
  for (int i = 0; i < 3; ++i) {
    CHECK(k20(i + 1) < k20(i));
    CHECK(k2(i + 1) > k2(i));
    // a little leakage from the other modes enters the sine fit
    CHECK(k2(i + 1) <= 1.01);
  }
  for (double r : study.fit_residuals) CHECK(r < 0.02);
  // Input fit recovers the prescribed amplitudes.
  const Sem1dSpace s = assemble_sem1d(64, 7, SemBoundary::dirichlet0);
  const SineFit fit = fit_sines(s, study.u_in, {2.0 * pi, 10.0 * pi, 20.0 * pi});
  CHECK(fit.amplitudes[2] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.relative_residual < 1e-12);
}
