#include "doctest.h"

#include "regrom/pod.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace regrom;

namespace {

constexpr double pi = std::numbers::pi;

SnapshotSet ks_snapshots(long n_steps = 20000, long stride = 100) {
  FomConfig cfg;
  cfg.equation = Equation::kuramoto_sivashinsky;
  cfg.viscosity = 1.0;
  cfg.dt = 0.01;
  cfg.n_steps = n_steps;
  cfg.snapshot_stride = stride;
  return run_fom(cfg, GridSpec{64, 22.0});
}

double gram_defect(const PodBasis& b) {
  const Matrix g = b.modes.transpose() * b.quad_weights.asDiagonal() * b.modes;
  return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("rank-one data") {
  SnapshotSet s;
  s.grid = GridSpec{32, 2.0};
  s.quad_weights = uniform_weights(s.grid);
  const Vector x = s.grid.coordinates();
  const Vector sine = (2.0 * pi * x.array() / s.grid.domain_length).sin();
  s.fields.resize(2, 32);
  s.fields.row(0) = sine.transpose();
  s.fields.row(1) = 2.0 * sine.transpose();
  s.times = {0.0, 1.0};
  CHECK(numerical_rank(build_pod(s, 1).eigenvalues) == 1);
  const PodBasis b = build_pod(s, 1);
  // Unit L2 norm under uniform weights: sin / sqrt(L/2).
  const Vector expect = sine / std::sqrt(s.grid.domain_length / 2.0);
  CHECK((b.modes.col(0) - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((b.zeroth_mode - 1.5 * sine).cwiseAbs().maxCoeff() < 1e-12);
  try {
    build_pod(s, 2);
    FAIL("rank violation accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("rank is 1") != std::string::npos);
  }
}

TEST_CASE("KS basis: orthonormal, sorted, zero-mean, energy sum") {
  const SnapshotSet s = ks_snapshots();
  const PodBasis b = build_pod(s, 20);
  CHECK(gram_defect(b) <= 1e-10);
  for (Index i = 1; i < b.eigenvalues.size(); ++i) CHECK(b.eigenvalues[i] <= b.eigenvalues[i - 1]);
  CHECK(b.eigenvalues.minCoeff() >= -1e-12 * b.eigenvalues[0]);
  // Unforced KS conserves the spatial mean, which phi_0 carries.
  for (Index j = 0; j < b.n_modes(); ++j) CHECK(std::abs(b.quad_weights.dot(b.modes.col(j))) < 1e-10);

  double energy = 0.0;
  for (Index k = 0; k < s.size(); ++k) {
    const Vector f = s.fields.row(k).transpose() - b.zeroth_mode;
    energy += weighted_dot(s.quad_weights, f, f);
  }
  energy /= static_cast<double>(s.size());
  CHECK(b.eigenvalues.sum() == doctest::Approx(energy).epsilon(1e-10));
  // Sign convention: largest-magnitude entry positive.
  for (Index j = 0; j < b.n_modes(); ++j) {
    Index at;
    b.modes.col(j).cwiseAbs().maxCoeff(&at);
    CHECK(b.modes(at, j) > 0.0);
  }
  // Deterministic and nested.
  const PodBasis b5 = build_pod(s, 5);
  CHECK(b5.modes == b.modes.leftCols(5));
  CHECK(b.truncated(5).modes == b5.modes);
}

TEST_CASE("full-rank reconstruction of the training snapshots") {
  // K = 20 widely spaced snapshots keep every eigenvalue above the rank cut.
  const SnapshotSet s = ks_snapshots(10000, 400);
  const PodBasis probe = build_pod(s, 1);
  const Index rank = numerical_rank(probe.eigenvalues);
  CHECK(rank == s.size() - 1);
  const PodBasis b = build_pod(s, rank);
  CHECK(gram_defect(b) <= 1e-10);
  for (Index k = 0; k < s.size(); ++k) {
    const Vector u = s.fields.row(k).transpose();
    const Vector rec = reconstruct(b, project(b, u));
    CHECK(std::sqrt(weighted_dot(s.quad_weights, u - rec, u - rec) / weighted_dot(s.quad_weights, u, u)) <= 1e-8);
  }
}

TEST_CASE("projection properties") {
  const SnapshotSet s = ks_snapshots();
  const PodBasis b = build_pod(s, 12);
  CHECK(project(b, b.zeroth_mode).cwiseAbs().maxCoeff() < 1e-12);
  const Vector u = b.zeroth_mode + 3.0 * b.modes.col(1);
  Vector expect = Vector::Zero(12);
  expect[1] = 3.0;
  CHECK((project(b, u) - expect).cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal;
  Vector r(64);
  for (Index i = 0; i < 64; ++i) r[i] = normal(gen);
  const Vector resid = r - reconstruct(b, project(b, r));
  for (Index j = 0; j < b.n_modes(); ++j) CHECK(std::abs(weighted_dot(b.quad_weights, resid, b.modes.col(j))) <= 1e-10);

  // Projection error is non-increasing in N for every snapshot.
  for (Index k = 0; k < s.size(); k += 17) {
    const Vector f = s.fields.row(k).transpose();
    double prev = std::numeric_limits<double>::infinity();
    for (Index n = 0; n <= 12; ++n) {
      const PodBasis t = b.truncated(n);
      const Vector e = f - reconstruct(t, project(t, f));
      const double err = weighted_dot(b.quad_weights, e, e);
      CHECK(err <= prev * (1.0 + 1e-12) + 1e-14);
      prev = err;
    }
  }
  CHECK_THROWS_AS(project(b, Vector::Zero(10)), DimensionError);
}

TEST_CASE("argument validation") {
  const SnapshotSet s = ks_snapshots(2000, 100);
  CHECK_THROWS_AS(build_pod(s, 0), Error);
  CHECK_THROWS_AS(build_pod(s.slice(0, 1), 1), Error);
}
