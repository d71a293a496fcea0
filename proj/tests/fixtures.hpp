#pragma once

// Small shared builders for the unit tests.

#include "regrom/fom.hpp"
#include "regrom/pod.hpp"
#include "regrom/rom_operators.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace fixtures {

using namespace regrom;

inline SnapshotSet ks_snapshots(long n_steps, long stride, Index n_points = 64, double length = 22.0) {
  FomConfig cfg;
  cfg.equation = Equation::kuramoto_sivashinsky;
  cfg.viscosity = 1.0;
  cfg.dt = 0.01;
  cfg.n_steps = n_steps;
  cfg.snapshot_stride = stride;
  return run_fom(cfg, GridSpec{n_points, length});
}

struct KsSystem {
  SnapshotSet snapshots;
  PodBasis basis;
  RomOperators ops;
};

inline KsSystem ks_system(Index n_modes, long n_steps = 40000, long stride = 40, Index n_points = 64,
                          double length = 22.0) {
  KsSystem s;
  s.snapshots = ks_snapshots(n_steps, stride, n_points, length);
  s.basis = build_pod(s.snapshots, n_modes);
  OperatorPhysics physics;
  physics.equation = Equation::kuramoto_sivashinsky;
  s.ops = assemble_operators(s.basis, s.snapshots.grid, physics);
  return s;
}

inline Vector random_vector(Index n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(gen);
  return v;
}

/// Random SPD matrix with eigenvalues spread over `decades`.
inline Matrix random_spd(Index n, std::mt19937_64& gen, double decades = 3.0) {
  Matrix g(n, n);
  std::normal_distribution<double> normal;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = normal(gen);
  const Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ();
  Vector lambda(n);
  for (Index i = 0; i < n; ++i) lambda[i] = std::pow(10.0, decades * static_cast<double>(i) / std::max<Index>(n - 1, 1));
  Matrix a = q * lambda.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

}  // namespace fixtures
