#pragma once

#include "regrom/fom.hpp"
#include "regrom/types.hpp"

namespace regrom {

/// Time-mean zeroth mode plus N L2-orthonormal fluctuation modes.
struct PodBasis {
  GridSpec grid;
  Vector zeroth_mode;   ///< phi_0, the time-averaged field
  Matrix modes;         ///< n_points x N, columns phi_1..phi_N
  Vector eigenvalues;   ///< all K Gramian eigenvalues, nonincreasing
  Index n_snapshots = 0;
  Vector quad_weights;

  Index n_modes() const { return modes.cols(); }
  /// First n modes of this basis (POD nesting).
  PodBasis truncated(Index n) const;
};

/// Relative eigenvalue threshold below which a mode is numerically absent.
inline constexpr double kPodRankTolerance = 1e-12;

/// Method of snapshots: Gramian G_kl = (1/K) (u_k - phi0, u_l - phi0)_w.
/// Each mode's largest-magnitude entry is made positive. Throws if
/// n_modes exceeds the numerical rank, quoting the attainable rank.
PodBasis build_pod(const SnapshotSet& snapshots, Index n_modes);

/// Number of eigenvalues above kPodRankTolerance * lambda_1.
Index numerical_rank(const Vector& eigenvalues);

/// Coefficients (phi_j, u - phi_0)_w, j = 1..N.
Vector project(const PodBasis& basis, const Vector& field);

/// Coefficient series (rows) for every snapshot, truncated to n modes.
Matrix project_snapshots(const PodBasis& basis, const SnapshotSet& snapshots, Index n);

/// phi_0 + sum_j a_j phi_j.
Vector reconstruct(const PodBasis& basis, const Vector& coefficients);

/// Weighted inner product (u, v)_w.
double weighted_dot(const Vector& w, const Vector& u, const Vector& v);

}  // namespace regrom
