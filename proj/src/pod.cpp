#include "regrom/pod.hpp"

#include <sstream>

namespace regrom {

double weighted_dot(const Vector& w, const Vector& u, const Vector& v) {
  return (w.array() * u.array() * v.array()).sum();
}

Index numerical_rank(const Vector& eigenvalues) {
  if (eigenvalues.size() == 0 || !(eigenvalues[0] > 0.0)) return 0;
  const double cutoff = kPodRankTolerance * eigenvalues[0];
  Index r = 0;
  while (r < eigenvalues.size() && eigenvalues[r] > cutoff) ++r;
  return r;
}

PodBasis build_pod(const SnapshotSet& snapshots, Index n_modes) {
  snapshots.validate();
  const Index K = snapshots.size();
  if (K < 2) throw Error("build_pod: need at least 2 snapshots");
  if (n_modes < 1 || n_modes > K) throw Error("build_pod: n_modes must lie in [1, K]");

  PodBasis basis;
  basis.grid = snapshots.grid;
  basis.quad_weights = snapshots.quad_weights;
  basis.n_snapshots = K;
  basis.zeroth_mode = snapshots.fields.colwise().mean().transpose();

  Matrix X = snapshots.fields.rowwise() - basis.zeroth_mode.transpose();  // K x n
  Matrix Xw = X * snapshots.quad_weights.asDiagonal();
  Matrix gram = (Xw * X.transpose()) / static_cast<double>(K);
  gram = 0.5 * (gram + gram.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) throw Error("build_pod: Gramian eigendecomposition failed");
  // Eigen returns ascending order.
  const Vector evals = eig.eigenvalues().reverse();
  const Matrix evecs = eig.eigenvectors().rowwise().reverse();
  basis.eigenvalues = evals.cwiseMax(0.0);

  const Index rank = numerical_rank(basis.eigenvalues);
  if (n_modes > rank) {
    std::ostringstream msg;
    msg << "build_pod: requested " << n_modes << " modes but the numerical rank is " << rank;
    throw Error(msg.str());
  }

  Matrix modes = X.transpose() * evecs.leftCols(n_modes);  // n x N
  for (Index i = 0; i < n_modes; ++i) {
    modes.col(i) /= std::sqrt(static_cast<double>(K) * basis.eigenvalues[i]);
  }
  // Two passes of weighted modified Gram-Schmidt remove the round-off
  // that the snapshot method leaves in modes with small eigenvalues.
  const Vector& w = snapshots.quad_weights;
  for (int pass = 0; pass < 2; ++pass) {
    for (Index i = 0; i < n_modes; ++i) {
      for (Index j = 0; j < i; ++j) {
        modes.col(i) -= weighted_dot(w, modes.col(j), modes.col(i)) * modes.col(j);
      }
      modes.col(i) /= std::sqrt(weighted_dot(w, modes.col(i), modes.col(i)));
    }
  }
  for (Index i = 0; i < n_modes; ++i) {
    Index arg = 0;
    modes.col(i).cwiseAbs().maxCoeff(&arg);
    if (modes(arg, i) < 0.0) modes.col(i) *= -1.0;
  }
  basis.modes = std::move(modes);
  return basis;
}

PodBasis PodBasis::truncated(Index n) const {
  if (n < 0 || n > n_modes()) throw DimensionError("PodBasis::truncated: n out of range");
  PodBasis out = *this;
  out.modes = modes.leftCols(n);
  return out;
}

Vector project(const PodBasis& basis, const Vector& field) {
  if (field.size() != basis.zeroth_mode.size()) throw DimensionError("project: grid mismatch");
  const Vector fluct = (field - basis.zeroth_mode).cwiseProduct(basis.quad_weights);
  return basis.modes.transpose() * fluct;
}

Matrix project_snapshots(const PodBasis& basis, const SnapshotSet& snapshots, Index n) {
  if (snapshots.fields.cols() != basis.zeroth_mode.size()) throw DimensionError("project_snapshots: grid mismatch");
  if (n < 0 || n > basis.n_modes()) throw DimensionError("project_snapshots: n out of range");
  Matrix X = snapshots.fields.rowwise() - basis.zeroth_mode.transpose();
  return X * basis.quad_weights.asDiagonal() * basis.modes.leftCols(n);
}

Vector reconstruct(const PodBasis& basis, const Vector& coefficients) {
  if (coefficients.size() > basis.n_modes()) throw DimensionError("reconstruct: too many coefficients");
  return basis.zeroth_mode + basis.modes.leftCols(coefficients.size()) * coefficients;
}

}  // namespace regrom
