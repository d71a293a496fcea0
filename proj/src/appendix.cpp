#include "regrom/appendix.hpp"

#include "regrom/filters.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <random>

namespace regrom {

Vector mixed_form_solve(const Matrix& stiffness, const Vector& u, double delta) {
  const Index n = stiffness.rows();
  if (stiffness.cols() != n || u.size() != n) throw DimensionError("mixed_form_solve: size mismatch");
  const double d4 = std::pow(delta, 4);
  // Unknowns ordered (ubar, w).
  Matrix block = Matrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = -stiffness;
  block.topRightCorner(n, n).setIdentity();
  block.bottomLeftCorner(n, n).setIdentity();
  block.bottomRightCorner(n, n) = d4 * stiffness;
  Vector rhs = Vector::Zero(2 * n);
  rhs.tail(n) = u;
  const Eigen::PartialPivLU<Matrix> lu(block);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) throw SingularSystemError("mixed_form_solve: block system is singular", rcond);
  return lu.solve(rhs).head(n);
}

Vector mixed_form_solve(const RomOperators& ops, const Vector& u, double delta) {
  return mixed_form_solve(Matrix(ops.A.bottomRightCorner(ops.n, ops.n)), u, delta);
}

AppendixCheck verify_mixed_form(Index n, int samples, double delta, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto random_matrix = [&](Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    return m;
  };
  const Matrix g = random_matrix(n, n);
  // Spread eigenvalues over a few decades like a POD stiffness.
  const Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ();
  Vector lambda(n);
  for (Index i = 0; i < n; ++i) lambda(i) = std::pow(10.0, 3.0 * static_cast<double>(i) / std::max<Index>(n - 1, 1));
  Matrix a = q * lambda.asDiagonal() * q.transpose();
  a = 0.5 * (a + a.transpose()).eval();

  const FilterOperator f = build_filter(a, delta, 2);
  AppendixCheck check;
  check.n = n;
  check.samples = samples;
  for (int s = 0; s < samples; ++s) {
    const Vector u = random_matrix(n, 1);
    const Vector mixed = mixed_form_solve(a, u, delta);
    const Vector direct = apply_filter(f, u);
    check.max_relative_difference = std::max(check.max_relative_difference, (mixed - direct).norm() / direct.norm());
  }
  return check;
}

}  // namespace regrom
