#include "regrom/filters.hpp"

#include <cmath>
#include <sstream>

namespace regrom {

Matrix cholesky_upper(const Matrix& spd) {
  if (spd.rows() != spd.cols()) throw DimensionError("cholesky_upper: matrix must be square");
  const Index n = spd.rows();
  Matrix R = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double pivot = spd(j, j);
    for (Index k = 0; k < j; ++k) pivot -= R(k, j) * R(k, j);
    if (!(pivot > 0.0)) {
      std::ostringstream msg;
      msg << "cholesky_upper: non-positive pivot " << pivot << " at column " << j;
      throw SingularSystemError(msg.str(), 0.0);
    }
    const double rjj = std::sqrt(pivot);
    R(j, j) = rjj;
    for (Index i = j + 1; i < n; ++i) {
      double s = spd(j, i);
      for (Index k = 0; k < j; ++k) s -= R(k, j) * R(k, i);
      R(j, i) = s / rjj;
    }
  }
  return R;
}

Vector cholesky_solve(const Matrix& upper, const Vector& b) {
  if (upper.rows() != b.size()) throw DimensionError("cholesky_solve: size mismatch");
  Vector y = upper.transpose().triangularView<Eigen::Lower>().solve(b);
  return upper.triangularView<Eigen::Upper>().solve(y);
}

Matrix hoaf_system_matrix(const Matrix& stiffness, double delta, int m) {
  if (m < 1 || m > 4) throw Error("hoaf_system_matrix: filter order m must lie in 1..4");
  if (stiffness.rows() != stiffness.cols()) throw DimensionError("hoaf_system_matrix: stiffness must be square");
  const Matrix sym = 0.5 * (stiffness + stiffness.transpose());
  Matrix power = sym;
  for (int p = 1; p < m; ++p) power = power * sym;
  Matrix H = Matrix::Identity(sym.rows(), sym.cols()) + std::pow(delta, 2 * m) * power;
  return 0.5 * (H + H.transpose());
}

FilterOperator build_filter(const Matrix& stiffness, double delta, int m) {
  if (!(delta >= 0.0)) throw Error("build_filter: delta must be nonnegative");
  if (stiffness.rows() != stiffness.cols()) throw DimensionError("build_filter: stiffness must be square");
  const double scale = std::max(1.0, stiffness.cwiseAbs().maxCoeff());
  const double defect = (stiffness - stiffness.transpose()).cwiseAbs().maxCoeff();
  if (defect > kFilterSymmetryTolerance * scale) {
    std::ostringstream msg;
    msg << "build_filter: stiffness asymmetry " << defect << " exceeds tolerance";
    throw Error(msg.str());
  }
  FilterOperator f;
  f.m = m;
  f.delta = delta;
  f.n = stiffness.rows();
  f.factor = cholesky_upper(hoaf_system_matrix(stiffness, delta, m));
  return f;
}

FilterOperator build_filter(const RomOperators& ops, double delta, int m) {
  if (!(delta > 0.0)) throw Error("build_filter: delta must be positive");
  return build_filter(Matrix(ops.A.bottomRightCorner(ops.n, ops.n)), delta, m);
}

Vector apply_filter(const FilterOperator& filter, const Vector& a) {
  if (a.size() != filter.n) throw DimensionError("apply_filter: dimension mismatch");
  return cholesky_solve(filter.factor, a);
}

Matrix filter_matrix(const FilterOperator& filter) {
  Matrix F(filter.n, filter.n);
  for (Index i = 0; i < filter.n; ++i) F.col(i) = apply_filter(filter, Vector::Unit(filter.n, i));
  return F;
}

Vector transfer_diagnostic(const FilterOperator& filter) {
  Vector out(filter.n);
  for (Index i = 0; i < filter.n; ++i) out[i] = apply_filter(filter, Vector::Unit(filter.n, i))[i];
  return out;
}

}  // namespace regrom
