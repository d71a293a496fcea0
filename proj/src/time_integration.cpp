#include "regrom/time_integration.hpp"

#include <cmath>
#include <sstream>

namespace regrom {

BdfExtCoefficients bdf_ext_coefficients(int order) {
  switch (order) {
    case 1:
      return {1, 1.0, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    case 2:
      return {2, 1.5, {2.0, -0.5, 0.0}, {2.0, -1.0, 0.0}};
    case 3:
      return {3, 11.0 / 6.0, {3.0, -1.5, 1.0 / 3.0}, {3.0, -3.0, 1.0}};
    default:
      throw Error("bdf_ext_coefficients: order must be 1, 2 or 3");
  }
}

Vector bdf3ext3_step(std::span<const Vector> states, const Vector& linear_diagonal,
                     std::span<const Vector> nonlinear, double dt) {
  const auto c = bdf_ext_coefficients(3);
  Vector rhs = bdf_ext_rhs<Vector>(3, states, nonlinear, dt);
  if (linear_diagonal.size() != rhs.size()) throw DimensionError("bdf3ext3_step: operator size mismatch");
  Vector h = linear_diagonal.array() + c.gamma0 / dt;
  const double scale = h.cwiseAbs().maxCoeff();
  const double smallest = h.cwiseAbs().minCoeff();
  if (!(smallest > 1e-14 * scale)) {
    std::ostringstream msg;
    msg << "bdf3ext3_step: Helmholtz diagonal is singular (min |h| = " << smallest << ", max |h| = " << scale << ")";
    throw SingularSystemError(msg.str(), scale > 0 ? smallest / scale : 0.0);
  }
  return rhs.cwiseQuotient(h);
}

Vector bdf3ext3_step_dense(std::span<const Vector> states, const Matrix& linear_op,
                           std::span<const Vector> nonlinear, double dt) {
  const auto c = bdf_ext_coefficients(3);
  Vector rhs = bdf_ext_rhs<Vector>(3, states, nonlinear, dt);
  if (linear_op.rows() != rhs.size() || linear_op.cols() != rhs.size()) {
    throw DimensionError("bdf3ext3_step_dense: operator size mismatch");
  }
  Matrix h = linear_op;
  h.diagonal().array() += c.gamma0 / dt;
  Eigen::PartialPivLU<Matrix> lu(h);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream msg;
    msg << "bdf3ext3_step_dense: Helmholtz matrix is singular (rcond = " << rcond << ")";
    throw SingularSystemError(msg.str(), rcond);
  }
  return lu.solve(rhs);
}

}  // namespace regrom
