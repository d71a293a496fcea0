#pragma once

#include "regrom/types.hpp"

#include <array>
#include <span>

namespace regrom {

/// Weights of the order-k backward-difference / extrapolation pair.
///
///   gamma0/dt u^{n+1} + L u^{n+1} = sum_q beta_q u^{n-q} / dt + sum_q ext_q N^{n-q}
///
/// k = 3 gives gamma0 = 11/6, beta = (3, -3/2, 1/3), ext = (3, -3, 1).
struct BdfExtCoefficients {
  int order;
  double gamma0;
  std::array<double, 3> beta;
  std::array<double, 3> ext;
};

BdfExtCoefficients bdf_ext_coefficients(int order);

/// Right-hand side of one BDFk/EXTk step. Histories are ordered newest
/// first and must hold at least `order` entries.
template <class Vec>
Vec bdf_ext_rhs(int order, std::span<const Vec> states, std::span<const Vec> nonlinear, double dt) {
  const BdfExtCoefficients c = bdf_ext_coefficients(order);
  if (static_cast<int>(states.size()) < order || static_cast<int>(nonlinear.size()) < order) {
    throw Error("bdf_ext_rhs: not enough history levels for the requested order");
  }
  Vec rhs = (c.beta[0] / dt) * states[0] + c.ext[0] * nonlinear[0];
  for (int q = 1; q < order; ++q) {
    rhs += (c.beta[q] / dt) * states[q] + c.ext[q] * nonlinear[q];
  }
  return rhs;
}

/// One BDF3/EXT3 step with a diagonal implicit operator:
/// (gamma0/dt + diag) u^{n+1} = rhs. Throws SingularSystemError if any
/// diagonal entry of the Helmholtz operator vanishes.
Vector bdf3ext3_step(std::span<const Vector> states, const Vector& linear_diagonal,
                     std::span<const Vector> nonlinear, double dt);

/// Same with a dense implicit operator. The Helmholtz matrix is factored
/// with partial pivoting; a reciprocal condition estimate below 1e-14 is
/// reported as SingularSystemError.
Vector bdf3ext3_step_dense(std::span<const Vector> states, const Matrix& linear_op,
                           std::span<const Vector> nonlinear, double dt);

}  // namespace regrom
