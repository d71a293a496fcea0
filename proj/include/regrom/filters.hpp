#pragma once

#include "regrom/rom_operators.hpp"
#include "regrom/types.hpp"

namespace regrom {

/// Upper-triangular R with R^T R = M. Throws SingularSystemError when a
/// pivot is not positive.
Matrix cholesky_upper(const Matrix& spd);

/// Solves R^T R x = b with two triangular solves.
Vector cholesky_solve(const Matrix& upper, const Vector& b);

/// Higher-order algebraic filter (I + delta^{2m} A^m) on modes 1..N,
/// stored as its Cholesky factor. m = 1 is the differential filter.
struct FilterOperator {
  int m = 1;
  double delta = 0.0;
  Index n = 0;
  Matrix factor;  ///< upper-triangular R

  /// The system matrix R^T R.
  Matrix system_matrix() const { return factor.transpose() * factor; }
};

inline constexpr double kFilterSymmetryTolerance = 1e-8;

/// Builds from the fluctuation block A[1..N, 1..N] of the operators.
FilterOperator build_filter(const RomOperators& ops, double delta, int m);

/// Builds from an explicit symmetric stiffness block (no zeroth mode).
/// delta = 0 is accepted and yields the identity filter.
FilterOperator build_filter(const Matrix& stiffness, double delta, int m);

/// The system matrix I + delta^{2m} A^m, assembled directly.
Matrix hoaf_system_matrix(const Matrix& stiffness, double delta, int m);

/// Filtered coefficients abar solving (I + delta^{2m} A^m) abar = a.
Vector apply_filter(const FilterOperator& filter, const Vector& a);

/// Dense filter application matrix F = (I + delta^{2m} A^m)^{-1}.
Matrix filter_matrix(const FilterOperator& filter);

/// abar_i for unit input e_i, i = 1..N.
Vector transfer_diagnostic(const FilterOperator& filter);

}  // namespace regrom
