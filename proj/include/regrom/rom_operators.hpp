#pragma once

#include "regrom/fom.hpp"
#include "regrom/pod.hpp"
#include "regrom/types.hpp"

#include <vector>

namespace regrom {

/// Dense advection tensor C_ikj = (phi_i, phi_k d_x phi_j) over modes 0..N,
/// stored row-major in (i, k, j) order.
class AdvectionTensor {
public:
  AdvectionTensor() = default;
  explicit AdvectionTensor(Index size) : size_(size), data_(static_cast<std::size_t>(size * size * size), 0.0) {}

  Index size() const noexcept { return size_; }
  double& operator()(Index i, Index k, Index j) { return data_[offset(i, k, j)]; }
  double operator()(Index i, Index k, Index j) const { return data_[offset(i, k, j)]; }
  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  /// out_i = sum_k advect_k sum_j C_ikj field_j for i = first..size-1.
  /// k is the outer sum, j the inner one.
  Vector contract(const Vector& advect, const Vector& field, Index first = 1) const;

  AdvectionTensor truncated(Index size) const;

private:
  std::size_t offset(Index i, Index k, Index j) const {
    return static_cast<std::size_t>((i * size_ + k) * size_ + j);
  }
  Index size_ = 0;
  std::vector<double> data_;
};

/// Physics the reduced operators are assembled for.
struct OperatorPhysics {
  Equation equation = Equation::burgers;
  double forcing_amplitude = 0.0;
  int forcing_mode = 1;
};

/// Reduced operators over modes 0..N.
///
/// A_ij = (phi_i', phi_j'), B_ij = (phi_i, phi_j), C as above.
/// For Kuramoto-Sivashinsky the fourth-order term needs
/// D_ij = (phi_i'', phi_j''); `forcing` holds (phi_i, f).
struct RomOperators {
  Index n = 0;
  Equation equation = Equation::burgers;
  Matrix A;
  Matrix B;
  AdvectionTensor C;
  Matrix D;
  Vector forcing;

  /// Linear operator K with da/dt = -C(a, a) - K a + forcing:
  /// nu A for Burgers, nu D - A for KS. Size (N+1) x (N+1).
  Matrix linear_operator(double nu) const;

  /// Sub-block over modes 0..n_sub (POD nesting).
  RomOperators truncated(Index n_sub) const;
};

/// Assembles A, B, C (and D, forcing) from the basis by spectral
/// differentiation of the modes and uniform-weight quadrature.
RomOperators assemble_operators(const PodBasis& basis, const GridSpec& grid,
                                const OperatorPhysics& physics = {});

/// Galerkin right-hand side for modes 1..N; `a` includes a_0 = 1.
///   rhs_i = -sum_{k,j=0..N} C_ikj a_k a_j - sum_{j=0..N} K_ij a_j + forcing_i
Vector grom_rhs(const RomOperators& ops, const Vector& a, double nu);

}  // namespace regrom
