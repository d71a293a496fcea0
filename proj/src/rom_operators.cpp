#include "regrom/rom_operators.hpp"

#include "regrom/spectral.hpp"

namespace regrom {

Vector AdvectionTensor::contract(const Vector& advect, const Vector& field, Index first) const {
  if (advect.size() != size_ || field.size() != size_) throw DimensionError("AdvectionTensor::contract: size mismatch");
  const Index rows = size_ - first;
  Eigen::Map<const RowMajorMatrix> flat(data_.data() + static_cast<std::size_t>(first * size_ * size_),
                                        rows * size_, size_);
  const Vector inner = flat * field;  // index (i, k)
  Eigen::Map<const RowMajorMatrix> per_i(inner.data(), rows, size_);
  return per_i * advect;
}

AdvectionTensor AdvectionTensor::truncated(Index size) const {
  if (size > size_) throw DimensionError("AdvectionTensor::truncated: size too large");
  AdvectionTensor out(size);
  for (Index i = 0; i < size; ++i)
    for (Index k = 0; k < size; ++k)
      for (Index j = 0; j < size; ++j) out(i, k, j) = (*this)(i, k, j);
  return out;
}

Matrix RomOperators::linear_operator(double nu) const {
  if (equation == Equation::burgers) return nu * A;
  return nu * D - A;
}

RomOperators RomOperators::truncated(Index n_sub) const {
  if (n_sub < 1 || n_sub > n) throw DimensionError("RomOperators::truncated: n out of range");
  RomOperators out;
  out.n = n_sub;
  out.equation = equation;
  out.A = A.topLeftCorner(n_sub + 1, n_sub + 1);
  out.B = B.topLeftCorner(n_sub + 1, n_sub + 1);
  out.D = D.topLeftCorner(n_sub + 1, n_sub + 1);
  out.forcing = forcing.head(n_sub + 1);
  out.C = C.truncated(n_sub + 1);
  return out;
}

RomOperators assemble_operators(const PodBasis& basis, const GridSpec& grid, const OperatorPhysics& physics) {
  grid.validate();
  if (basis.zeroth_mode.size() != grid.n_points || basis.grid.n_points != grid.n_points ||
      std::abs(basis.grid.domain_length - grid.domain_length) > 1e-12 * grid.domain_length) {
    throw DimensionError("assemble_operators: basis and grid disagree");
  }
  const Index N = basis.n_modes();
  const Index S = N + 1;
  Matrix P(grid.n_points, S);
  P.col(0) = basis.zeroth_mode;
  P.rightCols(N) = basis.modes;

  PeriodicSpectral fft(grid.n_points, grid.domain_length);
  Matrix dP(grid.n_points, S), d2P(grid.n_points, S);
  for (Index j = 0; j < S; ++j) {
    const Vector col = P.col(j);
    dP.col(j) = fft.derivative(col, 1);
    d2P.col(j) = fft.derivative(col, 2);
  }
  const auto W = basis.quad_weights.asDiagonal();

  RomOperators ops;
  ops.n = N;
  ops.equation = physics.equation;
  ops.A = dP.transpose() * W * dP;
  ops.B = P.transpose() * W * P;
  ops.D = d2P.transpose() * W * d2P;
  FomConfig forcing_cfg;
  forcing_cfg.forcing_amplitude = physics.forcing_amplitude;
  forcing_cfg.forcing_mode = physics.forcing_mode;
  ops.forcing = P.transpose() * W * fom_forcing(forcing_cfg, grid);

  ops.C = AdvectionTensor(S);
  const Matrix PW = W * P;  // n x S
  for (Index k = 0; k < S; ++k) {
    for (Index j = 0; j < S; ++j) {
      const Vector prod = P.col(k).cwiseProduct(dP.col(j));
      const Vector col = PW.transpose() * prod;
      for (Index i = 0; i < S; ++i) ops.C(i, k, j) = col[i];
    }
  }
  return ops;
}

Vector grom_rhs(const RomOperators& ops, const Vector& a, double nu) {
  if (a.size() != ops.n + 1) throw DimensionError("grom_rhs: coefficient vector must have length N+1");
  if (a[0] != 1.0) throw Error("grom_rhs: zeroth coefficient must equal 1");
  const Matrix K = ops.linear_operator(nu);
  return -ops.C.contract(a, a, 1) - K.bottomRows(ops.n) * a + ops.forcing.tail(ops.n);
}

}  // namespace regrom
