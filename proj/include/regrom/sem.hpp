#pragma once

#include "regrom/types.hpp"

#include <vector>

namespace regrom {

enum class SemBoundary {
  dirichlet0,  ///< u(0) = u(1) = 0, boundary dofs removed
  periodic,    ///< node at x = 1 identified with x = 0
  neumann,     ///< natural boundary, every node is a dof
};

/// Gauss-Lobatto-Legendre nodes on [-1, 1] (ascending) and weights.
struct GllRule {
  Vector nodes;
  Vector weights;
};
GllRule gll_rule(int poly_order);

/// Legendre polynomial P_n(x).
double legendre(int n, double x);

/// Nodal differentiation matrix on the GLL nodes.
Matrix gll_derivative_matrix(const GllRule& rule);

/// 1D spectral-element space on [0, 1] with uniform elements.
struct Sem1dSpace {
  int n_elements = 0;
  int poly_order = 0;
  SemBoundary bc = SemBoundary::dirichlet0;
  Vector all_nodes;                ///< n_elements * poly_order + 1 coordinates
  std::vector<Index> dof_nodes;    ///< indices into all_nodes, one per dof
  Vector mass;                     ///< diagonal of B on the dofs
  Matrix stiffness;                ///< A on the dofs

  Index n_dofs() const { return static_cast<Index>(dof_nodes.size()); }
  Index n_global_nodes() const { return all_nodes.size(); }
  Matrix mass_matrix() const { return mass.asDiagonal(); }
  /// Dof values sampled from a full nodal vector.
  Vector restrict_to_dofs(const Vector& full) const;
  /// Full nodal vector (boundary zeros or periodic copy filled in).
  Vector extend_from_dofs(const Vector& dofs) const;
};

Sem1dSpace assemble_sem1d(int n_elements, int poly_order, SemBoundary bc);

/// Solves (I + delta^{2m} (B^{-1} A)^m) ubar = u on the dofs. Uses the
/// similar symmetric matrix S = B^{-1/2} A B^{-1/2} so the generic
/// Cholesky filter applies. delta = 0 returns u.
Vector sem_hoaf_apply(const Sem1dSpace& space, const Vector& u_dofs, double delta, int m);

/// B-weighted least-squares fit of a full nodal field onto sin(w x).
struct SineFit {
  Vector amplitudes;
  double relative_residual = 0.0;  ///< ||u - fit||_B / ||u||_B
};
SineFit fit_sines(const Sem1dSpace& space, const Vector& full, const std::vector<double>& angular);

/// The three-mode low-pass study: input sum of a_k sin(k pi x).
struct FilterStudy {
  Vector x;
  Vector u_in;
  std::vector<int> orders;
  std::vector<Vector> outputs;            ///< full nodal outputs per m
  std::vector<double> mode_labels;        ///< k in sin(k pi x)
  std::vector<Vector> amplitude_ratios;   ///< per m, output/input amplitude per mode
  std::vector<double> fit_residuals;      ///< per m
};

FilterStudy run_filter_study(int n_elements, int poly_order, double delta, const std::vector<int>& orders,
                             SemBoundary bc = SemBoundary::dirichlet0);

}  // namespace regrom
