#include "regrom/sem.hpp"

#include "regrom/filters.hpp"

#include <cmath>
#include <numbers>

namespace regrom {

double legendre(int n, double x) {
  if (n == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

GllRule gll_rule(int p) {
  if (p < 1) throw DimensionError("gll_rule: order must be >= 1");
  const int n = p + 1;
  GllRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton on (1 - x^2) P_p'(x) starting from Chebyshev-Gauss-Lobatto
  // points, via the Legendre recurrence.
  for (int i = 0; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * i / p);
    for (int it = 0; it < 100; ++it) {
      const double pp = legendre(p, x), pm = legendre(p - 1, x);
      // (1 - x^2) P_p' = p (P_{p-1} - x P_p)
      const double f = x * pp - pm;
      const double df = (p + 1) * pp;
      const double step = f / df;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes(i) = x;
  }
  rule.nodes(0) = -1.0;
  rule.nodes(p) = 1.0;
  for (int i = 0; i < n; ++i) {
    const double lp = legendre(p, rule.nodes(i));
    rule.weights(i) = 2.0 / (p * (p + 1.0) * lp * lp);
  }
  return rule;
}

Matrix gll_derivative_matrix(const GllRule& rule) {
  const Index n = rule.nodes.size();
  const int p = static_cast<int>(n) - 1;
  Vector lp(n);
  for (Index i = 0; i < n; ++i) lp(i) = legendre(p, rule.nodes(i));
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) d(i, j) = lp(i) / (lp(j) * (rule.nodes(i) - rule.nodes(j)));
  d(0, 0) = -p * (p + 1.0) / 4.0;
  d(p, p) = p * (p + 1.0) / 4.0;
  return d;
}

Vector Sem1dSpace::restrict_to_dofs(const Vector& full) const {
  if (full.size() != n_global_nodes()) throw DimensionError("restrict_to_dofs: expected a full nodal vector");
  Vector out(n_dofs());
  for (Index i = 0; i < n_dofs(); ++i) out(i) = full(dof_nodes[static_cast<std::size_t>(i)]);
  return out;
}

Vector Sem1dSpace::extend_from_dofs(const Vector& dofs) const {
  if (dofs.size() != n_dofs()) throw DimensionError("extend_from_dofs: expected a dof vector");
  Vector full = Vector::Zero(n_global_nodes());
  for (Index i = 0; i < n_dofs(); ++i) full(dof_nodes[static_cast<std::size_t>(i)]) = dofs(i);
  if (bc == SemBoundary::periodic) full(n_global_nodes() - 1) = full(0);
  return full;
}

Sem1dSpace assemble_sem1d(int n_elements, int poly_order, SemBoundary bc) {
  if (n_elements < 1) throw DimensionError("assemble_sem1d: need at least one element");
  if (poly_order < 2) throw DimensionError("assemble_sem1d: polynomial order must be >= 2");
  const GllRule rule = gll_rule(poly_order);
  const Matrix d = gll_derivative_matrix(rule);
  const double h = 1.0 / n_elements;
  const Matrix k_local = (2.0 / h) * d.transpose() * rule.weights.asDiagonal() * d;
  const Vector m_local = (h / 2.0) * rule.weights;

  const Index n_global = static_cast<Index>(n_elements) * poly_order + 1;
  Sem1dSpace s;
  s.n_elements = n_elements;
  s.poly_order = poly_order;
  s.bc = bc;
  s.all_nodes.resize(n_global);
  for (int e = 0; e < n_elements; ++e)
    for (int a = 0; a <= poly_order; ++a)
      s.all_nodes(e * poly_order + a) = h * e + h * (rule.nodes(a) + 1.0) / 2.0;
  s.all_nodes(n_global - 1) = 1.0;

  // Global node -> dof index (-1 when eliminated).
  std::vector<Index> dof_of(static_cast<std::size_t>(n_global));
  for (Index g = 0; g < n_global; ++g) dof_of[static_cast<std::size_t>(g)] = g;
  if (bc == SemBoundary::dirichlet0) {
    for (Index g = 0; g < n_global; ++g) dof_of[static_cast<std::size_t>(g)] = g - 1;
    dof_of.back() = -1;
  } else if (bc == SemBoundary::periodic) {
    dof_of.back() = 0;
  }
  for (Index g = 0; g < n_global; ++g) {
    const Index dof = dof_of[static_cast<std::size_t>(g)];
    if (dof >= 0 && dof == static_cast<Index>(s.dof_nodes.size())) s.dof_nodes.push_back(g);
  }
  const Index n_dofs = s.n_dofs();
  s.mass = Vector::Zero(n_dofs);
  s.stiffness = Matrix::Zero(n_dofs, n_dofs);
  for (int e = 0; e < n_elements; ++e) {
    for (int a = 0; a <= poly_order; ++a) {
      const Index ga = dof_of[static_cast<std::size_t>(e * poly_order + a)];
      if (ga < 0) continue;
      s.mass(ga) += m_local(a);
      for (int b = 0; b <= poly_order; ++b) {
        const Index gb = dof_of[static_cast<std::size_t>(e * poly_order + b)];
        if (gb < 0) continue;
        s.stiffness(ga, gb) += k_local(a, b);
      }
    }
  }
  s.stiffness = 0.5 * (s.stiffness + s.stiffness.transpose()).eval();
  return s;
}

Vector sem_hoaf_apply(const Sem1dSpace& space, const Vector& u, double delta, int m) {
  if (u.size() != space.n_dofs()) throw DimensionError("sem_hoaf_apply: vector length differs from dof count");
  if (delta == 0.0) return u;
  const Vector root = space.mass.cwiseSqrt();
  const Vector inv_root = root.cwiseInverse();
  const Matrix s = inv_root.asDiagonal() * space.stiffness * inv_root.asDiagonal();
  const FilterOperator f = build_filter(s, delta, m);
  const Vector v = apply_filter(f, root.cwiseProduct(u));
  return inv_root.cwiseProduct(v);
}

SineFit fit_sines(const Sem1dSpace& space, const Vector& full, const std::vector<double>& angular) {
  const Index n = space.n_global_nodes();
  if (full.size() != n) throw DimensionError("fit_sines: expected a full nodal vector");
  // Quadrature weights on all global nodes (the mass of a Neumann assembly).
  const Sem1dSpace neumann = space.bc == SemBoundary::neumann ? space
                                                              : assemble_sem1d(space.n_elements, space.poly_order,
                                                                               SemBoundary::neumann);
  const Vector w = neumann.mass.cwiseSqrt();
  Matrix basis(n, static_cast<Index>(angular.size()));
  for (std::size_t k = 0; k < angular.size(); ++k)
    basis.col(static_cast<Index>(k)) = (angular[k] * space.all_nodes.array()).sin().matrix();
  const Matrix wb = w.asDiagonal() * basis;
  const Vector wu = w.cwiseProduct(full);
  SineFit fit;
  fit.amplitudes = wb.colPivHouseholderQr().solve(wu);
  const double norm = wu.norm();
  fit.relative_residual = norm > 0.0 ? (wu - wb * fit.amplitudes).norm() / norm : 0.0;
  return fit;
}

FilterStudy run_filter_study(int n_elements, int poly_order, double delta, const std::vector<int>& orders,
                             SemBoundary bc) {
  const Sem1dSpace space = assemble_sem1d(n_elements, poly_order, bc);
  FilterStudy study;
  study.x = space.all_nodes;
  study.orders = orders;
  study.mode_labels = {2.0, 10.0, 20.0};
  const std::vector<double> amps = {0.5, 0.5, 2.0};
  std::vector<double> angular;
  for (double k : study.mode_labels) angular.push_back(k * std::numbers::pi);
  study.u_in = Vector::Zero(space.n_global_nodes());
  for (std::size_t k = 0; k < amps.size(); ++k)
    study.u_in += amps[k] * (angular[k] * study.x.array()).sin().matrix();

  const Vector u_dofs = space.restrict_to_dofs(study.u_in);
  for (int m : orders) {
    const Vector out = space.extend_from_dofs(sem_hoaf_apply(space, u_dofs, delta, m));
    const SineFit fit = fit_sines(space, out, angular);
    Vector ratio(static_cast<Index>(amps.size()));
    for (std::size_t k = 0; k < amps.size(); ++k) ratio(static_cast<Index>(k)) = fit.amplitudes(static_cast<Index>(k)) / amps[k];
    study.outputs.push_back(out);
    study.amplitude_ratios.push_back(ratio);
    study.fit_residuals.push_back(fit.relative_residual);
  }
  return study;
}

}  // namespace regrom
