#include "regrom/statistics.hpp"

#include "regrom/spectral.hpp"

#include <cmath>
#include <limits>

namespace regrom {

std::string to_string(AverageAxis axis) { return axis == AverageAxis::time ? "time" : "space_time"; }

namespace {

// Average over the homogeneous direction: a weighted mean for
// space_time, the identity (pointwise) for time.
Matrix spatial_average(const Matrix& columns, const Vector& w, double length, AverageAxis axis) {
  // columns: n_points x m, returns P x m
  if (axis == AverageAxis::time) return columns;
  return (w.transpose() * columns) / length;
}

Matrix mode_matrix(const PodBasis& basis) {
  Matrix P(basis.zeroth_mode.size(), basis.n_modes() + 1);
  P.col(0) = basis.zeroth_mode;
  P.rightCols(basis.n_modes()) = basis.modes;
  return P;
}

}  // namespace

Matrix OfflineStats::pair_means_at(Index p) const {
  const Index s = n + 1;
  Matrix out(s, s);
  for (Index j = 0; j < s; ++j)
    for (Index k = 0; k < s; ++k) out(j, k) = mode_pair_means(j * s + k, p);
  return out;
}

OfflineStats OfflineStats::truncated(Index n_sub) const {
  if (n_sub < 0 || n_sub > n) throw DimensionError("OfflineStats::truncated: n out of range");
  const Index s = n + 1, t = n_sub + 1;
  OfflineStats out;
  out.axis = axis;
  out.n = n_sub;
  out.mode_means = mode_means.topRows(t);
  out.grad_means = grad_means.topRows(t);
  out.mode_pair_means.resize(t * t, profile_length());
  out.cross_pair_means.resize(t * t, profile_length());
  for (Index j = 0; j < t; ++j) {
    for (Index k = 0; k < t; ++k) {
      out.mode_pair_means.row(j * t + k) = mode_pair_means.row(j * s + k);
      out.cross_pair_means.row(j * t + k) = cross_pair_means.row(j * s + k);
    }
  }
  return out;
}

OfflineStats offline_stats(const PodBasis& basis, AverageAxis axis) {
  const GridSpec& grid = basis.grid;
  const Matrix P = mode_matrix(basis);
  const Index s = P.cols();
  PeriodicSpectral fft(grid.n_points, grid.domain_length);
  Matrix dP(P.rows(), s);
  for (Index j = 0; j < s; ++j) {
    const Vector col = P.col(j);
    dP.col(j) = fft.derivative(col, 1);
  }
  const Vector& w = basis.quad_weights;
  const double L = grid.domain_length;

  OfflineStats out;
  out.axis = axis;
  out.n = basis.n_modes();
  out.mode_means = spatial_average(P, w, L, axis).transpose();
  out.grad_means = spatial_average(dP, w, L, axis).transpose();
  const Index profile = out.mode_means.cols();
  out.mode_pair_means.resize(s * s, profile);
  out.cross_pair_means.resize(s * s, profile);
  for (Index j = 0; j < s; ++j) {
    Matrix prod(P.rows(), s), cross(P.rows(), s);
    for (Index k = 0; k < s; ++k) {
      prod.col(k) = P.col(j).cwiseProduct(P.col(k));
      cross.col(k) = P.col(j).cwiseProduct(dP.col(k));
    }
    out.mode_pair_means.middleRows(j * s, s) = spatial_average(prod, w, L, axis).transpose();
    out.cross_pair_means.middleRows(j * s, s) = spatial_average(cross, w, L, axis).transpose();
  }
  return out;
}

StatsReport online_stats(const OfflineStats& offline, const Matrix& coefficients) {
  if (coefficients.cols() != offline.n) throw DimensionError("online_stats: coefficient width differs from offline n");
  if (coefficients.rows() < 2) throw Error("online_stats: need at least 2 time levels");
  const Index s = offline.n + 1;
  const double T = static_cast<double>(coefficients.rows());
  Matrix full(coefficients.rows(), s);
  full.col(0).setOnes();
  full.rightCols(offline.n) = coefficients;

  const Matrix second = (full.transpose() * full) / T;  // <a_j a_k>_t
  const Vector mean = full.colwise().mean().transpose();  // <a_j>_t
  // Row-major flattening of <a_j a_k>_t to match the table layout.
  RowMajorMatrix second_rm = second;
  Eigen::Map<const Vector> flat(second_rm.data(), s * s);

  StatsReport r;
  r.axis = offline.axis;
  const Vector mean_field = offline.mode_means.transpose() * mean;
  const Vector mean_grad = offline.grad_means.transpose() * mean;
  r.second_moment = offline.mode_pair_means.transpose() * flat - mean_field.cwiseProduct(mean_field);
  r.cross_moment = offline.cross_pair_means.transpose() * flat - mean_field.cwiseProduct(mean_grad);
  return r;
}

StatsReport online_stats(const OfflineStats& offline, const RunResult& run) {
  const Index skip = run.startup_rows;
  const Index rows = run.coefficient_history.rows() - skip;
  if (run.diverged || rows < 2) {
    StatsReport r;
    r.axis = offline.axis;
    r.valid = false;
    r.second_moment = Vector::Constant(offline.profile_length(), std::numeric_limits<double>::quiet_NaN());
    r.cross_moment = r.second_moment;
    return r;
  }
  return online_stats(offline, run.coefficient_history.bottomRows(rows));
}

StatsReport field_stats(const Matrix& fields, const GridSpec& grid, const Vector& quad_weights, AverageAxis axis) {
  if (fields.cols() != grid.n_points) throw DimensionError("field_stats: field width differs from grid");
  if (fields.rows() < 2) throw Error("field_stats: need at least 2 time levels");
  PeriodicSpectral fft(grid.n_points, grid.domain_length);
  Matrix grad(fields.rows(), fields.cols());
  for (Index t = 0; t < fields.rows(); ++t) {
    const Vector row = fields.row(t).transpose();
    grad.row(t) = fft.derivative(row, 1).transpose();
  }
  const double T = static_cast<double>(fields.rows());
  // Time averages per grid point.
  const Vector u_mean = fields.colwise().mean().transpose();
  const Vector ux_mean = grad.colwise().mean().transpose();
  const Vector uu_mean = fields.array().square().colwise().sum().transpose() / T;
  const Vector uux_mean = (fields.array() * grad.array()).colwise().sum().transpose() / T;

  StatsReport r;
  r.axis = axis;
  if (axis == AverageAxis::time) {
    r.second_moment = uu_mean - u_mean.cwiseProduct(u_mean);
    r.cross_moment = uux_mean - u_mean.cwiseProduct(ux_mean);
  } else {
    const double L = grid.domain_length;
    const double u = quad_weights.dot(u_mean) / L;
    const double ux = quad_weights.dot(ux_mean) / L;
    r.second_moment = Vector::Constant(1, quad_weights.dot(uu_mean) / L - u * u);
    r.cross_moment = Vector::Constant(1, quad_weights.dot(uux_mean) / L - u * ux);
  }
  return r;
}

StatsReport projection_stats(const PodBasis& basis, const SnapshotSet& snapshots, Index n, AverageAxis axis) {
  if (n < 0 || n > basis.n_modes()) throw DimensionError("projection_stats: n exceeds the basis rank");
  const OfflineStats offline = offline_stats(basis.truncated(n), axis);
  return online_stats(offline, project_snapshots(basis, snapshots, n));
}

double relative_error(const Vector& rom, const Vector& ref) {
  if (rom.size() != ref.size()) throw DimensionError("relative_error: size mismatch");
  const double denom = ref.norm();
  if (!(denom > 0.0)) throw Error("relative_error: reference moments have zero norm");
  return (rom - ref).norm() / denom;
}

std::pair<double, double> relative_errors(const StatsReport& rom, const StatsReport& ref) {
  if (!rom.valid || !rom.second_moment.allFinite() || !rom.cross_moment.allFinite()) {
    // Still validates the reference.
    if (!(ref.second_moment.norm() > 0.0) || !(ref.cross_moment.norm() > 0.0)) {
      throw Error("relative_errors: reference moments have zero norm");
    }
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, inf};
  }
  return {relative_error(rom.second_moment, ref.second_moment), relative_error(rom.cross_moment, ref.cross_moment)};
}

StatsReport compared(StatsReport rom, const StatsReport& ref) {
  const auto [uu, uv] = relative_errors(rom, ref);
  rom.eps_uu = uu;
  rom.eps_uv = uv;
  return rom;
}

}  // namespace regrom
