#pragma once

#include "regrom/fom.hpp"
#include "regrom/pod.hpp"
#include "regrom/reg_rom.hpp"
#include "regrom/types.hpp"

#include <utility>

namespace regrom {

/// Which directions the angle-bracket average runs over.
///
/// `space_time` averages over x and t and yields scalars. `time` treats x
/// as the inhomogeneous direction and yields one value per grid point,
/// the way channel statistics are profiles in y.
enum class AverageAxis { space_time, time };

std::string to_string(AverageAxis axis);

/// Offline tables for the second-order statistics, over modes 0..n.
/// Pair tables are stored with row index j * (n + 1) + k and one column
/// per profile point.
struct OfflineStats {
  AverageAxis axis = AverageAxis::time;
  Index n = 0;
  Matrix mode_pair_means;   ///< <phi_j phi_k>
  Matrix mode_means;        ///< <phi_j>, (n+1) x P
  Matrix cross_pair_means;  ///< <phi_j d_x phi_k>
  Matrix grad_means;        ///< <d_x phi_k>, (n+1) x P

  Index profile_length() const { return mode_means.cols(); }
  /// (n+1) x (n+1) slice of <phi_j phi_k> at profile point p.
  Matrix pair_means_at(Index p) const;
  OfflineStats truncated(Index n_sub) const;
};

OfflineStats offline_stats(const PodBasis& basis, AverageAxis axis = AverageAxis::time);

/// Second moment <u'u'> and cross moment <u'(d_x u)'>; eps_* are filled
/// once the report has been compared with a reference.
struct StatsReport {
  AverageAxis axis = AverageAxis::time;
  Vector second_moment;
  Vector cross_moment;
  double eps_uu = std::numeric_limits<double>::quiet_NaN();
  double eps_uv = std::numeric_limits<double>::quiet_NaN();
  bool valid = true;
};

/// Online stage from a coefficient series (rows x n, a_0 = 1 implied).
StatsReport online_stats(const OfflineStats& offline, const Matrix& coefficients);

/// Online stage from a ROM run; the BDF ramp rows are skipped. Diverged
/// runs give an invalid report with infinite errors once compared.
StatsReport online_stats(const OfflineStats& offline, const RunResult& run);

/// Direct evaluation from full fields (one row per time level).
StatsReport field_stats(const Matrix& fields, const GridSpec& grid, const Vector& quad_weights,
                        AverageAxis axis = AverageAxis::time);

/// Statistics of the snapshots projected onto the first n modes.
StatsReport projection_stats(const PodBasis& basis, const SnapshotSet& snapshots, Index n,
                             AverageAxis axis = AverageAxis::time);

/// ||rom - ref||_2 / ||ref||_2; throws when the reference norm is zero.
double relative_error(const Vector& rom, const Vector& ref);

/// (eps_uu, eps_uv). Invalid reports compare as (inf, inf).
std::pair<double, double> relative_errors(const StatsReport& rom, const StatsReport& ref);

/// Copy of `rom` with eps_uu and eps_uv filled in.
StatsReport compared(StatsReport rom, const StatsReport& ref);

}  // namespace regrom
