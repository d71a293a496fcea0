#pragma once

#include "regrom/benchmark.hpp"
#include "regrom/io.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace regrom {

/// Uniform sub-grids over [0.001, 0.01], [0.01, 0.1], [0.1, 1] with the
/// given point counts; shared endpoints appear once. `extra` adds a
/// uniform sub-grid over [0.1, 0.2] of that many points (0 for none).
std::vector<double> delta_grid(const std::array<int, 3>& counts, int extra = 0);
/// Uniform points over [dt, 1].
std::vector<double> chi_grid(double dt, int points);

/// Reduced grid: 4/5/5 points, 12 values.
std::vector<double> reduced_delta_grid();
/// Full grids: 43 values, 56 for L-ROM.
std::vector<double> full_delta_grid(bool lrom);

struct SweepPlan {
  BenchmarkConfig benchmark;
  std::vector<Index> n_values;
  std::vector<int> m_values{1};
  std::vector<RomModel> models{RomModel::lrom, RomModel::efr, RomModel::tr};
  std::vector<double> delta_values;
  /// Extra delta values used by L-ROM only (the denser [0.1, 0.2] block).
  std::vector<double> lrom_delta_values;
  std::vector<double> chi_values;
  bool predictive = true;
  /// Adds chi = 0 control rows for EFR and TR (not eligible as optima).
  bool controls = false;

  const std::vector<double>& deltas_for(RomModel model) const {
    return model == RomModel::lrom && !lrom_delta_values.empty() ? lrom_delta_values : delta_values;
  }
  void validate() const;
};

/// Plan keys: the FOM keys of fom_config_from, plus n_max, n_values,
/// m_values, models, axis, full_grid, delta_counts, chi_points,
/// train_fraction, predictive_fraction, predictive, controls.
SweepPlan plan_from(const KeyValueConfig& config);

/// One CSV row.
struct SweepRow {
  std::string model;  ///< grom, lrom, efr, tr, or projection
  Index n = 0;
  int m = 0;
  double delta = 0.0;
  double chi = 0.0;
  std::string regime;  ///< reproduction, predictive, or control
  double eps_uu = 0.0;
  double eps_uv = 0.0;
  bool diverged = false;
  bool operator==(const SweepRow&) const = default;
};

/// Rows in job order: per N, projection and G-ROM first, then each model,
/// m, delta, chi. Each setting is run once over the predictive horizon and
/// evaluated on both windows. Parallel over REGROM_WORKERS threads; the
/// output does not depend on the worker count.
std::vector<SweepRow> run_sweep(const SweepPlan& plan, const Benchmark& bench, int workers = 0);

/// Worker count from REGROM_WORKERS, else the hardware concurrency.
int default_workers();

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

struct Optimum {
  std::string model;
  Index n = 0;
  int m = 0;
  double delta = 0.0;
  double chi = 0.0;
  double eps_uv = 0.0;
  double eps_uu = 0.0;
  bool operator==(const Optimum&) const = default;
};

/// Per (model, N, m) minimum of eps_uv over the regime's rows of the
/// regularized models; ties go to the smaller delta, then the smaller chi.
std::vector<Optimum> select_optima(const std::vector<SweepRow>& rows, const std::string& regime = "reproduction");

std::string selection_csv(const std::vector<Optimum>& selection);
std::vector<Optimum> parse_selection_csv(const std::string& text);

/// Reruns each selected setting over the predictive horizon.
struct PredictiveRow {
  Optimum selected;
  double eps_uv_reproduction = 0.0;
  double eps_uu_reproduction = 0.0;
  double eps_uv_predictive = 0.0;
  double eps_uu_predictive = 0.0;
  bool diverged = false;
  double gap() const { return eps_uv_predictive - eps_uv_reproduction; }
};
std::vector<PredictiveRow> predictive_eval(const std::vector<Optimum>& selection, const Benchmark& bench,
                                           int workers = 0);
std::string predictive_csv(const std::vector<PredictiveRow>& rows);

/// Whether the reproduction optimum also (nearly) minimizes the
/// predictive error, cell by cell.
struct TransferCell {
  std::string model;
  Index n = 0;
  int m = 0;
  Optimum recon;
  Optimum pred;
  int delta_steps = 0;  ///< grid distance in delta
  int chi_steps = 0;    ///< grid distance in chi
  bool neighbor() const { return delta_steps <= 1 && chi_steps <= 1; }
};
struct TransferReport {
  std::vector<TransferCell> cells;
  double fraction_neighbor = 0.0;
  /// Cells left out because every setting diverged in one regime.
  int excluded = 0;
};
TransferReport transfer_report(const std::vector<SweepRow>& rows, const SweepPlan& plan,
                               std::optional<int> m_filter = std::nullopt);
std::string transfer_csv(const TransferReport& report);

/// eps_uv against delta for one (model, N, m, chi) slice of a regime.
struct SensitivityCurve {
  std::vector<double> delta;
  std::vector<double> eps_uv;
  Index argmin = -1;
  double first_ratio = 0.0;  ///< eps at the first delta / minimum
  double last_ratio = 0.0;   ///< eps at the last delta / minimum
  bool interior_minimum() const {
    return argmin > 0 && argmin + 1 < static_cast<Index>(delta.size());
  }
};
SensitivityCurve sensitivity_curve(const std::vector<SweepRow>& rows, const std::string& model, Index n, int m,
                                   double chi, const std::string& regime = "reproduction");

}  // namespace regrom
