#pragma once

#include "regrom/fom.hpp"
#include "regrom/pod.hpp"
#include "regrom/reg_rom.hpp"
#include "regrom/rom_operators.hpp"
#include "regrom/statistics.hpp"

namespace regrom {

/// FOM run plus everything the ROM sweeps share: the POD basis at
/// n_max, operators, offline tables, and reference statistics for the
/// two evaluation windows.
struct BenchmarkConfig {
  FomConfig fom;
  GridSpec grid;
  Index n_max = 20;
  AverageAxis axis = AverageAxis::time;
  /// Training window: this fraction of the post-spin-up snapshots.
  double train_fraction = 0.5;
  /// Predictive window, measured from the same start.
  double predictive_fraction = 0.75;
  /// ROM time step; 0 means the FOM step. The snapshot spacing must be a
  /// whole number of ROM steps.
  double rom_dt = 0.0;
  double effective_rom_dt() const { return rom_dt > 0.0 ? rom_dt : fom.dt; }
  /// ROM steps between saved rows (one row per snapshot).
  long rom_save_stride() const;
  void validate() const;
};

enum class Regime { reproduction, predictive };
std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);

struct Benchmark {
  BenchmarkConfig config;
  FomMetadata fom_metadata;
  SnapshotSet train;
  SnapshotSet predictive;
  PodBasis basis;
  RomOperators ops;
  OfflineStats offline;
  StatsReport reference_train;
  StatsReport reference_predictive;
  /// Projection of the first training snapshot, length n_max.
  Vector initial;

  double nu() const { return config.fom.viscosity; }
  double dt() const { return config.effective_rom_dt(); }
  long save_stride() const { return config.rom_save_stride(); }
  long train_steps() const { return (train.size() - 1) * save_stride(); }
  long predictive_steps() const { return (predictive.size() - 1) * save_stride(); }
  long steps(Regime r) const { return r == Regime::reproduction ? train_steps() : predictive_steps(); }
  const StatsReport& reference(Regime r) const {
    return r == Regime::reproduction ? reference_train : reference_predictive;
  }
  const SnapshotSet& window(Regime r) const { return r == Regime::reproduction ? train : predictive; }
};

Benchmark build_benchmark(const BenchmarkConfig& config);

/// One reduced-model setting. m = 0 and delta = 0 mean no filter.
struct RomSetting {
  RomModel model = RomModel::grom;
  Index n = 0;
  int m = 0;
  double delta = 0.0;
  double chi = 0.0;
};

RegRomConfig rom_config(const Benchmark& bench, const RomSetting& setting, long n_steps);

/// Runs the setting from the projected first snapshot over `steps` steps.
RunResult run_setting(const Benchmark& bench, const RomSetting& setting, long steps);

/// Statistics of the saved rows that fall in the given window, compared
/// with that window's reference. A run diverged inside the window is
/// reported invalid.
StatsReport evaluate_window(const Benchmark& bench, const RunResult& run, Index n, Regime regime);

/// Projection benchmark for the window.
StatsReport projection_report(const Benchmark& bench, Index n, Regime regime);

}  // namespace regrom
