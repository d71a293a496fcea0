#include "regrom/benchmark.hpp"

#include <cmath>

namespace regrom {

void BenchmarkConfig::validate() const {
  fom.validate();
  grid.validate();
  if (n_max < 1) throw Error("BenchmarkConfig: n_max must be positive");
  if (!(train_fraction > 0.0) || !(predictive_fraction > train_fraction) || predictive_fraction > 1.0) {
    throw Error("BenchmarkConfig: need 0 < train_fraction < predictive_fraction <= 1");
  }
  if (rom_dt < 0.0) throw Error("BenchmarkConfig: rom_dt must be nonnegative");
  rom_save_stride();
}

long BenchmarkConfig::rom_save_stride() const {
  const double spacing = fom.dt * static_cast<double>(fom.snapshot_stride);
  const double ratio = spacing / effective_rom_dt();
  const long stride = std::lround(ratio);
  if (stride < 1 || std::abs(ratio - static_cast<double>(stride)) > 1e-9 * ratio) {
    throw Error("BenchmarkConfig: snapshot spacing must be a whole number of ROM steps");
  }
  return stride;
}

std::string to_string(Regime regime) { return regime == Regime::reproduction ? "reproduction" : "predictive"; }

Regime regime_from_string(const std::string& name) {
  if (name == "reproduction") return Regime::reproduction;
  if (name == "predictive") return Regime::predictive;
  throw Error("unknown regime '" + name + "'");
}

Benchmark build_benchmark(const BenchmarkConfig& config) {
  config.validate();
  Benchmark b;
  b.config = config;
  const SnapshotSet all = run_fom(config.fom, config.grid, &b.fom_metadata);
  const auto rows = [&](double fraction) {
    return static_cast<Index>(std::floor(fraction * static_cast<double>(all.size())));
  };
  const Index n_train = rows(config.train_fraction);
  const Index n_pred = rows(config.predictive_fraction);
  if (n_train < 2 || n_pred <= n_train) throw Error("build_benchmark: too few snapshots for the windows");
  b.train = all.slice(0, n_train);
  b.predictive = all.slice(0, n_pred);

  b.basis = build_pod(b.train, config.n_max);
  OperatorPhysics physics;
  physics.equation = config.fom.equation;
  physics.forcing_amplitude = config.fom.forcing_amplitude;
  physics.forcing_mode = config.fom.forcing_mode;
  b.ops = assemble_operators(b.basis, config.grid, physics);
  b.offline = offline_stats(b.basis, config.axis);
  b.reference_train = field_stats(b.train.fields, config.grid, b.train.quad_weights, config.axis);
  b.reference_predictive = field_stats(b.predictive.fields, config.grid, b.predictive.quad_weights, config.axis);
  b.initial = project(b.basis, b.train.fields.row(0).transpose());
  return b;
}

RegRomConfig rom_config(const Benchmark& bench, const RomSetting& s, long n_steps) {
  if (s.n < 1 || s.n > bench.basis.n_modes()) throw DimensionError("rom_config: N outside the benchmark basis");
  RegRomConfig c;
  c.model = s.model;
  c.n = s.n;
  c.dt = bench.dt();
  c.n_steps = n_steps;
  c.save_stride = bench.save_stride();
  c.nu = bench.nu();
  c.chi = s.chi;
  c.start_time = bench.train.times.front();
  c.initial_coefficients = bench.initial.head(s.n);
  if (s.model != RomModel::grom) {
    const RomOperators sub = bench.ops.truncated(s.n);
    c.filter = build_filter(sub, s.delta, s.m);
  }
  return c;
}

RunResult run_setting(const Benchmark& bench, const RomSetting& setting, long steps) {
  return run_rom(rom_config(bench, setting, steps), bench.ops.truncated(setting.n));
}

StatsReport evaluate_window(const Benchmark& bench, const RunResult& run, Index n, Regime regime) {
  const OfflineStats offline = bench.offline.truncated(n);
  const Index rows = bench.window(regime).size();
  const long steps = bench.steps(regime);
  StatsReport report;
  if ((run.diverged && run.diverged_step <= steps) || run.coefficient_history.rows() < rows) {
    report.axis = offline.axis;
    report.valid = false;
  } else {
    RunResult window = run;
    window.coefficient_history = run.coefficient_history.topRows(rows);
    window.times.resize(static_cast<std::size_t>(rows));
    window.diverged = false;
    report = online_stats(offline, window);
  }
  return compared(report, bench.reference(regime));
}

StatsReport projection_report(const Benchmark& bench, Index n, Regime regime) {
  return compared(projection_stats(bench.basis, bench.window(regime), n, bench.config.axis), bench.reference(regime));
}

}  // namespace regrom
