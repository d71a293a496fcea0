// Acceptance driver: one PASS/FAIL line per primary criterion.

#include "regrom/appendix.hpp"
#include "regrom/benchmark.hpp"
#include "regrom/filters.hpp"
#include "regrom/fom.hpp"
#include "regrom/io.hpp"
#include "regrom/pod.hpp"
#include "regrom/reg_rom.hpp"
#include "regrom/sem.hpp"
#include "regrom/statistics.hpp"
#include "regrom/sweep.hpp"
#include "regrom/time_integration.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace regrom;

namespace {

#ifndef REGROM_BENCHMARK_PLAN
#error "REGROM_BENCHMARK_PLAN must name the benchmark plan file"
#endif

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_s <= 0.0 || t < limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s  %-28s %8.2fs  %s%s\n", pass ? "PASS" : "FAIL", name.c_str(), t, o.detail.c_str(),
              in_time ? "" : " (over time budget)");
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Vector random_vector(Index n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(gen);
  return v;
}

Matrix random_spd(Index n, std::mt19937_64& gen) {
  Matrix g(n, n);
  std::normal_distribution<double> normal;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = normal(gen);
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Vector lambda(n);
  for (Index i = 0; i < n; ++i) lambda[i] = std::pow(10.0, 2.0 * static_cast<double>(i) / static_cast<double>(n - 1));
  const Matrix a = q * lambda.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

struct KsSmall {
  SnapshotSet snapshots;
  PodBasis basis;
  RomOperators ops;
};

KsSmall ks_small(Index n) {
  FomConfig cfg;
  cfg.equation = Equation::kuramoto_sivashinsky;
  cfg.viscosity = 1.0;
  cfg.dt = 0.01;
  cfg.n_steps = 40000;
  cfg.snapshot_stride = 40;
  KsSmall k;
  k.snapshots = run_fom(cfg, GridSpec{64, 22.0});
  k.basis = build_pod(k.snapshots, n);
  k.ops = assemble_operators(k.basis, k.snapshots.grid, OperatorPhysics{Equation::kuramoto_sivashinsky, 0.0, 1});
  return k;
}

RegRomConfig ks_config(const KsSmall& k, RomModel model, Index n, long steps) {
  RegRomConfig c;
  c.model = model;
  c.n = n;
  c.dt = 0.005;
  c.n_steps = steps;
  c.nu = 1.0;
  c.initial_coefficients = project(k.basis, k.snapshots.fields.row(0).transpose());
  return c;
}

Outcome sem_study() {
  const FilterStudy s = run_filter_study(64, 7, 0.025, {1, 2, 3, 4});
  const auto k2 = [&](int i) { return s.amplitude_ratios[static_cast<std::size_t>(i)][0]; };
  const auto k20 = [&](int i) { return s.amplitude_ratios[static_cast<std::size_t>(i)][2]; };
  bool ok = k20(3) <= 0.05 && k2(3) >= 0.99;
  for (int i = 0; i < 3; ++i) ok = ok && k20(i + 1) < k20(i) && k2(i + 1) > k2(i);
  std::ostringstream d;
  d << "k=20 ratios";
  for (int i = 0; i < 4; ++i) d << ' ' << fmt(k20(i));
  d << ", k=2 ratios";
  for (int i = 0; i < 4; ++i) d << ' ' << fmt(k2(i));
  return {ok, d.str()};
}

Outcome analytic_transfer() {
  constexpr double pi = std::numbers::pi;
  Vector d(3);
  d << std::pow(2 * pi * 2, 2), std::pow(2 * pi * 10, 2), std::pow(2 * pi * 20, 2);
  const Vector t = transfer_diagnostic(build_filter(Matrix(d.asDiagonal()), 0.025, 1));
  const double expect = 1.0 / (1.0 + std::pow(0.025 * 40.0 * pi, 2));
  const double err = std::abs(t[2] - expect);
  return {err <= 1e-10, "attenuation " + fmt(t[2]) + ", |error| " + fmt(err)};
}

Outcome appendix_identity() {
  double worst = 0.0;
  for (Index n : {5, 30, 100}) worst = std::max(worst, verify_mixed_form(n, 100, 0.1, 1234 + n).max_relative_difference);
  return {worst <= 1e-10, "max relative difference " + fmt(worst)};
}

Outcome degeneracy() {
  const KsSmall k = ks_small(20);
  const RegRomConfig g = ks_config(k, RomModel::grom, 20, 1000);
  const RunResult ref = run_grom(g, k.ops);
  if (ref.diverged) return {false, "G-ROM diverged"};
  const FilterOperator f = build_filter(k.ops, 0.05, 1);
  RegRomConfig efr = g, tr = g, lrom = g;
  efr.model = RomModel::efr;
  efr.filter = f;
  tr.model = RomModel::tr;
  tr.filter = f;
  lrom.model = RomModel::lrom;
  lrom.filter = build_filter(k.ops, 1e-12, 1);
  double worst = 0.0;
  for (const RegRomConfig* c : {&efr, &tr, &lrom}) {
    const RunResult r = run_rom(*c, k.ops);
    if (r.coefficient_history.rows() != ref.coefficient_history.rows()) return {false, "row count differs"};
    for (Index s = 0; s < r.coefficient_history.rows(); ++s)
      worst = std::max(worst, (r.coefficient_history.row(s) - ref.coefficient_history.row(s)).norm());
  }
  return {worst <= 1e-8, "max trajectory distance " + fmt(worst)};
}

Outcome dissipativity() {
  std::mt19937_64 gen(5);
  const Matrix A = random_spd(50, gen);
  const Matrix sqrtA = Eigen::SelfAdjointEigenSolver<Matrix>(A).operatorSqrt();
  const double delta = 0.2;
  double worst = 0.0, min_form = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 50; ++t) {
    const Vector a = random_vector(50, gen);
    const Vector abar = apply_filter(build_filter(A, delta, 1), a);
    const double lhs = a.dot(a - abar);
    const double rhs = delta * delta * (sqrtA * abar).squaredNorm() + std::pow(delta, 4) * (A * abar).squaredNorm();
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    for (int m = 1; m <= 4; ++m) {
      const Vector b = apply_filter(build_filter(A, delta, m), a);
      min_form = std::min(min_form, a.dot(a - b));
    }
  }
  return {worst <= 1e-9 && min_form >= 0.0, "identity rel error " + fmt(worst) + ", min a.(a-abar) " + fmt(min_form)};
}

Outcome offline_online() {
  const KsSmall k = ks_small(20);
  const RunResult run = run_grom(ks_config(k, RomModel::grom, 20, 1999), k.ops);
  if (run.diverged) return {false, "G-ROM diverged"};
  const Matrix& c = run.coefficient_history;
  Matrix fields(c.rows(), k.snapshots.grid.n_points);
  for (Index r = 0; r < c.rows(); ++r) fields.row(r) = reconstruct(k.basis, c.row(r).transpose()).transpose();
  const StatsReport split = online_stats(offline_stats(k.basis), c);
  const StatsReport direct = field_stats(fields, k.snapshots.grid, k.basis.quad_weights);
  const double e1 = relative_error(split.second_moment, direct.second_moment);
  const double e2 = relative_error(split.cross_moment, direct.cross_moment);
  return {std::max(e1, e2) <= 1e-10 && c.rows() == 2000,
          std::to_string(c.rows()) + " rows, <u'u'> " + fmt(e1) + ", <u'u_x'> " + fmt(e2)};
}

Outcome bdf3_order() {
  // du/dt = -u with exact starting history, implicit and extrapolated forms.
  std::vector<double> dts{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> err_imp, err_ext;
  for (double dt : dts) {
    const long steps = std::lround(1.0 / dt);
    std::vector<Vector> hist{Vector::Constant(1, std::exp(0.0)), Vector::Constant(1, std::exp(dt)),
                             Vector::Constant(1, std::exp(2 * dt))};
    std::vector<Vector> ext = hist;
    for (long s = 0; s < steps; ++s) {
      const std::vector<Vector> zero(3, Vector::Zero(1));
      const Vector next = bdf3ext3_step(hist, Vector::Ones(1), zero, dt);
      hist.insert(hist.begin(), next);
      hist.pop_back();
      std::vector<Vector> nl{-ext[0], -ext[1], -ext[2]};
      const Vector nx = bdf3ext3_step(ext, Vector::Zero(1), nl, dt);
      ext.insert(ext.begin(), nx);
      ext.pop_back();
    }
    err_imp.push_back(std::abs(hist[0][0] - std::exp(-1.0)));
    err_ext.push_back(std::abs(ext[0][0] - std::exp(-1.0)));
  }
  const auto slope = [&](const std::vector<double>& e) {
    return std::log(e[e.size() - 2] / e.back()) / std::log(dts[dts.size() - 2] / dts.back());
  };
  const double si = slope(err_imp), se = slope(err_ext);
  return {std::abs(si - 3.0) <= 0.2 && std::abs(se - 3.0) <= 0.2,
          "slope implicit " + fmt(si) + ", extrapolated " + fmt(se)};
}

struct SweepData {
  SweepPlan plan;
  std::vector<SweepRow> rows;
  double seconds = 0.0;
};

SweepData run_benchmark_sweep(int workers) {
  SweepData d;
  const auto t0 = std::chrono::steady_clock::now();
  d.plan = plan_from(KeyValueConfig::load(REGROM_BENCHMARK_PLAN));
  const Benchmark bench = build_benchmark(d.plan.benchmark);
  d.rows = run_sweep(d.plan, bench, workers);
  d.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return d;
}

double eps_of(const std::vector<SweepRow>& rows, const std::string& model, Index n, const std::string& regime) {
  for (const auto& r : rows)
    if (r.model == model && r.n == n && r.regime == regime) return r.diverged ? std::numeric_limits<double>::infinity() : r.eps_uv;
  return std::numeric_limits<double>::quiet_NaN();
}

// N values where G-ROM is at least 10x worse than the projection.
std::vector<Index> under_resolved(const SweepData& d) {
  std::vector<Index> out;
  for (Index n : d.plan.n_values)
    if (eps_of(d.rows, "grom", n, "reproduction") > 10.0 * eps_of(d.rows, "projection", n, "reproduction"))
      out.push_back(n);
  return out;
}

Outcome regularization_benefit(const SweepData& d) {
  const auto optima = select_optima(d.rows);
  std::ostringstream s;
  bool any = false;
  for (Index n : under_resolved(d)) {
    const double g = eps_of(d.rows, "grom", n, "reproduction");
    const double p = eps_of(d.rows, "projection", n, "reproduction");
    bool all = true;
    s << "[N=" << n << " proj " << fmt(p) << " grom " << fmt(g);
    for (const auto& o : optima) {
      if (o.n != n || o.m != 1) continue;
      s << ' ' << o.model << ' ' << fmt(o.eps_uv);
      all = all && o.eps_uv < g && o.eps_uv < p;
    }
    s << "] ";
    any = any || all;
  }
  if (under_resolved(d).empty()) s << "no N with G-ROM > 10x projection";
  return {any, s.str()};
}

Outcome parameter_transfer(const SweepData& d) {
  const TransferReport t = transfer_report(d.rows, d.plan, 1);
  return {t.fraction_neighbor >= 0.7 && !t.cells.empty(),
          "neighbour fraction " + fmt(t.fraction_neighbor) + " over " + std::to_string(t.cells.size()) + " cells (" +
              std::to_string(t.excluded) + " excluded)"};
}

Outcome delta_sensitivity(const SweepData& d) {
  const double chi = d.plan.chi_values.at(1);
  std::ostringstream s;
  s << "chi " << fmt(chi) << ':';
  bool any = false;
  for (Index n : under_resolved(d)) {
    const SensitivityCurve c = sensitivity_curve(d.rows, "tr", n, 1, chi);
    const bool ok = c.interior_minimum() && c.first_ratio >= 5.0 && c.last_ratio >= 5.0;
    any = any || ok;
    s << " [N=" << n << " argmin " << c.argmin << "/" << c.delta.size() << " first/min " << fmt(c.first_ratio)
      << " last/min " << fmt(c.last_ratio) << "]";
  }
  return {any, s.str()};
}

}  // namespace

int main() {
  report("sem-filter-study", 5.0, sem_study);
  report("analytic-transfer", 1.0, analytic_transfer);
  report("appendix-mixed-form", 5.0, appendix_identity);
  report("degeneracy-lattice", 60.0, degeneracy);
  report("tr-dissipativity", 5.0, dissipativity);
  report("offline-online-stats", 60.0, offline_online);
  report("bdf3-order", 10.0, bdf3_order);

  SweepData first;
  report("benchmark-sweep", 3600.0, [&] {
    first = run_benchmark_sweep(0);
    return Outcome{!first.rows.empty(), std::to_string(first.rows.size()) + " rows"};
  });
  report("regularization-benefit", 1800.0, [&] {
    if (first.seconds >= 1800.0) return Outcome{false, "sweep took " + fmt(first.seconds) + " s"};
    return regularization_benefit(first);
  });
  report("parameter-transfer", 0.0, [&] { return parameter_transfer(first); });
  report("delta-sensitivity", 0.0, [&] { return delta_sensitivity(first); });
  report("determinism", 0.0, [&] {
    // second run with a different worker count
    const SweepData second = run_benchmark_sweep(default_workers() + 1);
    const std::string a = sweep_csv(first.rows), b = sweep_csv(second.rows);
    return Outcome{a == b && !a.empty(), a == b ? "sweep CSVs byte-identical (" + std::to_string(a.size()) + " bytes)"
                                                : "sweep CSVs differ"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
