#include "regrom/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

namespace regrom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> linspace(double a, double b, int points) {
  if (points < 1) throw Error("linspace: need at least one point");
  std::vector<double> out;
  if (points == 1) return {a};
  for (int i = 0; i < points; ++i) out.push_back(a + (b - a) * i / (points - 1));
  out.back() = b;
  return out;
}

void append_unique(std::vector<double>& grid, const std::vector<double>& more) {
  for (double v : more) {
    const bool seen = std::any_of(grid.begin(), grid.end(), [&](double g) { return std::abs(g - v) <= 1e-12 * v; });
    if (!seen) grid.push_back(v);
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s) {
  if (s == "inf") return kInf;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw Error("csv: cannot parse number '" + s + "'");
  return v;
}

std::string fmt(double v) { return std::isinf(v) ? std::string("inf") : format_double(v); }

int grid_index(const std::vector<double>& grid, double v) {
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(grid[i] - v) <= 1e-12 * std::max(1.0, std::abs(v))) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> csv_lines(const std::string& text, const std::string& header) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty() || lines.front() != header) throw Error("csv: expected header '" + header + "'");
  lines.erase(lines.begin());
  return lines;
}

const std::string kSweepHeader = "model,N,m,delta,chi,regime,eps_uu,eps_uv,diverged";
const std::string kSelectionHeader = "model,N,m,delta_opt,chi_opt,eps_uv_opt,eps_uu_at_opt";

struct Job {
  RomSetting setting;
  bool control = false;
};

// Runs fn(i) for i in [0, count) on a bounded pool; fn writes to slot i.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn fn) {
  const std::size_t n_threads = std::min<std::size_t>(std::max(workers, 1), count);
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

SweepRow row_from(const RomSetting& s, const std::string& regime, const StatsReport& r) {
  SweepRow row;
  row.model = to_string(s.model);
  row.n = s.n;
  row.m = s.m;
  row.delta = s.delta;
  row.chi = s.chi;
  row.regime = regime;
  row.eps_uu = r.eps_uu;
  row.eps_uv = r.eps_uv;
  row.diverged = !r.valid;
  return row;
}

SweepRow failed_row(const RomSetting& s, const std::string& regime) {
  StatsReport r;
  r.valid = false;
  r.eps_uu = r.eps_uv = kInf;
  return row_from(s, regime, r);
}

}  // namespace

std::vector<double> delta_grid(const std::array<int, 3>& counts, int extra) {
  std::vector<double> grid;
  append_unique(grid, linspace(0.001, 0.01, counts[0]));
  append_unique(grid, linspace(0.01, 0.1, counts[1]));
  append_unique(grid, linspace(0.1, 1.0, counts[2]));
  if (extra > 0) append_unique(grid, linspace(0.1, 0.2, extra));
  std::sort(grid.begin(), grid.end());
  return grid;
}

std::vector<double> chi_grid(double dt, int points) { return linspace(dt, 1.0, points); }

std::vector<double> reduced_delta_grid() { return delta_grid({4, 5, 5}); }

std::vector<double> full_delta_grid(bool lrom) { return delta_grid({10, 25, 10}, lrom ? 15 : 0); }

void SweepPlan::validate() const {
  benchmark.validate();
  if (n_values.empty() || m_values.empty() || delta_values.empty() || chi_values.empty() || models.empty()) {
    throw Error("SweepPlan: grids must be nonempty");
  }
  for (Index n : n_values)
    if (n < 1 || n > benchmark.n_max) throw Error("SweepPlan: every N must lie in [1, n_max]");
  for (int m : m_values)
    if (m < 1 || m > 4) throw Error("SweepPlan: m must lie in 1..4");
  for (double d : delta_values)
    if (!(d > 0.0)) throw Error("SweepPlan: delta values must be positive");
  for (RomModel model : models)
    if (model == RomModel::grom) throw Error("SweepPlan: G-ROM rows are always included; list only regularized models");
}

SweepPlan plan_from(const KeyValueConfig& kv) {
  static const std::vector<std::string> plan_keys = {"n_max",       "n_values",       "m_values",
                                                     "models",      "axis",           "full_grid",
                                                     "delta_counts", "chi_points",    "train_fraction",
                                                     "predictive_fraction", "predictive", "controls", "rom_dt"};
  std::string fom_text;
  for (const auto& [key, value] : kv.values()) {
    if (std::find(plan_keys.begin(), plan_keys.end(), key) == plan_keys.end()) fom_text += key + "=" + value + "\n";
  }
  SweepPlan plan;
  std::tie(plan.benchmark.fom, plan.benchmark.grid) = fom_config_from(KeyValueConfig::parse(fom_text));
  plan.benchmark.n_max = kv.get_long("n_max", plan.benchmark.n_max);
  const std::string axis = kv.get_string("axis", "time");
  if (axis == "time") plan.benchmark.axis = AverageAxis::time;
  else if (axis == "space_time") plan.benchmark.axis = AverageAxis::space_time;
  else throw Error("unknown axis '" + axis + "'");
  plan.benchmark.train_fraction = kv.get_double("train_fraction", plan.benchmark.train_fraction);
  plan.benchmark.predictive_fraction = kv.get_double("predictive_fraction", plan.benchmark.predictive_fraction);
  plan.benchmark.rom_dt = kv.get_double("rom_dt", plan.benchmark.rom_dt);

  for (long n : kv.get_longs("n_values", {plan.benchmark.n_max})) plan.n_values.push_back(n);
  plan.m_values.clear();
  for (long m : kv.get_longs("m_values", {1})) plan.m_values.push_back(static_cast<int>(m));
  if (kv.has("models")) {
    plan.models.clear();
    std::stringstream ss(kv.get_string("models", ""));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
      if (!item.empty()) plan.models.push_back(rom_model_from_string(item));
    }
  }
  if (kv.get_bool("full_grid", false)) {
    plan.delta_values = full_delta_grid(false);
    plan.lrom_delta_values = full_delta_grid(true);
  } else if (kv.has("delta_counts")) {
    const auto c = kv.get_longs("delta_counts", {});
    if (c.size() != 3) throw Error("delta_counts needs three entries");
    plan.delta_values = delta_grid({static_cast<int>(c[0]), static_cast<int>(c[1]), static_cast<int>(c[2])});
  } else {
    plan.delta_values = reduced_delta_grid();
  }
  plan.chi_values = chi_grid(plan.benchmark.effective_rom_dt(), static_cast<int>(kv.get_long("chi_points", 4)));
  plan.predictive = kv.get_bool("predictive", true);
  plan.controls = kv.get_bool("controls", false);
  plan.validate();
  return plan;
}

int default_workers() {
  if (const char* env = std::getenv("REGROM_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SweepRow> run_sweep(const SweepPlan& plan, const Benchmark& bench, int workers) {
  plan.validate();
  if (workers <= 0) workers = default_workers();
  std::vector<Job> jobs;
  for (Index n : plan.n_values) {
    jobs.push_back({RomSetting{RomModel::grom, n, 0, 0.0, 0.0}, false});
    for (RomModel model : plan.models) {
      for (int m : plan.m_values) {
        const auto& deltas = plan.deltas_for(model);
        if (plan.controls && model != RomModel::lrom) jobs.push_back({RomSetting{model, n, m, deltas.front(), 0.0}, true});
        for (double delta : deltas) {
          if (model == RomModel::lrom) {
            jobs.push_back({RomSetting{model, n, m, delta, 0.0}, false});
            continue;
          }
          for (double chi : plan.chi_values) jobs.push_back({RomSetting{model, n, m, delta, chi}, false});
        }
      }
    }
  }

  const Regime horizon = plan.predictive ? Regime::predictive : Regime::reproduction;
  const long steps = bench.steps(horizon);
  std::vector<std::vector<SweepRow>> results(jobs.size());
  parallel_for(jobs.size(), workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    const std::string first = job.control ? "control" : "reproduction";
    std::vector<SweepRow>& out = results[i];
    try {
      const RunResult run = run_setting(bench, job.setting, steps);
      out.push_back(row_from(job.setting, first, evaluate_window(bench, run, job.setting.n, Regime::reproduction)));
      if (plan.predictive && !job.control) {
        out.push_back(row_from(job.setting, "predictive", evaluate_window(bench, run, job.setting.n, Regime::predictive)));
      }
    } catch (const Error&) {
      out.push_back(failed_row(job.setting, first));
      if (plan.predictive && !job.control) out.push_back(failed_row(job.setting, "predictive"));
    }
  });

  std::vector<SweepRow> rows;
  std::size_t job_index = 0;
  for (Index n : plan.n_values) {
    for (Regime r : {Regime::reproduction, Regime::predictive}) {
      if (r == Regime::predictive && !plan.predictive) continue;
      const StatsReport p = projection_report(bench, n, r);
      SweepRow row = row_from(RomSetting{RomModel::grom, n, 0, 0.0, 0.0}, to_string(r), p);
      row.model = "projection";
      rows.push_back(row);
    }
    // Jobs for this N are contiguous and start with G-ROM.
    while (job_index < jobs.size() && jobs[job_index].setting.n == n) {
      for (const auto& row : results[job_index]) rows.push_back(row);
      ++job_index;
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << r.model << ',' << r.n << ',' << r.m << ',' << fmt(r.delta) << ',' << fmt(r.chi) << ',' << r.regime << ','
        << fmt(r.eps_uu) << ',' << fmt(r.eps_uv) << ',' << (r.diverged ? 1 : 0) << '\n';
  }
  return out.str();
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::vector<SweepRow> rows;
  for (const auto& line : csv_lines(text, kSweepHeader)) {
    const auto f = split(line, ',');
    if (f.size() != 9) throw Error("sweep csv: expected 9 columns in '" + line + "'");
    SweepRow r;
    r.model = f[0];
    r.n = std::stol(f[1]);
    r.m = std::stoi(f[2]);
    r.delta = parse_double(f[3]);
    r.chi = parse_double(f[4]);
    r.regime = f[5];
    r.eps_uu = parse_double(f[6]);
    r.eps_uv = parse_double(f[7]);
    r.diverged = f[8] == "1";
    rows.push_back(r);
  }
  return rows;
}

std::vector<Optimum> select_optima(const std::vector<SweepRow>& rows, const std::string& regime) {
  std::map<std::tuple<std::string, Index, int>, Optimum> best;
  for (const auto& r : rows) {
    if (r.regime != regime || r.model == "grom" || r.model == "projection") continue;
    const double eps = r.diverged ? kInf : r.eps_uv;
    const auto key = std::make_tuple(r.model, r.n, r.m);
    const Optimum cand{r.model, r.n, r.m, r.delta, r.chi, eps, r.diverged ? kInf : r.eps_uu};
    auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(key, cand);
      continue;
    }
    const Optimum& cur = it->second;
    const bool better = std::tie(cand.eps_uv, cand.delta, cand.chi) < std::tie(cur.eps_uv, cur.delta, cur.chi);
    if (better) it->second = cand;
  }
  std::vector<Optimum> out;
  for (const auto& [key, opt] : best) out.push_back(opt);
  return out;
}

std::string selection_csv(const std::vector<Optimum>& selection) {
  std::ostringstream out;
  out << kSelectionHeader << '\n';
  for (const auto& o : selection) {
    out << o.model << ',' << o.n << ',' << o.m << ',' << fmt(o.delta) << ',' << fmt(o.chi) << ',' << fmt(o.eps_uv)
        << ',' << fmt(o.eps_uu) << '\n';
  }
  return out.str();
}

std::vector<Optimum> parse_selection_csv(const std::string& text) {
  std::vector<Optimum> out;
  for (const auto& line : csv_lines(text, kSelectionHeader)) {
    const auto f = split(line, ',');
    if (f.size() != 7) throw Error("selection csv: expected 7 columns in '" + line + "'");
    out.push_back(Optimum{f[0], std::stol(f[1]), std::stoi(f[2]), parse_double(f[3]), parse_double(f[4]),
                          parse_double(f[5]), parse_double(f[6])});
  }
  return out;
}

std::vector<PredictiveRow> predictive_eval(const std::vector<Optimum>& selection, const Benchmark& bench,
                                           int workers) {
  if (workers <= 0) workers = default_workers();
  std::vector<PredictiveRow> out(selection.size());
  parallel_for(selection.size(), workers, [&](std::size_t i) {
    const Optimum& o = selection[i];
    PredictiveRow& row = out[i];
    row.selected = o;
    const RomSetting s{rom_model_from_string(o.model), o.n, o.m, o.delta, o.chi};
    try {
      const RunResult run = run_setting(bench, s, bench.predictive_steps());
      const StatsReport rep = evaluate_window(bench, run, o.n, Regime::reproduction);
      const StatsReport pred = evaluate_window(bench, run, o.n, Regime::predictive);
      row.eps_uv_reproduction = rep.eps_uv;
      row.eps_uu_reproduction = rep.eps_uu;
      row.eps_uv_predictive = pred.eps_uv;
      row.eps_uu_predictive = pred.eps_uu;
      row.diverged = !pred.valid;
    } catch (const Error&) {
      row.eps_uv_reproduction = row.eps_uu_reproduction = row.eps_uv_predictive = row.eps_uu_predictive = kInf;
      row.diverged = true;
    }
  });
  return out;
}

std::string predictive_csv(const std::vector<PredictiveRow>& rows) {
  std::ostringstream out;
  out << "model,N,m,delta,chi,eps_uu_reproduction,eps_uv_reproduction,eps_uu_predictive,eps_uv_predictive,gap_uv,"
         "diverged\n";
  for (const auto& r : rows) {
    const auto& o = r.selected;
    out << o.model << ',' << o.n << ',' << o.m << ',' << fmt(o.delta) << ',' << fmt(o.chi) << ','
        << fmt(r.eps_uu_reproduction) << ',' << fmt(r.eps_uv_reproduction) << ',' << fmt(r.eps_uu_predictive) << ','
        << fmt(r.eps_uv_predictive) << ',' << fmt(r.gap()) << ',' << (r.diverged ? 1 : 0) << '\n';
  }
  return out.str();
}

TransferReport transfer_report(const std::vector<SweepRow>& rows, const SweepPlan& plan, std::optional<int> m_filter) {
  const auto recon = select_optima(rows, "reproduction");
  const auto pred = select_optima(rows, "predictive");
  TransferReport report;
  int hits = 0;
  for (const auto& r : recon) {
    if (m_filter && r.m != *m_filter) continue;
    const auto it = std::find_if(pred.begin(), pred.end(),
                                 [&](const Optimum& p) { return p.model == r.model && p.n == r.n && p.m == r.m; });
    if (it == pred.end()) continue;
    if (!std::isfinite(r.eps_uv) || !std::isfinite(it->eps_uv)) {
      ++report.excluded;
      continue;
    }
    const auto& deltas = plan.deltas_for(rom_model_from_string(r.model));
    TransferCell cell;
    cell.model = r.model;
    cell.n = r.n;
    cell.m = r.m;
    cell.recon = r;
    cell.pred = *it;
    cell.delta_steps = std::abs(grid_index(deltas, r.delta) - grid_index(deltas, it->delta));
    cell.chi_steps = r.model == "lrom" ? 0 : std::abs(grid_index(plan.chi_values, r.chi) - grid_index(plan.chi_values, it->chi));
    if (cell.neighbor()) ++hits;
    report.cells.push_back(cell);
  }
  report.fraction_neighbor = report.cells.empty() ? 0.0 : static_cast<double>(hits) / report.cells.size();
  return report;
}

std::string transfer_csv(const TransferReport& report) {
  std::ostringstream out;
  out << "model,N,m,delta_recon,chi_recon,delta_pred,chi_pred,delta_steps,chi_steps,neighbor\n";
  for (const auto& c : report.cells) {
    out << c.model << ',' << c.n << ',' << c.m << ',' << fmt(c.recon.delta) << ',' << fmt(c.recon.chi) << ','
        << fmt(c.pred.delta) << ',' << fmt(c.pred.chi) << ',' << c.delta_steps << ',' << c.chi_steps << ','
        << (c.neighbor() ? 1 : 0) << '\n';
  }
  return out.str();
}

SensitivityCurve sensitivity_curve(const std::vector<SweepRow>& rows, const std::string& model, Index n, int m,
                                   double chi, const std::string& regime) {
  SensitivityCurve curve;
  for (const auto& r : rows) {
    if (r.model != model || r.n != n || r.m != m || r.regime != regime) continue;
    if (std::abs(r.chi - chi) > 1e-12 * std::max(1.0, chi)) continue;
    curve.delta.push_back(r.delta);
    curve.eps_uv.push_back(r.diverged ? kInf : r.eps_uv);
  }
  if (curve.delta.empty()) return curve;
  const auto it = std::min_element(curve.eps_uv.begin(), curve.eps_uv.end());
  curve.argmin = it - curve.eps_uv.begin();
  curve.first_ratio = curve.eps_uv.front() / *it;
  curve.last_ratio = curve.eps_uv.back() / *it;
  return curve;
}

}  // namespace regrom
