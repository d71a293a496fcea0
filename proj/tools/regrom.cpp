#include "regrom/appendix.hpp"
#include "regrom/benchmark.hpp"
#include "regrom/filters.hpp"
#include "regrom/fom.hpp"
#include "regrom/io.hpp"
#include "regrom/pod.hpp"
#include "regrom/reg_rom.hpp"
#include "regrom/rom_operators.hpp"
#include "regrom/sem.hpp"
#include "regrom/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace regrom;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::vector<int> parse_ints(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

SweepPlan load_plan(const std::string& path) { return plan_from(KeyValueConfig::load(path)); }

int cmd_fom(const std::string& config, const std::string& out) {
  const auto [fom, grid] = fom_config_from(KeyValueConfig::load(config));
  FomMetadata meta;
  const SnapshotSet s = run_fom(fom, grid, &meta);
  write_snapshots(out, s);
  std::cerr << "fom: " << s.size() << " snapshots, max cfl " << meta.max_cfl << '\n';
  if (!meta.stability_note.empty()) std::cerr << "fom: " << meta.stability_note << '\n';
  return 0;
}

int cmd_filter_study(int elements, int order, double delta, const std::string& orders, const std::string& out) {
  const std::vector<int> ms = parse_ints(orders);
  const FilterStudy study = run_filter_study(elements, order, delta, ms);
  std::ostringstream csv;
  csv << "x,u_in";
  for (int m : ms) csv << ",u_m" << m;
  csv << '\n';
  for (Index i = 0; i < study.x.size(); ++i) {
    csv << format_double(study.x[i]) << ',' << format_double(study.u_in[i]);
    for (const auto& o : study.outputs) csv << ',' << format_double(o[i]);
    csv << '\n';
  }
  write_text(out, csv.str());
  for (std::size_t j = 0; j < ms.size(); ++j) {
    std::cerr << "m=" << ms[j] << " ratios";
    for (Index k = 0; k < study.amplitude_ratios[j].size(); ++k)
      std::cerr << " k" << study.mode_labels[static_cast<std::size_t>(k)] << ':' << study.amplitude_ratios[j][k];
    std::cerr << '\n';
  }
  return 0;
}

int cmd_pod(const std::string& snapshots, Index n, const std::string& out) {
  const PodBasis b = build_pod(read_snapshots(snapshots), n);
  write_basis(out, b);
  std::cerr << "pod: " << b.n_modes() << " modes, numerical rank " << numerical_rank(b.eigenvalues) << '\n';
  return 0;
}

int cmd_ops(const std::string& basis_path, const std::string& snapshots, const std::string& config,
            const std::string& out) {
  const PodBasis basis = read_basis(basis_path);
  const GridSpec grid = read_snapshots(snapshots).grid;
  OperatorPhysics physics;
  if (!config.empty()) {
    const auto [fom, g] = fom_config_from(KeyValueConfig::load(config));
    if (!(g == grid)) throw Error("ops: config grid differs from the snapshot grid");
    physics.equation = fom.equation;
    physics.forcing_amplitude = fom.forcing_amplitude;
    physics.forcing_mode = fom.forcing_mode;
  }
  write_operators(out, assemble_operators(basis, grid, physics));
  return 0;
}

struct RunArgs {
  std::string ops, basis, snapshots, model = "grom", out;
  Index n = 0;
  double delta = 0.0, chi = 0.0, dt = 0.005, nu = 1.0;
  int m = 1;
  long steps = 1000, stride = 1;
  bool explicit_tr = false;
};

int cmd_run(const RunArgs& a) {
  const RomOperators all = read_operators(a.ops);
  const Index n = a.n > 0 ? a.n : all.n;
  const RomOperators ops = all.truncated(n);
  const PodBasis basis = read_basis(a.basis);
  const SnapshotSet snaps = read_snapshots(a.snapshots);
  RegRomConfig cfg;
  cfg.model = rom_model_from_string(a.model);
  cfg.n = n;
  cfg.dt = a.dt;
  cfg.n_steps = a.steps;
  cfg.save_stride = a.stride;
  cfg.nu = a.nu;
  cfg.chi = a.chi;
  cfg.start_time = snaps.times.front();
  cfg.initial_coefficients = project(basis.truncated(n), snaps.fields.row(0).transpose());
  if (cfg.model != RomModel::grom) cfg.filter = build_filter(ops, a.delta, a.m);
  if (a.explicit_tr) cfg.tr_treatment = RelaxationTreatment::explicit_extrapolated;
  const RunResult r = run_rom(cfg, ops);
  write_run(a.out, r);
  std::cerr << "run: " << r.steps_taken << " steps in " << r.wall_time << " s";
  if (r.diverged) std::cerr << ", diverged at step " << r.diverged_step;
  std::cerr << '\n';
  return r.diverged ? 3 : 0;
}

int cmd_sweep(const std::string& plan_path, const std::string& out, const std::string& selection,
              const std::string& transfer, int workers) {
  const SweepPlan plan = load_plan(plan_path);
  const Benchmark bench = build_benchmark(plan.benchmark);
  const auto rows = run_sweep(plan, bench, workers);
  write_text(out, sweep_csv(rows));
  if (!selection.empty()) write_text(selection, selection_csv(select_optima(rows)));
  if (!transfer.empty() && plan.predictive) {
    const TransferReport t = transfer_report(rows, plan, 1);
    write_text(transfer, transfer_csv(t));
    std::cerr << "sweep: transfer fraction " << t.fraction_neighbor << '\n';
  }
  std::cerr << "sweep: " << rows.size() << " rows\n";
  return 0;
}

int cmd_predict(const std::string& selection, const std::string& plan_path, const std::string& out, int workers) {
  const SweepPlan plan = load_plan(plan_path);
  const Benchmark bench = build_benchmark(plan.benchmark);
  write_text(out, predictive_csv(predictive_eval(parse_selection_csv(read_text(selection)), bench, workers)));
  return 0;
}

int cmd_transfer_function(const std::string& ops_path, Index n, double delta, const std::string& orders,
                          const std::string& out) {
  const RomOperators all = read_operators(ops_path);
  const RomOperators ops = all.truncated(n > 0 ? n : all.n);
  const std::vector<int> ms = parse_ints(orders);
  std::vector<Vector> curves;
  for (int m : ms) curves.push_back(transfer_diagnostic(build_filter(ops, delta, m)));
  std::ostringstream csv;
  csv << "mode";
  for (int m : ms) csv << ",m" << m;
  csv << '\n';
  for (Index i = 0; i < ops.n; ++i) {
    csv << i + 1;
    for (const auto& c : curves) csv << ',' << format_double(c[i]);
    csv << '\n';
  }
  write_text(out, csv.str());
  return 0;
}

int cmd_verify_appendix(double delta, int samples) {
  bool ok = true;
  for (Index n : {5, 30, 100}) {
    const AppendixCheck c = verify_mixed_form(n, samples, delta, 7 + static_cast<unsigned long long>(n));
    const bool pass = c.max_relative_difference <= 1e-10;
    ok = ok && pass;
    std::cout << "N=" << n << " samples=" << c.samples << " max_rel_diff=" << c.max_relative_difference
              << (pass ? " ok" : " FAIL") << '\n';
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized reduced-order models for Burgers and Kuramoto-Sivashinsky"};
  app.require_subcommand(1);

  std::string config, out, snapshots, basis, ops, plan, selection, transfer, orders = "1,2,3,4";
  int elements = 64, order = 7, workers = 0, samples = 100;
  double delta = 0.025;
  Index n = 0;
  RunArgs run;

  auto* fom = app.add_subcommand("fom", "run the full-order model and write snapshots");
  fom->add_option("--config", config, "key=value FOM config")->required()->check(CLI::ExistingFile);
  fom->add_option("--out", out, "snapshot file")->required();

  auto* study = app.add_subcommand("filter-study", "1D spectral-element HOAF study");
  study->add_option("--elements", elements);
  study->add_option("--order", order);
  study->add_option("--delta", delta);
  study->add_option("--m", orders, "comma-separated filter orders");
  study->add_option("--out", out)->required();

  auto* pod = app.add_subcommand("pod", "build a POD basis");
  pod->add_option("--snapshots", snapshots)->required()->check(CLI::ExistingFile);
  pod->add_option("--n", n)->required();
  pod->add_option("--out", out)->required();

  auto* opsc = app.add_subcommand("ops", "assemble reduced operators");
  opsc->add_option("--basis", basis)->required()->check(CLI::ExistingFile);
  opsc->add_option("--snapshots", snapshots)->required()->check(CLI::ExistingFile);
  opsc->add_option("--config", config, "FOM config for equation and forcing (default: unforced Burgers)")
      ->check(CLI::ExistingFile);
  opsc->add_option("--out", out)->required();

  auto* runc = app.add_subcommand("run", "integrate one reduced model");
  runc->add_option("--ops", run.ops)->required()->check(CLI::ExistingFile);
  runc->add_option("--basis", run.basis, "basis used for the initial projection")->required()->check(CLI::ExistingFile);
  runc->add_option("--snapshots", run.snapshots, "first snapshot is the initial condition")
      ->required()
      ->check(CLI::ExistingFile);
  runc->add_option("--model", run.model)->check(CLI::IsMember({"grom", "lrom", "efr", "tr"}));
  runc->add_option("--n", run.n);
  runc->add_option("--delta", run.delta);
  runc->add_option("--chi", run.chi);
  runc->add_option("--m", run.m);
  runc->add_option("--dt", run.dt);
  runc->add_option("--nu", run.nu);
  runc->add_option("--steps", run.steps);
  runc->add_option("--save-stride", run.stride);
  runc->add_flag("--explicit-relaxation", run.explicit_tr);
  runc->add_option("--out", run.out)->required();

  auto* sweep = app.add_subcommand("sweep", "parameter sweep over N, m, delta, chi");
  sweep->add_option("--plan", plan)->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out)->required();
  sweep->add_option("--selection", selection, "also write the reproduction optima");
  sweep->add_option("--transfer", transfer, "also write the m=1 transfer report");
  sweep->add_option("--workers", workers, "default: REGROM_WORKERS");

  auto* predict = app.add_subcommand("predict", "rerun selected settings over the predictive window");
  predict->add_option("--selection", selection)->required()->check(CLI::ExistingFile);
  predict->add_option("--plan", plan)->required()->check(CLI::ExistingFile);
  predict->add_option("--out", out)->required();
  predict->add_option("--workers", workers);

  auto* tf = app.add_subcommand("transfer-function", "per-mode filter transfer for m orders");
  tf->add_option("--ops", ops)->required()->check(CLI::ExistingFile);
  tf->add_option("--n", n);
  tf->add_option("--delta", delta)->required();
  tf->add_option("--m", orders);
  tf->add_option("--out", out)->required();

  auto* appendix = app.add_subcommand("verify-appendix", "mixed form vs m=2 filter on random inputs");
  appendix->add_option("--delta", delta);
  appendix->add_option("--samples", samples);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*fom) return cmd_fom(config, out);
    if (*study) return cmd_filter_study(elements, order, delta, orders, out);
    if (*pod) return cmd_pod(snapshots, n, out);
    if (*opsc) return cmd_ops(basis, snapshots, config, out);
    if (*runc) return cmd_run(run);
    if (*sweep) return cmd_sweep(plan, out, selection, transfer, workers);
    if (*predict) return cmd_predict(selection, plan, out, workers);
    if (*tf) return cmd_transfer_function(ops, n, delta, orders, out);
    if (*appendix) return cmd_verify_appendix(delta, samples);
  } catch (const std::exception& e) {
    std::cerr << "regrom: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
