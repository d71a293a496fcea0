#include "regrom/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little, "binary containers assume a little-endian host");

namespace regrom {

namespace {

constexpr char kSnapMagic[8] = {'R', 'E', 'G', 'R', 'O', 'M', '1', '\0'};
constexpr char kBasisMagic[8] = {'P', 'O', 'D', 'B', 'A', 'S', '1', '\0'};
constexpr char kOpsMagic[8] = {'R', 'O', 'M', 'O', 'P', 'S', '1', '\0'};
constexpr char kRunMagic[8] = {'R', 'O', 'M', 'R', 'U', 'N', '1', '\0'};

class Writer {
public:
  Writer(const std::filesystem::path& path, const char* magic) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw Error("cannot open " + path.string() + " for writing");
    out_.write(magic, 8);
  }
  void u64(std::uint64_t v) { raw(&v, sizeof v); }
  void i64(std::int64_t v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }
  void doubles(const double* p, std::size_t count) { raw(p, count * sizeof(double)); }
  void vector(const Vector& v) { doubles(v.data(), static_cast<std::size_t>(v.size())); }
  void matrix(const Matrix& m) {
    const RowMajorMatrix rm = m;
    doubles(rm.data(), static_cast<std::size_t>(rm.size()));
  }
  void finish() {
    out_.flush();
    if (!out_) throw Error("write failed: " + path_.string());
  }

private:
  void raw(const void* p, std::size_t bytes) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(bytes)); }
  std::filesystem::path path_;
  std::ofstream out_;
};

class Reader {
public:
  Reader(const std::filesystem::path& path, const char* magic) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw Error("cannot open " + path.string());
    char got[8];
    raw(got, 8);
    if (std::memcmp(got, magic, 8) != 0) throw Error(path.string() + ": wrong container magic");
  }
  std::uint64_t u64() {
    std::uint64_t v;
    raw(&v, sizeof v);
    return v;
  }
  std::int64_t i64() {
    std::int64_t v;
    raw(&v, sizeof v);
    return v;
  }
  double f64() {
    double v;
    raw(&v, sizeof v);
    return v;
  }
  Index size() {
    const std::uint64_t v = u64();
    if (v > (std::uint64_t{1} << 40)) throw Error(path_.string() + ": implausible size field");
    return static_cast<Index>(v);
  }
  Vector vector(Index n) {
    Vector v(n);
    raw(v.data(), static_cast<std::size_t>(n) * sizeof(double));
    return v;
  }
  Matrix matrix(Index rows, Index cols) {
    RowMajorMatrix m(rows, cols);
    raw(m.data(), static_cast<std::size_t>(m.size()) * sizeof(double));
    return m;
  }
  void expect_end() {
    if (in_.peek() != std::char_traits<char>::eof()) throw Error(path_.string() + ": trailing bytes");
  }

private:
  void raw(void* p, std::size_t bytes) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(bytes));
    if (!in_) throw Error(path_.string() + ": truncated container");
  }
  std::filesystem::path path_;
  std::ifstream in_;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw Error("config key '" + key + "': cannot parse '" + text + "'");
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

void write_snapshots(const std::filesystem::path& path, const SnapshotSet& s) {
  s.validate();
  Writer w(path, kSnapMagic);
  w.u64(static_cast<std::uint64_t>(s.size()));
  w.u64(static_cast<std::uint64_t>(s.grid.n_points));
  w.f64(s.grid.domain_length);
  w.doubles(s.times.data(), s.times.size());
  w.matrix(s.fields);
  w.vector(s.quad_weights);
  w.finish();
}

SnapshotSet read_snapshots(const std::filesystem::path& path) {
  Reader r(path, kSnapMagic);
  SnapshotSet s;
  const Index k = r.size();
  s.grid.n_points = r.size();
  s.grid.domain_length = r.f64();
  const Vector t = r.vector(k);
  s.times.assign(t.data(), t.data() + t.size());
  s.fields = r.matrix(k, s.grid.n_points);
  s.quad_weights = r.vector(s.grid.n_points);
  r.expect_end();
  s.validate();
  return s;
}

void write_basis(const std::filesystem::path& path, const PodBasis& b) {
  Writer w(path, kBasisMagic);
  w.u64(static_cast<std::uint64_t>(b.grid.n_points));
  w.f64(b.grid.domain_length);
  w.u64(static_cast<std::uint64_t>(b.n_modes()));
  w.u64(static_cast<std::uint64_t>(b.eigenvalues.size()));
  w.u64(static_cast<std::uint64_t>(b.n_snapshots));
  w.vector(b.zeroth_mode);
  w.matrix(b.modes.transpose());  // one mode per row
  w.vector(b.eigenvalues);
  w.vector(b.quad_weights);
  w.finish();
}

PodBasis read_basis(const std::filesystem::path& path) {
  Reader r(path, kBasisMagic);
  PodBasis b;
  b.grid.n_points = r.size();
  b.grid.domain_length = r.f64();
  const Index n = r.size();
  const Index n_eig = r.size();
  b.n_snapshots = r.size();
  b.zeroth_mode = r.vector(b.grid.n_points);
  b.modes = r.matrix(n, b.grid.n_points).transpose();
  b.eigenvalues = r.vector(n_eig);
  b.quad_weights = r.vector(b.grid.n_points);
  r.expect_end();
  return b;
}

void write_operators(const std::filesystem::path& path, const RomOperators& ops) {
  Writer w(path, kOpsMagic);
  const Index s = ops.n + 1;
  w.u64(static_cast<std::uint64_t>(ops.n));
  w.u64(ops.equation == Equation::burgers ? 0 : 1);
  w.matrix(ops.A);
  w.matrix(ops.B);
  w.doubles(ops.C.data().data(), static_cast<std::size_t>(s * s * s));
  w.matrix(ops.D);
  w.vector(ops.forcing);
  w.finish();
}

RomOperators read_operators(const std::filesystem::path& path) {
  Reader r(path, kOpsMagic);
  RomOperators ops;
  ops.n = r.size();
  const std::uint64_t eq = r.u64();
  if (eq > 1) throw Error(path.string() + ": unknown equation tag");
  ops.equation = eq == 0 ? Equation::burgers : Equation::kuramoto_sivashinsky;
  const Index s = ops.n + 1;
  ops.A = r.matrix(s, s);
  ops.B = r.matrix(s, s);
  ops.C = AdvectionTensor(s);
  const Vector c = r.vector(s * s * s);
  std::copy(c.data(), c.data() + c.size(), ops.C.data().begin());
  ops.D = r.matrix(s, s);
  ops.forcing = r.vector(s);
  r.expect_end();
  return ops;
}

void write_run(const std::filesystem::path& path, const RunResult& run) {
  Writer w(path, kRunMagic);
  w.u64(static_cast<std::uint64_t>(run.coefficient_history.rows()));
  w.u64(static_cast<std::uint64_t>(run.coefficient_history.cols()));
  w.u64(run.diverged ? 1 : 0);
  w.i64(run.diverged_step);
  w.i64(run.steps_taken);
  w.i64(run.startup_steps);
  w.i64(run.startup_rows);
  w.i64(run.filter_solves);
  w.f64(run.wall_time);
  w.doubles(run.times.data(), run.times.size());
  w.matrix(run.coefficient_history);
  w.finish();
}

RunResult read_run(const std::filesystem::path& path) {
  Reader r(path, kRunMagic);
  RunResult run;
  const Index rows = r.size();
  const Index cols = r.size();
  run.diverged = r.u64() != 0;
  run.diverged_step = r.i64();
  run.steps_taken = r.i64();
  run.startup_steps = r.i64();
  run.startup_rows = r.i64();
  run.filter_solves = r.i64();
  run.wall_time = r.f64();
  const Vector t = r.vector(rows);
  run.times.assign(t.data(), t.data() + t.size());
  run.coefficient_history = r.matrix(rows, cols);
  r.expect_end();
  return run;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error("config line " + std::to_string(line_no) + ": empty key");
    if (!cfg.values_.emplace(key, value).second) throw Error("config key '" + key + "' given twice");
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<double>(key, it->second);
}

long KeyValueConfig::get_long(const std::string& key, long fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<long>(key, it->second);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw Error("config key '" + key + "': expected true or false");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key, std::vector<double> fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(it->second)) out.push_back(parse_number<double>(key, item));
  return out;
}

std::vector<long> KeyValueConfig::get_longs(const std::string& key, std::vector<long> fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<long> out;
  for (const auto& item : split_list(it->second)) out.push_back(parse_number<long>(key, item));
  return out;
}

void KeyValueConfig::require_known(const std::vector<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw Error("unknown config key '" + key + "'");
  }
}

std::pair<FomConfig, GridSpec> fom_config_from(const KeyValueConfig& kv) {
  kv.require_known({"equation", "viscosity", "dt", "n_steps", "snapshot_stride", "seed", "forcing_amplitude",
                    "forcing_mode", "spinup_fraction", "dealias", "noise_amplitude", "n_points", "domain_length"});
  FomConfig c;
  c.equation = equation_from_string(kv.get_string("equation", to_string(c.equation)));
  c.viscosity = kv.get_double("viscosity", c.viscosity);
  c.dt = kv.get_double("dt", c.dt);
  c.n_steps = kv.get_long("n_steps", c.n_steps);
  c.snapshot_stride = kv.get_long("snapshot_stride", c.snapshot_stride);
  c.seed = static_cast<std::uint64_t>(kv.get_long("seed", static_cast<long>(c.seed)));
  c.forcing_amplitude = kv.get_double("forcing_amplitude", c.forcing_amplitude);
  c.forcing_mode = static_cast<int>(kv.get_long("forcing_mode", c.forcing_mode));
  c.spinup_fraction = kv.get_double("spinup_fraction", c.spinup_fraction);
  c.dealias = kv.get_bool("dealias", c.dealias);
  c.noise_amplitude = kv.get_double("noise_amplitude", c.noise_amplitude);
  GridSpec g;
  g.n_points = kv.get_long("n_points", g.n_points);
  g.domain_length = kv.get_double("domain_length", g.domain_length);
  c.validate();
  g.validate();
  return {c, g};
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("format_double failed");
  return std::string(buf, ptr);
}

std::string format_fom_config(const FomConfig& c, const GridSpec& g) {
  std::ostringstream out;
  out << "equation = " << to_string(c.equation) << '\n'
      << "viscosity = " << format_double(c.viscosity) << '\n'
      << "dt = " << format_double(c.dt) << '\n'
      << "n_steps = " << c.n_steps << '\n'
      << "snapshot_stride = " << c.snapshot_stride << '\n'
      << "seed = " << c.seed << '\n'
      << "forcing_amplitude = " << format_double(c.forcing_amplitude) << '\n'
      << "forcing_mode = " << c.forcing_mode << '\n'
      << "spinup_fraction = " << format_double(c.spinup_fraction) << '\n'
      << "dealias = " << (c.dealias ? "true" : "false") << '\n'
      << "noise_amplitude = " << format_double(c.noise_amplitude) << '\n'
      << "n_points = " << g.n_points << '\n'
      << "domain_length = " << format_double(g.domain_length) << '\n';
  return out.str();
}

}  // namespace regrom
