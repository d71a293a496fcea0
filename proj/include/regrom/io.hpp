#pragma once

#include "regrom/fom.hpp"
#include "regrom/pod.hpp"
#include "regrom/reg_rom.hpp"
#include "regrom/rom_operators.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace regrom {

// Binary containers are little-endian: an 8-byte magic, u64 sizes, then
// f64 payloads. Matrices are written row-major.

void write_snapshots(const std::filesystem::path& path, const SnapshotSet& snapshots);
SnapshotSet read_snapshots(const std::filesystem::path& path);

void write_basis(const std::filesystem::path& path, const PodBasis& basis);
PodBasis read_basis(const std::filesystem::path& path);

void write_operators(const std::filesystem::path& path, const RomOperators& ops);
RomOperators read_operators(const std::filesystem::path& path);

void write_run(const std::filesystem::path& path, const RunResult& run);
RunResult read_run(const std::filesystem::path& path);

/// Flat key=value text. Blank lines and '#' comments are skipped; keys
/// may not repeat.
class KeyValueConfig {
public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
  std::vector<long> get_longs(const std::string& key, std::vector<long> fallback) const;
  /// Throws naming the first key not in `known`.
  void require_known(const std::vector<std::string>& known) const;
  const std::map<std::string, std::string>& values() const { return values_; }

private:
  std::map<std::string, std::string> values_;
};

/// FomConfig and GridSpec from keys equation, viscosity, dt, n_steps,
/// snapshot_stride, seed, forcing_amplitude, forcing_mode, spinup_fraction,
/// dealias, noise_amplitude, n_points, domain_length.
std::pair<FomConfig, GridSpec> fom_config_from(const KeyValueConfig& config);
std::string format_fom_config(const FomConfig& config, const GridSpec& grid);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

}  // namespace regrom
