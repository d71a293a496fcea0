#pragma once

#include "regrom/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace regrom {

/// Uniform periodic grid on [0, L).
struct GridSpec {
  Index n_points = 64;
  double domain_length = 1.0;

  double spacing() const { return domain_length / static_cast<double>(n_points); }
  Vector coordinates() const;
  /// Throws unless n_points is even, >= 16, and L > 0.
  void validate() const;
  bool operator==(const GridSpec&) const = default;
};

enum class Equation { burgers, kuramoto_sivashinsky };

std::string to_string(Equation eq);
Equation equation_from_string(const std::string& name);

/// Full-order model settings.
///
/// Burgers:  u_t + u u_x = nu u_xx + F sin(2 pi q x / L)
/// KS:       u_t + u u_x + u_xx + nu u_xxxx = F sin(2 pi q x / L)
struct FomConfig {
  Equation equation = Equation::burgers;
  double viscosity = 0.01;
  double dt = 1e-3;
  long n_steps = 1000;
  long snapshot_stride = 10;
  std::uint64_t seed = 1;
  double forcing_amplitude = 0.0;
  int forcing_mode = 1;
  /// Fraction of steps discarded before snapshots are recorded.
  double spinup_fraction = 0.2;
  bool dealias = true;
  /// Amplitude of the seeded uniform noise placed on Fourier modes 1..n/8.
  double noise_amplitude = 0.1;

  void validate() const;
};

/// Snapshots: one row of `fields` per entry of `times`.
struct SnapshotSet {
  GridSpec grid;
  std::vector<double> times;
  Matrix fields;
  Vector quad_weights;

  Index size() const { return fields.rows(); }
  void validate() const;
  /// Rows [first, first + count).
  SnapshotSet slice(Index first, Index count) const;
};

/// Uniform L2 quadrature weights h = L / n.
Vector uniform_weights(const GridSpec& grid);

struct FomMetadata {
  long spinup_steps = 0;
  double max_cfl = 0.0;
  std::string noise_model;
  std::string stability_note;
};

/// Largest observed advective CFL number dt * max|u| * k_max that the
/// solver accepts without warning; BDF3/EXT3 is stable along the imaginary
/// axis up to roughly 0.6 of this product.
inline constexpr double kAdvectiveCflBound = 0.6;

/// Fourier linear symbol L_q such that u_t = -L u + nonlinear.
Vector fom_linear_symbol(const FomConfig& config, const Vector& wavenumbers);

/// Forcing field F sin(2 pi q x / L) on the grid.
Vector fom_forcing(const FomConfig& config, const GridSpec& grid);

/// Pseudo-spectral BDF3/EXT3 solve. Snapshots are taken every
/// snapshot_stride steps after the spin-up window. Throws BlowUpError
/// naming the step if the field becomes non-finite.
SnapshotSet run_fom(const FomConfig& config, const GridSpec& grid, FomMetadata* metadata = nullptr);

/// Same solver started from a given field, returning every stride-th state
/// without spin-up; used by tests and the operator consistency checks.
SnapshotSet run_fom_from(const FomConfig& config, const GridSpec& grid, const Vector& initial,
                         long n_steps, long stride, int max_order = 3);

}  // namespace regrom
