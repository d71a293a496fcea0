#pragma once

#include "regrom/filters.hpp"
#include "regrom/rom_operators.hpp"
#include "regrom/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace regrom {

enum class RomModel { grom, lrom, efr, tr };

std::string to_string(RomModel model);
RomModel rom_model_from_string(const std::string& name);

/// How the time-relaxation term chi (a - abar) enters the step.
enum class RelaxationTreatment {
  implicit,  ///< folded into the Helmholtz matrix as chi (I - F)
  explicit_extrapolated,
};

/// Evolve step used by EFR. `forward_euler` is the literal single-step
/// form with explicit diffusion, kept for comparison.
enum class EvolveScheme { bdf_ext, forward_euler };

struct RegRomConfig {
  RomModel model = RomModel::grom;
  Index n = 0;
  double dt = 0.005;
  long n_steps = 0;
  long save_stride = 1;
  double nu = 1.0;
  std::optional<FilterOperator> filter;
  double chi = 0.0;
  double start_time = 0.0;
  /// a^0 over modes 1..N.
  Vector initial_coefficients;
  /// Optional older levels a^{-1}, a^{-2}; when present the BDF ramp is
  /// shortened accordingly.
  std::vector<Vector> initial_history;
  RelaxationTreatment tr_treatment = RelaxationTreatment::implicit;
  EvolveScheme efr_evolve = EvolveScheme::bdf_ext;
  /// Divergence is flagged once |a| exceeds this multiple of |a^0|.
  double divergence_factor = 1e8;

  void validate() const;
};

struct RunResult {
  Matrix coefficient_history;  ///< saved rows x N
  std::vector<double> times;
  bool diverged = false;
  long diverged_step = -1;
  double wall_time = 0.0;
  long steps_taken = 0;
  /// Steps integrated at order < 3 (BDF1/BDF2 ramp).
  long startup_steps = 0;
  /// Saved rows that fall inside the ramp.
  Index startup_rows = 0;
  /// Triangular-solve pairs applied during time stepping.
  long filter_solves = 0;
  std::string startup;
};

/// Dispatches on config.model.
RunResult run_rom(const RegRomConfig& config, const RomOperators& ops);

RunResult run_grom(const RegRomConfig& config, const RomOperators& ops);
RunResult run_lrom(const RegRomConfig& config, const RomOperators& ops);
RunResult run_efr(const RegRomConfig& config, const RomOperators& ops);
RunResult run_tr(const RegRomConfig& config, const RomOperators& ops);

}  // namespace regrom
