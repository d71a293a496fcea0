#include "regrom/fom.hpp"

#include "regrom/spectral.hpp"
#include "regrom/time_integration.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <sstream>

namespace regrom {

Vector GridSpec::coordinates() const {
  Vector x(n_points);
  for (Index i = 0; i < n_points; ++i) x[i] = spacing() * static_cast<double>(i);
  return x;
}

void GridSpec::validate() const {
  if (n_points < 16 || n_points % 2 != 0) throw Error("GridSpec: n_points must be even and >= 16");
  if (!(domain_length > 0.0)) throw Error("GridSpec: domain_length must be positive");
}

std::string to_string(Equation eq) {
  return eq == Equation::burgers ? "burgers" : "kuramoto_sivashinsky";
}

Equation equation_from_string(const std::string& name) {
  if (name == "burgers") return Equation::burgers;
  if (name == "kuramoto_sivashinsky" || name == "ks") return Equation::kuramoto_sivashinsky;
  throw Error("unknown equation '" + name + "'");
}

void FomConfig::validate() const {
  if (!(viscosity > 0.0)) throw Error("FomConfig: viscosity must be positive");
  if (!(dt > 0.0)) throw Error("FomConfig: dt must be positive");
  if (n_steps <= 0 || snapshot_stride <= 0) throw Error("FomConfig: n_steps and snapshot_stride must be positive");
  if (n_steps % snapshot_stride != 0) throw Error("FomConfig: snapshot_stride must divide n_steps");
  if (forcing_amplitude < 0.0) throw Error("FomConfig: forcing_amplitude must be nonnegative");
  if (spinup_fraction < 0.0 || spinup_fraction >= 1.0) throw Error("FomConfig: spinup_fraction must lie in [0, 1)");
}

void SnapshotSet::validate() const {
  grid.validate();
  if (fields.rows() != static_cast<Index>(times.size())) throw Error("SnapshotSet: rows and times disagree");
  if (fields.cols() != grid.n_points) throw Error("SnapshotSet: field width differs from grid");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw Error("SnapshotSet: times must be strictly increasing");
  }
  if (quad_weights.size() != grid.n_points || (quad_weights.array() <= 0.0).any()) {
    throw Error("SnapshotSet: quadrature weights must be positive, one per grid point");
  }
  if (std::abs(quad_weights.sum() - grid.domain_length) > 1e-10 * grid.domain_length) {
    throw Error("SnapshotSet: quadrature weights must sum to the domain length");
  }
}

SnapshotSet SnapshotSet::slice(Index first, Index count) const {
  if (first < 0 || count < 0 || first + count > size()) throw DimensionError("SnapshotSet::slice: out of range");
  SnapshotSet out;
  out.grid = grid;
  out.times.assign(times.begin() + first, times.begin() + first + count);
  out.fields = fields.middleRows(first, count);
  out.quad_weights = quad_weights;
  return out;
}

Vector uniform_weights(const GridSpec& grid) {
  return Vector::Constant(grid.n_points, grid.spacing());
}

Vector fom_linear_symbol(const FomConfig& config, const Vector& k) {
  const Vector k2 = k.array().square();
  if (config.equation == Equation::burgers) return config.viscosity * k2;
  return config.viscosity * k2.array().square() - k2.array();
}

Vector fom_forcing(const FomConfig& config, const GridSpec& grid) {
  const Vector x = grid.coordinates();
  const double kf = 2.0 * std::numbers::pi * config.forcing_mode / grid.domain_length;
  return config.forcing_amplitude * (kf * x.array()).sin();
}

namespace {

double unit_uniform(std::mt19937_64& gen) {
  // 53 random mantissa bits; portable across standard libraries.
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

ComplexVector initial_noise(const FomConfig& config, Index n, Index spectrum) {
  std::mt19937_64 gen(config.seed);
  ComplexVector uh = ComplexVector::Zero(spectrum);
  const Index n_low = std::max<Index>(1, n / 8);
  const double scale = config.noise_amplitude * static_cast<double>(n);
  for (Index q = 1; q <= n_low && q < spectrum; ++q) {
    const double re = 2.0 * unit_uniform(gen) - 1.0;
    const double im = 2.0 * unit_uniform(gen) - 1.0;
    uh[q] = scale * std::complex<double>(re, im);
  }
  return uh;
}

class SpectralStepper {
public:
  SpectralStepper(const FomConfig& config, const GridSpec& grid)
      : config_(config), fft_(grid.n_points, grid.domain_length) {
    linear_ = fom_linear_symbol(config, fft_.wavenumbers());
    const Vector f = fom_forcing(config, grid);
    forcing_hat_ = fft_.forward(std::span<const double>(f.data(), static_cast<std::size_t>(f.size())));
    if (config.dealias) forcing_hat_.array() *= fft_.dealias_mask().array().cast<std::complex<double>>();
    k_max_ = config.dealias ? fft_.wavenumbers()[(grid.n_points - 1) / 3] : fft_.wavenumbers().maxCoeff();
  }

  void reset(const ComplexVector& uh) {
    states_.clear();
    nonlinear_.clear();
    states_.push_front(uh);
    nonlinear_.push_front(nonlinear(uh));
  }

  const ComplexVector& current() const { return states_.front(); }

  /// Advances one step at order min(history, max_order).
  void step(int max_order) {
    const int order = std::min<int>(static_cast<int>(states_.size()), max_order);
    const auto c = bdf_ext_coefficients(order);
    std::vector<ComplexVector> s(states_.begin(), states_.end());
    std::vector<ComplexVector> nl(nonlinear_.begin(), nonlinear_.end());
    ComplexVector rhs = bdf_ext_rhs<ComplexVector>(order, s, nl, config_.dt);
    for (Index q = 0; q < rhs.size(); ++q) rhs[q] /= (c.gamma0 / config_.dt + linear_[q]);
    states_.push_front(rhs);
    nonlinear_.push_front(nonlinear(rhs));
    if (states_.size() > 3) {
      states_.pop_back();
      nonlinear_.pop_back();
    }
  }

  Vector physical() { return fft_.inverse(current()); }
  double k_max() const { return k_max_; }
  PeriodicSpectral& fft() { return fft_; }

private:
  ComplexVector nonlinear(const ComplexVector& uh) {
    return fft_.burgers_nonlinearity(uh, config_.dealias) + forcing_hat_;
  }

  FomConfig config_;
  PeriodicSpectral fft_;
  Vector linear_;
  ComplexVector forcing_hat_;
  double k_max_ = 0.0;
  std::deque<ComplexVector> states_;
  std::deque<ComplexVector> nonlinear_;
};

void check_finite(const Vector& u, long step) {
  if (!u.allFinite()) {
    std::ostringstream msg;
    msg << "FOM blow-up: non-finite field value at step " << step;
    throw BlowUpError(msg.str(), step);
  }
}

}  // namespace

SnapshotSet run_fom(const FomConfig& config, const GridSpec& grid, FomMetadata* metadata) {
  config.validate();
  grid.validate();
  SpectralStepper stepper(config, grid);
  stepper.reset(initial_noise(config, grid.n_points, grid.n_points / 2 + 1));

  const long spinup = static_cast<long>(std::floor(config.spinup_fraction * static_cast<double>(config.n_steps)));
  const long n_snap = (config.n_steps - spinup) / config.snapshot_stride;
  SnapshotSet out;
  out.grid = grid;
  out.fields.resize(n_snap, grid.n_points);
  out.quad_weights = uniform_weights(grid);
  out.times.reserve(static_cast<std::size_t>(n_snap));

  double max_cfl = 0.0;
  Index row = 0;
  for (long s = 1; s <= config.n_steps; ++s) {
    stepper.step(3);
    const bool record = s > spinup && (s - spinup) % config.snapshot_stride == 0 && row < n_snap;
    // Finite-value and CFL checks need physical space; do them every step.
    Vector u = stepper.physical();
    check_finite(u, s);
    max_cfl = std::max(max_cfl, config.dt * u.cwiseAbs().maxCoeff() * stepper.k_max());
    if (record) {
      out.fields.row(row++) = u.transpose();
      out.times.push_back(static_cast<double>(s) * config.dt);
    }
  }
  if (metadata) {
    metadata->spinup_steps = spinup;
    metadata->max_cfl = max_cfl;
    std::ostringstream noise;
    noise << "seeded uniform noise (seed " << config.seed << ", amplitude " << config.noise_amplitude
          << ") on Fourier modes 1.." << std::max<Index>(1, grid.n_points / 8);
    metadata->noise_model = noise.str();
    std::ostringstream note;
    note << "max advective CFL dt*max|u|*k_max = " << max_cfl << " (bound " << kAdvectiveCflBound << ")";
    metadata->stability_note = note.str();
  }
  return out;
}

SnapshotSet run_fom_from(const FomConfig& config, const GridSpec& grid, const Vector& initial, long n_steps,
                         long stride, int max_order) {
  grid.validate();
  if (initial.size() != grid.n_points) throw DimensionError("run_fom_from: initial field size mismatch");
  if (stride <= 0 || n_steps < 0) throw Error("run_fom_from: invalid step counts");
  SpectralStepper stepper(config, grid);
  stepper.reset(stepper.fft().forward(std::span<const double>(initial.data(), static_cast<std::size_t>(initial.size()))));

  SnapshotSet out;
  out.grid = grid;
  out.quad_weights = uniform_weights(grid);
  const Index rows = n_steps / stride + 1;
  out.fields.resize(rows, grid.n_points);
  out.fields.row(0) = initial.transpose();
  out.times.push_back(0.0);
  Index row = 1;
  for (long s = 1; s <= n_steps; ++s) {
    stepper.step(max_order);
    if (s % stride == 0) {
      Vector u = stepper.physical();
      check_finite(u, s);
      out.fields.row(row++) = u.transpose();
      out.times.push_back(static_cast<double>(s) * config.dt);
    }
  }
  return out;
}

}  // namespace regrom
