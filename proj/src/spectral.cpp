#include "regrom/spectral.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

namespace regrom {

namespace {
// FFTW's planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

PeriodicSpectral::PeriodicSpectral(Index n, double length) : n_(n), length_(length) {
  if (n < 2 || length <= 0.0) {
    throw Error("PeriodicSpectral: need n >= 2 and positive length");
  }
  const Index nk = spectrum_size();
  k_.resize(nk);
  mask_.resize(nk);
  for (Index q = 0; q < nk; ++q) {
    k_[q] = 2.0 * std::numbers::pi * static_cast<double>(q) / length;
    mask_[q] = (3 * q < n) ? 1.0 : 0.0;
  }
  real_buf_ = fftw_alloc_real(static_cast<std::size_t>(n));
  spec_buf_ = fftw_alloc_complex(static_cast<std::size_t>(nk));
  std::lock_guard<std::mutex> lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_buf_, spec_buf_, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_buf_, real_buf_, FFTW_ESTIMATE);
}

PeriodicSpectral::~PeriodicSpectral() {
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_plan_);
    fftw_destroy_plan(inverse_plan_);
  }
  fftw_free(real_buf_);
  fftw_free(spec_buf_);
}

ComplexVector PeriodicSpectral::forward(std::span<const double> u) {
  if (static_cast<Index>(u.size()) != n_) throw DimensionError("PeriodicSpectral::forward: size mismatch");
  std::copy(u.begin(), u.end(), real_buf_);
  fftw_execute(forward_plan_);
  ComplexVector uh(spectrum_size());
  for (Index q = 0; q < uh.size(); ++q) uh[q] = {spec_buf_[q][0], spec_buf_[q][1]};
  return uh;
}

Vector PeriodicSpectral::inverse(const ComplexVector& uh) {
  if (uh.size() != spectrum_size()) throw DimensionError("PeriodicSpectral::inverse: size mismatch");
  for (Index q = 0; q < uh.size(); ++q) {
    spec_buf_[q][0] = uh[q].real();
    spec_buf_[q][1] = uh[q].imag();
  }
  // c2r destroys its input; the buffer is rewritten every call.
  fftw_execute(inverse_plan_);
  Vector u(n_);
  const double scale = 1.0 / static_cast<double>(n_);
  for (Index i = 0; i < n_; ++i) u[i] = real_buf_[i] * scale;
  return u;
}

Vector PeriodicSpectral::derivative(std::span<const double> u, int order) {
  ComplexVector uh = forward(u);
  const std::complex<double> I(0.0, 1.0);
  for (Index q = 0; q < uh.size(); ++q) uh[q] *= std::pow(I * k_[q], order);
  if (order % 2 == 1 && n_ % 2 == 0) uh[uh.size() - 1] = 0.0;
  return inverse(uh);
}

ComplexVector PeriodicSpectral::burgers_nonlinearity(const ComplexVector& uh, bool dealias) {
  ComplexVector trunc = uh;
  if (dealias) trunc.array() *= mask_.array();
  Vector u = inverse(trunc);
  Vector sq = u.array().square();
  ComplexVector out = forward(std::span<const double>(sq.data(), static_cast<std::size_t>(sq.size())));
  const std::complex<double> I(0.0, 1.0);
  for (Index q = 0; q < out.size(); ++q) out[q] *= -0.5 * I * k_[q];
  if (n_ % 2 == 0) out[out.size() - 1] = 0.0;
  if (dealias) out.array() *= mask_.array();
  return out;
}

}  // namespace regrom
