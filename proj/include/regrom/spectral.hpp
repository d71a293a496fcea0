#pragma once

#include "regrom/types.hpp"

#include <fftw3.h>

#include <complex>
#include <span>

namespace regrom {

/// Real-to-complex FFT helper on a uniform periodic grid of length L.
///
/// Owns its FFTW plans and scratch buffers; one instance per thread.
/// Fourier coefficients follow the unnormalised FFTW convention
/// (forward sums, inverse divides by n).
class PeriodicSpectral {
public:
  PeriodicSpectral(Index n, double length);
  ~PeriodicSpectral();
  PeriodicSpectral(const PeriodicSpectral&) = delete;
  PeriodicSpectral& operator=(const PeriodicSpectral&) = delete;

  Index size() const noexcept { return n_; }
  Index spectrum_size() const noexcept { return n_ / 2 + 1; }
  double length() const noexcept { return length_; }

  /// Angular wavenumbers 2*pi*q/L for q = 0..n/2.
  const Vector& wavenumbers() const noexcept { return k_; }

  /// 2/3-rule mask: 1 where 3q < n, else 0.
  const Vector& dealias_mask() const noexcept { return mask_; }

  ComplexVector forward(std::span<const double> u);
  Vector inverse(const ComplexVector& uh);

  /// Spectral derivative of the given order; the Nyquist coefficient is
  /// dropped for odd orders.
  Vector derivative(std::span<const double> u, int order = 1);
  Vector derivative(const Vector& u, int order = 1) {
    return derivative(std::span<const double>(u.data(), static_cast<std::size_t>(u.size())), order);
  }

  /// Fourier coefficients of -(u^2/2)_x with 2/3-rule truncation of the
  /// input and the product.
  ComplexVector burgers_nonlinearity(const ComplexVector& uh, bool dealias = true);

private:
  Index n_;
  double length_;
  Vector k_;
  Vector mask_;
  double* real_buf_ = nullptr;
  fftw_complex* spec_buf_ = nullptr;
  fftw_plan forward_plan_ = nullptr;
  fftw_plan inverse_plan_ = nullptr;
};

}  // namespace regrom
