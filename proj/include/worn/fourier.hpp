#pragma once

#include <complex>
#include <span>
#include <vector>

namespace worn::fourier {

// Trigonometric interpolation on a uniform periodic grid of even size.
// Coefficients follow the FFTW r2c layout (n/2 + 1 entries, unnormalized).

std::vector<std::complex<double>> forward(std::span<const double> values);
std::vector<double> inverse(std::span<const std::complex<double>> coeffs, int n);

// Spectral derivative of the given order (1 or 2). The Nyquist mode is
// dropped for odd orders.
std::vector<double> derivative(std::span<const double> values, int order);

struct LowpassResult {
  std::vector<double> values;
  double removed_l2 = 0.0;  // discrete L2 norm (per unit angle) of what was removed
};

// Zeroes all modes with wavenumber > cutoff.
LowpassResult lowpass(std::span<const double> values, int cutoff);

// Multiplies mode k by exp(-time * k^2). Preserves h + h'' >= 0.
std::vector<double> heat_smooth(std::span<const double> values, double time);

// Value (and derivative) of the trigonometric interpolant at an arbitrary angle.
double evaluate(std::span<const double> values, double theta);
double evaluate_derivative(std::span<const double> values, double theta);

// Resamples the interpolant onto a grid of m points (m even).
std::vector<double> resample(std::span<const double> values, int m);

// Projection onto even modes: (v(theta) + v(theta + pi)) / 2.
std::vector<double> symmetrize(std::span<const double> values);

}  // namespace worn::fourier
