#include "worn/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "worn/error.hpp"

namespace worn::fourier {
namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// The FFTW planner is not thread-safe; execution of an existing plan on
// caller-owned buffers is.
const PlanPair& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> real(n);
  std::vector<std::complex<double>> cplx(n / 2 + 1);
  auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.r2c = fftw_plan_dft_r2c_1d(n, real.data(), c, flags);
  p.c2r = fftw_plan_dft_c2r_1d(n, c, real.data(), flags | FFTW_DESTROY_INPUT);
  return cache.emplace(n, p).first->second;
}

void require_even(std::size_t n) {
  if (n < 2 || n % 2 != 0) {
    throw Error(ErrorCode::InvalidInput, "periodic sample count must be even, got " + std::to_string(n));
  }
}

}  // namespace

std::vector<std::complex<double>> forward(std::span<const double> values) {
  require_even(values.size());
  const int n = static_cast<int>(values.size());
  std::vector<double> in(values.begin(), values.end());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_execute_dft_r2c(plans_for(n).r2c, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> inverse(std::span<const std::complex<double>> coeffs, int n) {
  require_even(static_cast<std::size_t>(n));
  if (coeffs.size() != static_cast<std::size_t>(n / 2 + 1)) {
    throw Error(ErrorCode::InvalidInput, "coefficient count does not match n");
  }
  std::vector<std::complex<double>> in(coeffs.begin(), coeffs.end());
  std::vector<double> out(n);
  fftw_execute_dft_c2r(plans_for(n).c2r, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  for (double& v : out) v /= n;
  return out;
}

std::vector<double> derivative(std::span<const double> values, int order) {
  const int n = static_cast<int>(values.size());
  auto c = forward(values);
  const std::complex<double> i_unit(0.0, 1.0);
  for (int k = 0; k <= n / 2; ++k) {
    std::complex<double> factor = std::pow(i_unit * static_cast<double>(k), order);
    if (k == n / 2 && order % 2 == 1) factor = 0.0;
    c[k] *= factor;
  }
  return inverse(c, n);
}

LowpassResult lowpass(std::span<const double> values, int cutoff) {
  const int n = static_cast<int>(values.size());
  auto c = forward(values);
  double removed = 0.0;
  for (int k = cutoff + 1; k <= n / 2; ++k) {
    const double weight = (k == 0 || k == n / 2) ? 1.0 : 2.0;
    removed += weight * std::norm(c[k]);
    c[k] = 0.0;
  }
  LowpassResult result;
  result.values = inverse(c, n);
  // Parseval: sum |v_i|^2 = (1/n) sum_k |c_k|^2 over the full spectrum.
  result.removed_l2 = std::sqrt(removed / n * (2.0 * std::numbers::pi / n));
  return result;
}

std::vector<double> heat_smooth(std::span<const double> values, double time) {
  const int n = static_cast<int>(values.size());
  auto c = forward(values);
  for (int k = 0; k <= n / 2; ++k) c[k] *= std::exp(-time * k * k);
  return inverse(c, n);
}

namespace {

// Sum over the symmetric trigonometric interpolant; the Nyquist term uses
// cos(n/2 theta) only.
template <typename Term>
double synthesize(std::span<const double> values, double theta, Term term) {
  const int n = static_cast<int>(values.size());
  const auto c = forward(values);
  double sum = 0.0;
  for (int k = 0; k <= n / 2; ++k) {
    const double weight = (k == 0 || k == n / 2) ? 1.0 : 2.0;
    sum += weight * term(k, c[k], theta, k == n / 2);
  }
  return sum / n;
}

}  // namespace

double evaluate(std::span<const double> values, double theta) {
  return synthesize(values, theta, [](int k, std::complex<double> ck, double t, bool nyquist) {
    if (nyquist) return ck.real() * std::cos(k * t);
    return ck.real() * std::cos(k * t) - ck.imag() * std::sin(k * t);
  });
}

double evaluate_derivative(std::span<const double> values, double theta) {
  return synthesize(values, theta, [](int k, std::complex<double> ck, double t, bool nyquist) {
    if (nyquist) return 0.0;
    return -k * (ck.real() * std::sin(k * t) + ck.imag() * std::cos(k * t));
  });
}

std::vector<double> resample(std::span<const double> values, int m) {
  require_even(static_cast<std::size_t>(m));
  const int n = static_cast<int>(values.size());
  const auto c = forward(values);
  std::vector<std::complex<double>> d(m / 2 + 1, 0.0);
  const int kmax = std::min(n / 2, m / 2);
  const double scale = static_cast<double>(m) / n;
  for (int k = 0; k <= kmax; ++k) {
    std::complex<double> ck = c[k];
    if (k == n / 2 && k < m / 2) {
      ck *= 0.5;  // old Nyquist cosine becomes an ordinary +-k pair
    } else if (k == m / 2 && k < n / 2) {
      ck = 2.0 * c[k].real();  // sine part aliases to zero on the coarse grid
    }
    d[k] = ck * scale;
  }
  return inverse(d, m);
}

std::vector<double> symmetrize(std::span<const double> values) {
  require_even(values.size());
  const std::size_t n = values.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (values[i] + values[(i + n / 2) % n]);
  return out;
}

}  // namespace worn::fourier
