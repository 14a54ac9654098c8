#pragma once

// Reference values computed independently of the library.

#include <cmath>
#include <numbers>
#include <vector>

#include "worn/geometry.hpp"

namespace oracle {

constexpr double pi = std::numbers::pi;

// J0 from its power series; accurate for x < 10.
inline double bessel_j0(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 80; ++k) {
    term *= -(x * x / 4.0) / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

inline double j01() {
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j0(lo) * bessel_j0(mid) <= 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// int u for -Delta u = 1 on (0, a) x (0, b): double sine series over odd modes.
inline double rect_torsion_double_series(double a, double b, int max_mode = 801) {
  double sum = 0.0;
  for (int m = 1; m <= max_mode; m += 2) {
    for (int n = 1; n <= max_mode; n += 2) {
      const double mu = pi * pi * (m * m / (a * a) + n * n / (b * b));
      sum += 64.0 * a * b / (std::pow(pi, 4) * m * m * n * n * mu);
    }
  }
  return sum;
}

// Same rectangle (0, l) x (0, 1), series in the other direction.
inline double rect_torsion_swapped(double l) {
  double sum = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const double m = 2.0 * k + 1.0;
    sum += std::tanh(m * pi * l / 2.0) / std::pow(m, 5);
  }
  return l / 12.0 - 16.0 / std::pow(pi, 5) * sum;
}

inline double ellipse_torsion(double a, double b) { return pi * a * a * a * b * b * b / (4.0 * (a * a + b * b)); }

// Arc length of the ellipse by the composite Simpson rule on the parametrization.
inline double ellipse_perimeter(double a, double b, int n = 20000) {
  auto f = [a, b](double t) { return std::sqrt(a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t)); };
  const double h = 2.0 * pi / n;
  double s = f(0.0) + f(2.0 * pi);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

inline double shoelace(const std::vector<worn::Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    s += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * s;
}

}  // namespace oracle
