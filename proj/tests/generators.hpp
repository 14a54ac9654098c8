#pragma once

// Seeded generators for the property tests.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "worn/geometry.hpp"

namespace gen {

class Rng {
 public:
  explicit Rng(unsigned long long seed) : eng_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }

 private:
  std::mt19937_64 eng_;
};

// h = c0 + sum_k a_k cos(k (theta - phi_k)) over k = 2..5 (even k only when
// symmetric), plus a translation when not symmetric. Convex with
// h + h'' >= 0.2 c0.
inline worn::SupportFunction smooth_body(Rng& rng, const worn::AngleGrid& grid, bool symmetric = false) {
  for (;;) {
    const double c0 = rng.uniform(0.7, 1.5);
    std::vector<double> amp, phase;
    std::vector<int> modes;
    for (int k = 2; k <= 5; ++k) {
      if (symmetric && k % 2) continue;
      modes.push_back(k);
      amp.push_back(rng.uniform(-0.06, 0.06) * c0);
      phase.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
    }
    const double tx = symmetric ? 0.0 : rng.uniform(-0.2, 0.2) * c0;
    const double ty = symmetric ? 0.0 : rng.uniform(-0.2, 0.2) * c0;
    std::vector<double> h(static_cast<std::size_t>(grid.size()));
    double rmin = 1e300;
    for (int i = 0; i < grid.size(); ++i) {
      const double t = grid.theta(i);
      double v = c0 + tx * std::cos(t) + ty * std::sin(t), r = c0;
      for (std::size_t j = 0; j < modes.size(); ++j) {
        const double c = amp[j] * std::cos(modes[j] * (t - phase[j]));
        v += c;
        r += (1.0 - modes[j] * modes[j]) * c;
      }
      h[static_cast<std::size_t>(i)] = v;
      rmin = std::min(rmin, r);
    }
    if (rmin >= 0.2 * c0 && *std::min_element(h.begin(), h.end()) > 0.1) return {grid, std::move(h)};
  }
}

// Vertices on an ellipse at sorted random angles; gaps below pi keep the
// origin inside.
inline worn::ConvexPolygon polygon(Rng& rng, int n) {
  for (;;) {
    std::vector<double> t;
    for (int i = 0; i < n; ++i) t.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
    std::sort(t.begin(), t.end());
    double gap = t.front() + 2.0 * std::numbers::pi - t.back();
    for (int i = 1; i < n; ++i) gap = std::max(gap, t[static_cast<std::size_t>(i)] - t[static_cast<std::size_t>(i - 1)]);
    if (gap > 0.9 * std::numbers::pi) continue;
    const double a = rng.uniform(0.6, 1.6), b = rng.uniform(0.6, 1.6);
    std::vector<worn::Vec2> v;
    for (double s : t) v.emplace_back(a * std::cos(s), b * std::sin(s));
    return worn::ConvexPolygon(std::move(v));
  }
}

}  // namespace gen
