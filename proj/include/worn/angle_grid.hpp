#pragma once

#include <cmath>
#include <numbers>

namespace worn {

/// Uniform grid on the unit circle, theta_i = 2*pi*i/n. The size is even so
/// that theta_i + pi is again a grid angle (index i + n/2).
class AngleGrid {
 public:
  static constexpr int kMinAngles = 16;
  static constexpr int kDefaultAngles = 256;

  explicit AngleGrid(int n_angles = kDefaultAngles);

  int size() const noexcept { return n_; }
  double spacing() const noexcept { return 2.0 * std::numbers::pi / n_; }
  double theta(int i) const noexcept { return spacing() * i; }
  int antipode(int i) const noexcept { return (i + n_ / 2) % n_; }
  int wrap(int i) const noexcept { return ((i % n_) + n_) % n_; }

  // Index of the grid angle equal to theta, or -1 when theta is off-grid.
  int index_of(double theta, double tol = 1e-12) const noexcept;

  friend bool operator==(const AngleGrid& a, const AngleGrid& b) noexcept { return a.n_ == b.n_; }

 private:
  int n_;
};

void require_same_grid(const AngleGrid& a, const AngleGrid& b);

}  // namespace worn
