#include "worn/angle_grid.hpp"

#include <string>

#include "worn/error.hpp"

namespace worn {

AngleGrid::AngleGrid(int n_angles) : n_(n_angles) {
  if (n_angles < kMinAngles || n_angles % 2 != 0) {
    throw Error(ErrorCode::InvalidInput,
                "n_angles must be even and >= " + std::to_string(kMinAngles) +
                    ", got " + std::to_string(n_angles));
  }
}

int AngleGrid::index_of(double theta, double tol) const noexcept {
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0) t += two_pi;
  const double k = t / spacing();
  const double nearest = std::round(k);
  if (std::abs(k - nearest) * spacing() > tol) return -1;
  return wrap(static_cast<int>(nearest));
}

void require_same_grid(const AngleGrid& a, const AngleGrid& b) {
  if (!(a == b)) {
    throw Error(ErrorCode::GridMismatch,
                "grids differ (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace worn
