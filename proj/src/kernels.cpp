#include "worn/kernels.hpp"

#include <cmath>
#include <limits>

namespace worn::kernels {
namespace {

inline double support_at(std::span<const Vec2> vertices, double c, double s) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : vertices) best = std::max(best, v.x() * c + v.y() * s);
  return best;
}

inline void element(std::span<const Vec2> nodes, const std::array<int, 3>& t, std::array<double, 9>& k,
                    std::array<double, 9>& m, double& area) {
  const Vec2& a = nodes[static_cast<std::size_t>(t[0])];
  const Vec2& b = nodes[static_cast<std::size_t>(t[1])];
  const Vec2& c = nodes[static_cast<std::size_t>(t[2])];
  // Gradients of the barycentric coordinates are (-dy, dx) / (2 area).
  const double dx[3] = {c.x() - b.x(), a.x() - c.x(), b.x() - a.x()};
  const double dy[3] = {c.y() - b.y(), a.y() - c.y(), b.y() - a.y()};
  area = 0.5 * (dx[2] * (-dy[1]) - dy[2] * (-dx[1]));
  const double inv = 1.0 / (4.0 * area);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      k[static_cast<std::size_t>(3 * i + j)] = (dx[i] * dx[j] + dy[i] * dy[j]) * inv;
      m[static_cast<std::size_t>(3 * i + j)] = area * (i == j ? 2.0 : 1.0) / 12.0;
    }
  }
}

inline void moments_at(std::span<const double> density, const AngleGrid& grid, int k, double& cos_m,
                       double& sin_m) {
  cos_m = 0.0;
  sin_m = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double t = k * grid.theta(i);
    cos_m += density[static_cast<std::size_t>(i)] * std::cos(t);
    sin_m += density[static_cast<std::size_t>(i)] * std::sin(t);
  }
  cos_m *= grid.spacing();
  sin_m *= grid.spacing();
}

}  // namespace

void polygon_support_serial(std::span<const Vec2> vertices, const AngleGrid& grid, std::span<double> out) {
  for (int i = 0; i < grid.size(); ++i) {
    const double t = grid.theta(i);
    out[static_cast<std::size_t>(i)] = support_at(vertices, std::cos(t), std::sin(t));
  }
}

void polygon_support(std::span<const Vec2> vertices, const AngleGrid& grid, std::span<double> out) {
  const int n = grid.size();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const double t = grid.theta(i);
    out[static_cast<std::size_t>(i)] = support_at(vertices, std::cos(t), std::sin(t));
  }
}

ElementMatrices p1_element_matrices_serial(std::span<const Vec2> nodes, std::span<const std::array<int, 3>> triangles) {
  ElementMatrices out;
  out.stiffness.resize(triangles.size());
  out.mass.resize(triangles.size());
  out.area.resize(triangles.size());
  for (std::size_t e = 0; e < triangles.size(); ++e) {
    element(nodes, triangles[e], out.stiffness[e], out.mass[e], out.area[e]);
  }
  return out;
}

ElementMatrices p1_element_matrices(std::span<const Vec2> nodes, std::span<const std::array<int, 3>> triangles) {
  ElementMatrices out;
  out.stiffness.resize(triangles.size());
  out.mass.resize(triangles.size());
  out.area.resize(triangles.size());
  const auto count = static_cast<std::ptrdiff_t>(triangles.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t e = 0; e < count; ++e) {
    const auto i = static_cast<std::size_t>(e);
    element(nodes, triangles[i], out.stiffness[i], out.mass[i], out.area[i]);
  }
  return out;
}

std::vector<double> dictionary_moments_serial(std::span<const double> density, const AngleGrid& grid, int degree) {
  std::vector<double> out(static_cast<std::size_t>(2 * degree + 1));
  for (int k = 0; k <= degree; ++k) {
    double c = 0.0, s = 0.0;
    moments_at(density, grid, k, c, s);
    if (k == 0) {
      out[0] = c;
    } else {
      out[static_cast<std::size_t>(2 * k - 1)] = c;
      out[static_cast<std::size_t>(2 * k)] = s;
    }
  }
  return out;
}

std::vector<double> dictionary_moments(std::span<const double> density, const AngleGrid& grid, int degree) {
  std::vector<double> out(static_cast<std::size_t>(2 * degree + 1));
#pragma omp parallel for schedule(static)
  for (int k = 0; k <= degree; ++k) {
    double c = 0.0, s = 0.0;
    moments_at(density, grid, k, c, s);
    if (k == 0) {
      out[0] = c;
    } else {
      out[static_cast<std::size_t>(2 * k - 1)] = c;
      out[static_cast<std::size_t>(2 * k)] = s;
    }
  }
  return out;
}

}  // namespace worn::kernels
