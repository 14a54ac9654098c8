#pragma once

#include <array>
#include <span>
#include <vector>

#include "worn/angle_grid.hpp"
#include "worn/geometry.hpp"

// Data-parallel inner loops. Each kernel has an OpenMP version and a serial
// reference with identical arithmetic, so results agree bit for bit; the
// serial versions are kept for the tests and the benchmark.
namespace worn::kernels {

// out[i] = max_v v . (cos theta_i, sin theta_i)
void polygon_support_serial(std::span<const Vec2> vertices, const AngleGrid& grid, std::span<double> out);
void polygon_support(std::span<const Vec2> vertices, const AngleGrid& grid, std::span<double> out);

// Local P1 stiffness and consistent mass matrices, row-major 3x3 per triangle.
// Triangles must be positively oriented.
struct ElementMatrices {
  std::vector<std::array<double, 9>> stiffness;
  std::vector<std::array<double, 9>> mass;
  std::vector<double> area;
};

ElementMatrices p1_element_matrices_serial(std::span<const Vec2> nodes, std::span<const std::array<int, 3>> triangles);
ElementMatrices p1_element_matrices(std::span<const Vec2> nodes, std::span<const std::array<int, 3>> triangles);

// Integrals of the fixed trigonometric test dictionary {1, cos k, sin k : k <= degree}
// against a density sampled on the grid (plain periodic quadrature).
std::vector<double> dictionary_moments_serial(std::span<const double> density, const AngleGrid& grid, int degree);
std::vector<double> dictionary_moments(std::span<const double> density, const AngleGrid& grid, int degree);

}  // namespace worn::kernels
