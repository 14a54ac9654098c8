#pragma once

#include <Eigen/Core>
#include <span>
#include <utility>
#include <vector>

#include "worn/angle_grid.hpp"

namespace worn {

using Vec2 = Eigen::Vector2d;

inline Vec2 unit_normal(double theta) { return {std::cos(theta), std::sin(theta)}; }
inline Vec2 unit_tangent(double theta) { return {-std::sin(theta), std::cos(theta)}; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Relative threshold below which h + h'' counts as non-convex
/// (scaled by the mean of h).
inline constexpr double kConvexityEps = 1e-10;

/// Support function sampled on a uniform angle grid.
///
/// Construction only checks sizes and finiteness; positivity and discrete
/// convexity are properties the operations check as preconditions (flow
/// candidates and sampled polygons legitimately violate the spectral
/// convexity test). Derivatives are spectral.
class SupportFunction {
 public:
  SupportFunction(AngleGrid grid, std::vector<double> values);

  static SupportFunction constant(const AngleGrid& grid, double radius);

  const AngleGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](int i) const noexcept { return values_[static_cast<std::size_t>(i)]; }
  int size() const noexcept { return grid_.size(); }

  double mean() const;
  double min() const;
  double max() const;

  std::vector<double> first_derivative() const;
  std::vector<double> second_derivative() const;

  bool is_positive() const;
  bool is_convex() const;  // h + h'' > kConvexityEps * mean(h) on every grid angle

  // Throws OriginOutside / NonConvex.
  void require_positive() const;
  void require_convex() const;

 private:
  AngleGrid grid_;
  std::vector<double> values_;
};

/// Counterclockwise, strictly convex vertex list.
class ConvexPolygon {
 public:
  explicit ConvexPolygon(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
  int size() const noexcept { return static_cast<int>(vertices_.size()); }
  const Vec2& vertex(int i) const { return vertices_[static_cast<std::size_t>((i % size() + size()) % size())]; }

  double area() const;
  double perimeter() const;
  Vec2 centroid() const;
  double support(double theta) const;
  bool contains_origin_strictly() const;

  // Outward normal angle in [0, 2pi) of edge (i, i+1).
  double edge_normal_angle(int i) const;
  double edge_length(int i) const;
  // Distance from the origin to the line through edge i (x . nu).
  double edge_support(int i) const;

  ConvexPolygon translated(const Vec2& shift) const;
  ConvexPolygon scaled(double factor) const;

 private:
  std::vector<Vec2> vertices_;
};

struct BodySummary {
  double volume = 0.0;
  Vec2 centroid = Vec2::Zero();
  double min_width = 0.0;
  double diameter = 0.0;
  double hausdorff_to_best_disk = 0.0;
  bool is_centrally_symmetric = false;
};

SupportFunction support_from_polygon(const ConvexPolygon& polygon, const AngleGrid& grid);

// Inverse Gauss map x(theta) = h xi + h' xi_perp via trigonometric interpolation.
Vec2 boundary_point(const SupportFunction& h, double theta);
// Same at every grid angle (cheaper: one spectral derivative).
std::vector<Vec2> boundary_points(const SupportFunction& h);

// Smooth bodies: boundary_point at every grid angle. Kinked samples (e.g. of a
// polygon) fall back to the intersection of the sampled support half-planes,
// which is accepted only if every sample is attained.
ConvexPolygon polygon_from_support(const SupportFunction& h);

// Intersection of the half-planes {x . xi_i <= h_i}; requires h > 0.
ConvexPolygon halfplane_polygon(const SupportFunction& h);

SupportFunction minkowski_sum(const SupportFunction& a, const SupportFunction& b);
SupportFunction scaled(const SupportFunction& h, double factor);
SupportFunction translated(const SupportFunction& h, const Vec2& shift);

// Support of the body cut out by x . xi_i <= a_i^(1-lambda) b_i^lambda.
SupportFunction log_minkowski_combination(const SupportFunction& a, const SupportFunction& b, double lambda);

double volume(const SupportFunction& h);
double perimeter(const SupportFunction& h);
std::vector<double> curvature_radius(const SupportFunction& h);
double polar_volume(const SupportFunction& h);
double hausdorff_distance(const SupportFunction& a, const SupportFunction& b);
double min_width(const SupportFunction& h);
double diameter(const SupportFunction& h);
Vec2 centroid(const SupportFunction& h);
double symmetry_defect(const SupportFunction& h);  // max |h(theta) - h(theta + pi)|
bool is_centrally_symmetric(const SupportFunction& h, double rel_tol = 1e-8);

// Summary of the body plus its support function translated so that the
// centroid sits at the origin.
std::pair<BodySummary, SupportFunction> centroid_and_center(const SupportFunction& h);

}  // namespace worn
