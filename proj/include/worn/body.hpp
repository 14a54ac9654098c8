#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "worn/geometry.hpp"

namespace worn {

/// A convex body as used by the solvers: always a sampled support function,
/// plus the exact vertex list when the body is a polygon. Polygonal bodies are
/// meshed from their vertices and carry atomic measures.
struct Body {
  std::string name;
  SupportFunction support;
  std::optional<ConvexPolygon> polygon;

  bool is_polygon() const noexcept { return polygon.has_value(); }
  const AngleGrid& grid() const noexcept { return support.grid(); }
  double area() const;
  double support_at(double theta) const;
  // Largest distance between support lines in opposite directions.
  double diameter() const;
};

Body body_from_support(std::string name, SupportFunction h);
Body body_from_polygon(std::string name, ConvexPolygon polygon, const AngleGrid& grid);

/// Named fixtures:
///   disk[:R]            ellipse:a:b          square[:side]
///   rect:l  (l x 1)     hexagon[:R]          smoothsquare[:t]
///   fourier:a0,a1,b1,a2,b2,...               random:seed
/// Every fixture is centered at the origin.
Body make_fixture(std::string_view spec, const AngleGrid& grid);

// disk, ellipses 1.2 / 1.5 / 2, square, regular hexagon, two random smooth bodies.
std::vector<std::string> standard_corpus();

// Exact ellipse support sqrt(a^2 cos^2 + b^2 sin^2) on the grid.
SupportFunction ellipse_support(const AngleGrid& grid, double a, double b);

}  // namespace worn
