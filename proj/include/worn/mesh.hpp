#pragma once

#include <array>
#include <vector>

#include "worn/body.hpp"
#include "worn/geometry.hpp"

namespace worn {

struct BoundaryEdge {
  int from = 0;
  int to = 0;
  double normal_angle = 0.0;  // outward normal of the chord, in [0, 2pi)
  int facet = -1;             // polygon edge this piece lies on (polygon meshes)
};

/// Conforming P1 triangulation of a convex body. The boundary is one closed
/// counterclockwise loop. For smooth bodies every grid angle has its
/// inverse-Gauss-map point among the boundary nodes (grid_node).
struct TriangleMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary;
  std::vector<int> grid_node;      // grid index -> node (smooth meshes only)
  std::vector<int> node_grid;      // node -> grid index or -1
  std::vector<char> on_boundary;   // per node
  bool smooth_boundary = false;
  bool boundary_layer = false;
  double target_h = 0.0;

  int node_count() const noexcept { return static_cast<int>(nodes.size()); }
  double area() const;
  double boundary_length() const;
  double min_angle_deg() const;
  double max_edge() const;
};

inline constexpr double kMinMeshAngleDeg = 20.0;

// Smooth body: boundary through boundary_point(h, theta_i), with a one-cell
// structured layer along the boundary; polygons: exact vertices, no layer.
// Throws MeshFailure when target_h > diameter / 8 or quality is unreachable.
TriangleMesh mesh_body(const SupportFunction& h, double target_h);
TriangleMesh mesh_polygon(const ConvexPolygon& polygon, double target_h);
TriangleMesh mesh_body(const Body& body, double target_h);

}  // namespace worn
