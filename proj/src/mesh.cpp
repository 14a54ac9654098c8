#include "worn/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "delaunay.hpp"
#include "worn/error.hpp"

namespace worn {

double TriangleMesh::area() const {
  double a = 0.0;
  for (const auto& t : triangles) {
    a += 0.5 * cross(nodes[static_cast<std::size_t>(t[1])] - nodes[static_cast<std::size_t>(t[0])],
                     nodes[static_cast<std::size_t>(t[2])] - nodes[static_cast<std::size_t>(t[0])]);
  }
  return a;
}

double TriangleMesh::boundary_length() const {
  double l = 0.0;
  for (const auto& e : boundary) l += (nodes[static_cast<std::size_t>(e.to)] - nodes[static_cast<std::size_t>(e.from)]).norm();
  return l;
}

double TriangleMesh::min_angle_deg() const {
  double best = 180.0;
  for (const auto& t : triangles) {
    for (int i = 0; i < 3; ++i) {
      const Vec2& p = nodes[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])];
      const Vec2 u = nodes[static_cast<std::size_t>(t[static_cast<std::size_t>((i + 1) % 3)])] - p;
      const Vec2 v = nodes[static_cast<std::size_t>(t[static_cast<std::size_t>((i + 2) % 3)])] - p;
      best = std::min(best, std::atan2(std::abs(cross(u, v)), u.dot(v)) * 180.0 / std::numbers::pi);
    }
  }
  return best;
}

double TriangleMesh::max_edge() const {
  double m = 0.0;
  for (const auto& t : triangles) {
    for (int i = 0; i < 3; ++i) {
      m = std::max(m, (nodes[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])] -
                       nodes[static_cast<std::size_t>(t[static_cast<std::size_t>((i + 1) % 3)])])
                          .norm());
    }
  }
  return m;
}

namespace {

using Kind = detail::DelaunayRefiner::VertexKind;

struct RingPoint {
  Vec2 p;
  int grid = -1;
  int facet = -1;
};

// Strict interior test for a convex ring around the origin, O(log n) by
// angular bisection.
class ConvexRing {
 public:
  explicit ConvexRing(const std::vector<Vec2>& pts) : pts_(pts) {
    angles_.reserve(pts.size());
    const double a0 = std::atan2(pts[0].y(), pts[0].x());
    for (const Vec2& p : pts) angles_.push_back(a0 + wrap(std::atan2(p.y(), p.x()) - a0));
  }
  bool contains(const Vec2& q) const {
    const double a = angles_[0] + wrap(std::atan2(q.y(), q.x()) - angles_[0]);
    const auto k = static_cast<std::size_t>(std::upper_bound(angles_.begin(), angles_.end(), a) - angles_.begin());
    const Vec2& a_pt = pts_[k - 1];
    const Vec2& b_pt = pts_[k % pts_.size()];
    return cross(b_pt - a_pt, q - a_pt) > 0.0;
  }

 private:
  static double wrap(double d) {
    const double two_pi = 2.0 * std::numbers::pi;
    d = std::fmod(d, two_pi);
    return d < 0.0 ? d + two_pi : d;
  }
  std::vector<Vec2> pts_;
  std::vector<double> angles_;
};

double angle_of_normal(const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  double t = std::atan2(-d.x(), d.y());
  if (t < 0.0) t += 2.0 * std::numbers::pi;
  return t;
}

// Subdivides every chord of the closed ring into pieces no longer than h.
std::vector<RingPoint> subdivide(const std::vector<RingPoint>& ring, double h) {
  std::vector<RingPoint> out;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const RingPoint& a = ring[i];
    const RingPoint& b = ring[(i + 1) % ring.size()];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b.p - a.p).norm() / h - 1e-9)));
    out.push_back(a);
    for (int j = 1; j < pieces; ++j) {
      const double s = static_cast<double>(j) / pieces;
      out.push_back({(1.0 - s) * a.p + s * b.p, -1, a.facet});
    }
  }
  return out;
}

TriangleMesh triangulate(const std::vector<RingPoint>& ring, const std::vector<Vec2>& inner, double target_h,
                         bool smooth, int grid_size) {
  std::vector<Vec2> ring_pts;
  ring_pts.reserve(ring.size());
  for (const auto& r : ring) ring_pts.push_back(r.p);
  const ConvexRing hull(ring_pts);

  Vec2 lo = ring_pts[0], hi = ring_pts[0];
  for (const Vec2& p : ring_pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  detail::DelaunayRefiner dt(lo, hi);
  std::vector<int> outer_id, inner_id;
  for (const auto& r : ring) outer_id.push_back(dt.add_vertex(r.p, Kind::Outer));
  for (const Vec2& p : inner) inner_id.push_back(dt.add_vertex(p, Kind::Inner));
  for (std::size_t i = 0; i < outer_id.size(); ++i) dt.add_segment(outer_id[i], outer_id[(i + 1) % outer_id.size()]);
  for (std::size_t i = 0; i < inner_id.size(); ++i) dt.add_segment(inner_id[i], inner_id[(i + 1) % inner_id.size()]);

  detail::DelaunayRefiner::Options opt;
  opt.max_circumradius = 0.75 * target_h;
  opt.freeze_outer_layer = !inner.empty();
  opt.inside = [&hull](const Vec2& q) { return hull.contains(q); };
  const double area = 0.5 * (hi - lo).prod() * 4.0;
  opt.max_vertices = static_cast<std::size_t>(40.0 * area / (target_h * target_h)) + 20 * ring.size() + 10000;
  dt.refine(opt);

  const std::vector<Vec2> verts = dt.vertices();
  const auto tris = dt.triangles();
  const auto next = dt.outer_successor();

  // Compact: keep referenced vertices in their insertion order.
  std::vector<int> remap(verts.size(), -1);
  for (const auto& t : tris) {
    for (int v : t) remap[static_cast<std::size_t>(v)] = 0;
  }
  TriangleMesh mesh;
  for (std::size_t v = 0; v < verts.size(); ++v) {
    if (remap[v] < 0) continue;
    remap[v] = static_cast<int>(mesh.nodes.size());
    mesh.nodes.push_back(verts[v]);
  }
  for (const auto& t : tris) {
    mesh.triangles.push_back({remap[static_cast<std::size_t>(t[0])], remap[static_cast<std::size_t>(t[1])],
                              remap[static_cast<std::size_t>(t[2])]});
  }

  // Ring point k sits at output index outer_id[k] - 3.
  std::unordered_map<int, int> ring_index;
  for (std::size_t k = 0; k < outer_id.size(); ++k) ring_index[outer_id[k] - 3] = static_cast<int>(k);

  mesh.node_grid.assign(mesh.nodes.size(), -1);
  mesh.on_boundary.assign(mesh.nodes.size(), 0);
  if (smooth) mesh.grid_node.assign(static_cast<std::size_t>(grid_size), -1);
  const int start = outer_id[0] - 3;
  int cur = start;
  int facet = ring[0].facet;
  do {
    const auto it = next.find(cur);
    if (it == next.end() || remap[static_cast<std::size_t>(cur)] < 0) {
      throw Error(ErrorCode::MeshFailure, "boundary loop is broken");
    }
    if (const auto r = ring_index.find(cur); r != ring_index.end()) {
      facet = ring[static_cast<std::size_t>(r->second)].facet;
      const int g = ring[static_cast<std::size_t>(r->second)].grid;
      if (g >= 0) {
        mesh.node_grid[static_cast<std::size_t>(remap[static_cast<std::size_t>(cur)])] = g;
        mesh.grid_node[static_cast<std::size_t>(g)] = remap[static_cast<std::size_t>(cur)];
      }
    }
    const int a = remap[static_cast<std::size_t>(cur)];
    const int b = remap[static_cast<std::size_t>(it->second)];
    mesh.on_boundary[static_cast<std::size_t>(a)] = 1;
    mesh.boundary.push_back({a, b, angle_of_normal(mesh.nodes[static_cast<std::size_t>(a)], mesh.nodes[static_cast<std::size_t>(b)]), facet});
    cur = it->second;
    if (mesh.boundary.size() > verts.size()) throw Error(ErrorCode::MeshFailure, "boundary loop does not close");
  } while (cur != start);
  if (mesh.boundary.size() != next.size()) throw Error(ErrorCode::MeshFailure, "boundary is not a single loop");

  mesh.smooth_boundary = smooth;
  mesh.boundary_layer = !inner.empty();
  mesh.target_h = target_h;
  const double min_angle = mesh.min_angle_deg();
  if (min_angle < kMinMeshAngleDeg) {
    std::ostringstream msg;
    msg << "minimum angle " << min_angle << " deg below " << kMinMeshAngleDeg;
    throw Error(ErrorCode::MeshFailure, msg.str());
  }
  return mesh;
}

void check_target(double target_h, double diameter) {
  if (!(target_h > 0.0) || !std::isfinite(target_h)) throw Error(ErrorCode::InvalidInput, "mesh target must be positive");
  if (target_h > diameter / 8.0) {
    std::ostringstream msg;
    msg << "mesh target " << target_h << " exceeds diameter/8 = " << diameter / 8.0;
    throw Error(ErrorCode::MeshFailure, msg.str());
  }
}

}  // namespace

TriangleMesh mesh_body(const SupportFunction& h, double target_h) {
  h.require_positive();
  h.require_convex();
  check_target(target_h, diameter(h));
  const int n = h.size();
  const std::vector<Vec2> bp = boundary_points(h);
  const std::vector<double> r = curvature_radius(h);

  std::vector<RingPoint> ring;
  for (int i = 0; i < n; ++i) ring.push_back({bp[static_cast<std::size_t>(i)], i, -1});
  ring = subdivide(ring, target_h);

  // One layer of near-equilateral triangles along the boundary: the inner
  // ring is staggered (one point per chord, pushed inward from its midpoint)
  // so every boundary node sees the same stencil and no quad is cocircular.
  const std::size_t m = ring.size();
  std::vector<Vec2> normals(m);
  std::vector<double> radius(m);
  int owner = 0;
  for (std::size_t k = 0; k < m; ++k) {
    if (ring[k].grid >= 0) owner = ring[k].grid;
    const int i1 = (owner + 1) % n;
    const Vec2& a = bp[static_cast<std::size_t>(owner)];
    const Vec2& b = bp[static_cast<std::size_t>(i1)];
    const double s = ring[k].grid >= 0 ? 0.0 : (ring[k].p - a).norm() / std::max((b - a).norm(), 1e-300);
    normals[k] = ((1.0 - s) * unit_normal(h.grid().theta(owner)) + s * unit_normal(h.grid().theta(i1))).normalized();
    radius[k] = ring[k].grid >= 0 ? r[static_cast<std::size_t>(owner)]
                                  : std::min(r[static_cast<std::size_t>(owner)], r[static_cast<std::size_t>(i1)]);
  }
  std::vector<Vec2> inner(m);
  bool layer_ok = true;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t k1 = (k + 1) % m;
    const Vec2 chord = ring[k1].p - ring[k].p;
    const double delta = 0.5 * std::sqrt(3.0) * chord.norm();
    if (delta > 0.3 * std::min(radius[k], radius[k1])) layer_ok = false;
    inner[k] = 0.5 * (ring[k].p + ring[k1].p) - delta * (normals[k] + normals[k1]).normalized();
  }

  if (layer_ok) {
    try {
      return triangulate(ring, inner, target_h, true, n);
    } catch (const Error&) {
      // Fall through to the plain mesh.
    }
  }
  return triangulate(ring, {}, target_h, true, n);
}

TriangleMesh mesh_polygon(const ConvexPolygon& polygon, double target_h) {
  if (!polygon.contains_origin_strictly()) throw Error(ErrorCode::OriginOutside, "polygon does not contain the origin");
  double diam = 0.0;
  for (const Vec2& a : polygon.vertices()) {
    for (const Vec2& b : polygon.vertices()) diam = std::max(diam, (a - b).norm());
  }
  check_target(target_h, diam);
  std::vector<RingPoint> ring;
  for (int i = 0; i < polygon.size(); ++i) ring.push_back({polygon.vertex(i), -1, i});
  return triangulate(subdivide(ring, target_h), {}, target_h, false, 0);
}

TriangleMesh mesh_body(const Body& body, double target_h) {
  return body.polygon ? mesh_polygon(*body.polygon, target_h) : mesh_body(body.support, target_h);
}

}  // namespace worn
