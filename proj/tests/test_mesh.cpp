#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "generators.hpp"
#include "oracles.hpp"
#include "worn/body.hpp"
#include "worn/error.hpp"
#include "worn/mesh.hpp"

using namespace worn;
using oracle::pi;

namespace {

// Every interior edge is shared by exactly two triangles, boundary edges by one,
// and the boundary edges are exactly the mesh's boundary loop.
void check_conforming(const TriangleMesh& m) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : m.triangles) {
    const Vec2 a = m.nodes[static_cast<std::size_t>(t[0])];
    const Vec2 b = m.nodes[static_cast<std::size_t>(t[1])];
    const Vec2 c = m.nodes[static_cast<std::size_t>(t[2])];
    CHECK(cross(b - a, c - a) > 0.0);
    for (int k = 0; k < 3; ++k) {
      const int u = t[static_cast<std::size_t>(k)], v = t[static_cast<std::size_t>((k + 1) % 3)];
      ++count[{std::min(u, v), std::max(u, v)}];
    }
  }
  std::set<std::pair<int, int>> boundary;
  for (const auto& e : m.boundary) boundary.insert({std::min(e.from, e.to), std::max(e.from, e.to)});
  int bad = 0;
  for (const auto& [edge, c] : count) {
    const bool on_b = boundary.count(edge) > 0;
    if ((on_b && c != 1) || (!on_b && c != 2)) ++bad;
  }
  CHECK(bad == 0);
  CHECK(boundary.size() == m.boundary.size());
  for (std::size_t k = 0; k < m.boundary.size(); ++k) {
    CHECK(m.boundary[k].to == m.boundary[(k + 1) % m.boundary.size()].from);
  }
  // Euler characteristic of a disk.
  CHECK(m.node_count() - static_cast<int>(count.size()) + static_cast<int>(m.triangles.size()) == 1);
}

}  // namespace

TEST_CASE("disk mesh") {
  const AngleGrid g(256);
  const TriangleMesh m = mesh_body(SupportFunction::constant(g, 1.0), 0.05);
  check_conforming(m);
  CHECK(m.min_angle_deg() >= kMinMeshAngleDeg);
  CHECK(m.max_edge() <= 0.05 * 1.6);
  CHECK(m.smooth_boundary);
  // Area of the inscribed boundary polygon.
  CHECK(m.area() == doctest::Approx(0.5 * 256 * std::sin(2 * pi / 256)).epsilon(1e-9));
  REQUIRE(m.grid_node.size() == 256);
  for (int i = 0; i < 256; i += 32) {
    const Vec2 p = m.nodes[static_cast<std::size_t>(m.grid_node[static_cast<std::size_t>(i)])];
    CHECK((p - unit_normal(g.theta(i))).norm() < 1e-12);
  }
}

TEST_CASE("polygon mesh keeps exact vertices and facets") {
  const AngleGrid g(256);
  const Body hex = make_fixture("hexagon", g);
  const TriangleMesh m = mesh_body(hex, 0.05);
  check_conforming(m);
  CHECK(m.area() == doctest::Approx(hex.area()).epsilon(1e-12));
  CHECK(m.boundary_length() == doctest::Approx(hex.polygon->perimeter()).epsilon(1e-12));
  for (const auto& e : m.boundary) {
    REQUIRE(e.facet >= 0);
    CHECK(e.normal_angle == doctest::Approx(hex.polygon->edge_normal_angle(e.facet)).epsilon(1e-9));
  }
  CHECK(m.min_angle_deg() >= kMinMeshAngleDeg);
}

TEST_CASE("property: random bodies mesh with bounded quality") {
  gen::Rng rng(9);
  const AngleGrid g(128);
  for (int trial = 0; trial < 4; ++trial) {
    const TriangleMesh m = mesh_body(gen::smooth_body(rng, g), 0.06);
    check_conforming(m);
    CHECK(m.min_angle_deg() >= kMinMeshAngleDeg);
    const TriangleMesh p = mesh_polygon(gen::polygon(rng, rng.integer(3, 9)), 0.08);
    check_conforming(p);
    CHECK(p.min_angle_deg() >= kMinMeshAngleDeg);
  }
}

TEST_CASE("mesh failures") {
  const AngleGrid g(64);
  bool threw = false;
  try {
    mesh_body(SupportFunction::constant(g, 1.0), 0.5);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::MeshFailure;
  }
  CHECK(threw);
}

TEST_CASE("meshing is deterministic") {
  const AngleGrid g(128);
  const auto h = ellipse_support(g, 1.5, 1.0);
  const TriangleMesh a = mesh_body(h, 0.05);
  const TriangleMesh b = mesh_body(h, 0.05);
  CHECK(a.nodes == b.nodes);
  CHECK(a.triangles == b.triangles);
}
