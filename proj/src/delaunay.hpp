#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "worn/geometry.hpp"

namespace worn::detail {

// Bowyer-Watson triangulation with Ruppert-style refinement. Constrained
// segments are kept as Delaunay edges by splitting them whenever they are
// encroached; a cavity never grows across a constrained segment.
class DelaunayRefiner {
 public:
  enum class VertexKind : std::uint8_t { Super, Outer, Inner, Interior };

  struct Options {
    double max_circumradius = 0.0;
    double max_radius_edge = 1.4142135623730951;  // sqrt(2): min angle ~20.7 deg
    std::size_t max_vertices = 2'000'000;
    // When true, triangles touching an Outer vertex are never refined (they
    // form a pre-built boundary layer).
    bool freeze_outer_layer = false;
    // Triangles whose centroid fails this test are left alone (exterior
    // slivers between nearly collinear boundary vertices).
    std::function<bool(const Vec2&)> inside;
  };

  DelaunayRefiner(const Vec2& lo, const Vec2& hi);

  // Returns the internal vertex index (used by add_segment).
  int add_vertex(const Vec2& p, VertexKind kind);
  // Ordered segment a->b; the pair must be present in the triangulation or
  // become present after splitting. Outer segments are split at midpoints
  // and stay ordered.
  void add_segment(int a, int b);

  void refine(const Options& options);

  // Output with the three super vertices removed (indices shifted by 3).
  // Only triangles enclosed by the outer segments are returned.
  std::vector<Vec2> vertices() const;
  std::vector<VertexKind> kinds() const;
  std::vector<std::array<int, 3>> triangles() const;
  // Outer segments as an ordered successor map over output indices.
  std::unordered_map<int, int> outer_successor() const;

 private:
  struct Tri {
    std::array<int, 3> v{};
    std::array<int, 3> nb{-1, -1, -1};
    bool alive = true;
  };

  struct Segment {
    int a, b;
    bool outer;
  };

  static std::uint64_t key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  }

  bool is_super(int v) const { return v < 3; }
  double orient(int a, int b, const Vec2& p) const;
  bool outside(int a, int b, const Vec2& p) const;
  bool in_circumcircle(const Tri& t, const Vec2& p) const;
  Vec2 circumcenter(const Tri& t) const;

  // Walks toward p. Returns the containing triangle, or -1 and sets crossed
  // to a constrained edge (as a key) when stop_at_constraints is set.
  int locate(const Vec2& p, int start, bool stop_at_constraints, std::uint64_t* crossed) const;
  std::vector<int> cavity(int seed, const Vec2& p) const;
  int commit(const Vec2& p, VertexKind kind, const std::vector<int>& cav);
  int insert(const Vec2& p, VertexKind kind, int hint);

  int triangle_with_edge(int a, int b) const;  // alive triangle with directed edge a->b, or -1
  bool is_encroached(int a, int b) const;
  void split_segment(std::uint64_t k);
  bool is_bad(int t) const;
  bool refinable(int t) const;
  void queue_if_bad(int t);

  std::vector<Vec2> pts_;
  std::vector<VertexKind> kind_;
  std::vector<Tri> tris_;
  std::vector<int> vertex_tri_;
  int last_ = 0;
  bool refining_ = false;

  std::unordered_map<std::uint64_t, Segment> segments_;
  std::deque<std::uint64_t> seg_queue_;
  std::deque<int> bad_queue_;
  Options opt_;
};

}  // namespace worn::detail
