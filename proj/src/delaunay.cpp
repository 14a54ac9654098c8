#include "delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "worn/error.hpp"

namespace worn::detail {

DelaunayRefiner::DelaunayRefiner(const Vec2& lo, const Vec2& hi) {
  const Vec2 c = 0.5 * (lo + hi);
  const double span = std::max((hi - lo).maxCoeff(), 1e-12);
  const double big = 64.0 * span;
  pts_ = {c + Vec2(-big, -big), c + Vec2(big, -big), c + Vec2(0.0, big)};
  kind_.assign(3, VertexKind::Super);
  vertex_tri_.assign(3, 0);
  tris_.push_back(Tri{{0, 1, 2}, {-1, -1, -1}, true});
}

double DelaunayRefiner::orient(int a, int b, const Vec2& p) const {
  const Vec2& pa = pts_[static_cast<std::size_t>(a)];
  const Vec2& pb = pts_[static_cast<std::size_t>(b)];
  return (pb.x() - pa.x()) * (p.y() - pa.y()) - (pb.y() - pa.y()) * (p.x() - pa.x());
}

// Points within roundoff of the line count as on it; otherwise a point on an
// existing edge makes the walk bounce between its two triangles.
bool DelaunayRefiner::outside(int a, int b, const Vec2& p) const {
  const Vec2& pa = pts_[static_cast<std::size_t>(a)];
  const double scale = (pts_[static_cast<std::size_t>(b)] - pa).norm() * (p - pa).norm();
  return orient(a, b, p) < -1e-12 * scale;
}

bool DelaunayRefiner::in_circumcircle(const Tri& t, const Vec2& p) const {
  const Vec2 a = pts_[static_cast<std::size_t>(t.v[0])] - p;
  const Vec2 b = pts_[static_cast<std::size_t>(t.v[1])] - p;
  const Vec2 c = pts_[static_cast<std::size_t>(t.v[2])] - p;
  const double det = a.squaredNorm() * (b.x() * c.y() - c.x() * b.y()) -
                     b.squaredNorm() * (a.x() * c.y() - c.x() * a.y()) +
                     c.squaredNorm() * (a.x() * b.y() - b.x() * a.y());
  return det > 0.0;
}

Vec2 DelaunayRefiner::circumcenter(const Tri& t) const {
  const Vec2& a = pts_[static_cast<std::size_t>(t.v[0])];
  const Vec2 b = pts_[static_cast<std::size_t>(t.v[1])] - a;
  const Vec2 c = pts_[static_cast<std::size_t>(t.v[2])] - a;
  const double d = 2.0 * (b.x() * c.y() - b.y() * c.x());
  const double bb = b.squaredNorm();
  const double cc = c.squaredNorm();
  return a + Vec2((c.y() * bb - b.y() * cc) / d, (b.x() * cc - c.x() * bb) / d);
}

int DelaunayRefiner::locate(const Vec2& p, int start, bool stop_at_constraints, std::uint64_t* crossed) const {
  int t = start;
  if (t < 0 || !tris_[static_cast<std::size_t>(t)].alive) {
    t = static_cast<int>(tris_.size()) - 1;
    while (!tris_[static_cast<std::size_t>(t)].alive) --t;
  }
  const std::size_t limit = 4 * tris_.size() + 16;
  for (std::size_t step = 0; step < limit; ++step) {
    const Tri& tri = tris_[static_cast<std::size_t>(t)];
    bool moved = false;
    for (int j = 0; j < 3; ++j) {
      const int i = static_cast<int>((j + step) % 3);
      const int a = tri.v[static_cast<std::size_t>((i + 1) % 3)];
      const int b = tri.v[static_cast<std::size_t>((i + 2) % 3)];
      if (outside(a, b, p)) {
        if (stop_at_constraints && segments_.count(key(a, b))) {
          *crossed = key(a, b);
          return -1;
        }
        const int next = tri.nb[static_cast<std::size_t>(i)];
        if (next < 0) throw Error(ErrorCode::MeshFailure, "point outside the enclosing triangle");
        t = next;
        moved = true;
        break;
      }
    }
    if (!moved) return t;
  }
  // The visibility walk can cycle in a constrained triangulation. Fall back
  // to the straight line from the start triangle and an exhaustive scan.
  if (stop_at_constraints) {
    const Tri& s = tris_[static_cast<std::size_t>(start < 0 ? t : start)];
    const Vec2 q = (pts_[static_cast<std::size_t>(s.v[0])] + pts_[static_cast<std::size_t>(s.v[1])] +
                    pts_[static_cast<std::size_t>(s.v[2])]) / 3.0;
    const Vec2 d = p - q;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [k, seg] : segments_) {
      const Vec2& a = pts_[static_cast<std::size_t>(seg.a)];
      const Vec2 e = pts_[static_cast<std::size_t>(seg.b)] - a;
      const double den = d.x() * e.y() - d.y() * e.x();
      if (den == 0.0) continue;
      const Vec2 w = a - q;
      const double u = (w.x() * e.y() - w.y() * e.x()) / den;  // along q -> p
      const double v = (w.x() * d.y() - w.y() * d.x()) / den;  // along the segment
      if (u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0 && u < best) {
        best = u;
        *crossed = k;
      }
    }
    if (best < std::numeric_limits<double>::infinity()) return -1;
  }
  for (int c = static_cast<int>(tris_.size()) - 1; c >= 0; --c) {
    const Tri& tri = tris_[static_cast<std::size_t>(c)];
    if (tri.alive && !outside(tri.v[1], tri.v[2], p) && !outside(tri.v[2], tri.v[0], p) && !outside(tri.v[0], tri.v[1], p)) {
      return c;
    }
  }
  throw Error(ErrorCode::MeshFailure, "point location failed");
}

std::vector<int> DelaunayRefiner::cavity(int seed, const Vec2& p) const {
  std::vector<int> cav{seed};
  std::vector<int> stack{seed};
  std::unordered_set<int> seen{seed};
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    const Tri& tri = tris_[static_cast<std::size_t>(t)];
    for (int i = 0; i < 3; ++i) {
      const int n = tri.nb[static_cast<std::size_t>(i)];
      if (n < 0 || seen.count(n)) continue;
      const int a = tri.v[static_cast<std::size_t>((i + 1) % 3)];
      const int b = tri.v[static_cast<std::size_t>((i + 2) % 3)];
      if (segments_.count(key(a, b))) continue;
      if (in_circumcircle(tris_[static_cast<std::size_t>(n)], p)) {
        seen.insert(n);
        cav.push_back(n);
        stack.push_back(n);
      }
    }
  }
  return cav;
}

int DelaunayRefiner::commit(const Vec2& p, VertexKind kind, const std::vector<int>& cav) {
  const int pv = static_cast<int>(pts_.size());
  pts_.push_back(p);
  kind_.push_back(kind);
  vertex_tri_.push_back(-1);

  std::unordered_set<int> in_cav(cav.begin(), cav.end());
  struct Edge {
    int a, b, outside;
  };
  std::vector<Edge> rim;
  for (int t : cav) {
    const Tri& tri = tris_[static_cast<std::size_t>(t)];
    for (int i = 0; i < 3; ++i) {
      const int n = tri.nb[static_cast<std::size_t>(i)];
      if (n >= 0 && in_cav.count(n)) continue;
      rim.push_back({tri.v[static_cast<std::size_t>((i + 1) % 3)], tri.v[static_cast<std::size_t>((i + 2) % 3)], n});
    }
  }
  for (const Edge& e : rim) {
    if (orient(e.a, e.b, p) <= 0.0) {
      pts_.pop_back();
      kind_.pop_back();
      vertex_tri_.pop_back();
      throw Error(ErrorCode::MeshFailure, "cavity is not star-shaped (point on a constrained edge?)");
    }
  }
  for (int t : cav) tris_[static_cast<std::size_t>(t)].alive = false;

  std::unordered_map<int, int> starts_at;  // rim vertex a -> new triangle (a, b, p)
  std::unordered_map<int, int> ends_at;    // rim vertex b -> new triangle (a, b, p)
  const int first = static_cast<int>(tris_.size());
  for (const Edge& e : rim) {
    const int id = static_cast<int>(tris_.size());
    tris_.push_back(Tri{{e.a, e.b, pv}, {-1, -1, e.outside}, true});
    starts_at[e.a] = id;
    ends_at[e.b] = id;
    if (e.outside >= 0) {
      Tri& o = tris_[static_cast<std::size_t>(e.outside)];
      for (int i = 0; i < 3; ++i) {
        const int oa = o.v[static_cast<std::size_t>((i + 1) % 3)];
        const int ob = o.v[static_cast<std::size_t>((i + 2) % 3)];
        if (oa == e.b && ob == e.a) o.nb[static_cast<std::size_t>(i)] = id;
      }
    }
  }
  for (int id = first; id < static_cast<int>(tris_.size()); ++id) {
    Tri& t = tris_[static_cast<std::size_t>(id)];
    t.nb[0] = starts_at.at(t.v[1]);  // edge (b, p)
    t.nb[1] = ends_at.at(t.v[0]);    // edge (p, a)
    for (int v : t.v) vertex_tri_[static_cast<std::size_t>(v)] = id;
  }
  last_ = first;
  for (int id = first; id < static_cast<int>(tris_.size()); ++id) queue_if_bad(id);

  // The new vertex may encroach constrained edges on the rim.
  for (const Edge& e : rim) {
    if (segments_.count(key(e.a, e.b))) seg_queue_.push_back(key(e.a, e.b));
  }
  return pv;
}

int DelaunayRefiner::insert(const Vec2& p, VertexKind kind, int hint) {
  const int t = locate(p, hint < 0 ? last_ : hint, false, nullptr);
  return commit(p, kind, cavity(t, p));
}

int DelaunayRefiner::add_vertex(const Vec2& p, VertexKind kind) { return insert(p, kind, last_); }

int DelaunayRefiner::triangle_with_edge(int a, int b) const {
  int t = vertex_tri_[static_cast<std::size_t>(a)];
  if (t < 0 || !tris_[static_cast<std::size_t>(t)].alive) return -1;
  // Rotate around a; a full turn visits every incident triangle.
  for (int guard = 0; guard < 4096; ++guard) {
    const Tri& tri = tris_[static_cast<std::size_t>(t)];
    int i = 0;
    while (tri.v[static_cast<std::size_t>(i)] != a) ++i;
    if (tri.v[static_cast<std::size_t>((i + 1) % 3)] == b) return t;
    // Cross edge (a, v[i+1]) which is opposite v[i+2].
    const int next = tri.nb[static_cast<std::size_t>((i + 2) % 3)];
    if (next < 0 || next == vertex_tri_[static_cast<std::size_t>(a)]) return -1;
    t = next;
  }
  return -1;
}

bool DelaunayRefiner::is_encroached(int a, int b) const {
  const Vec2& pa = pts_[static_cast<std::size_t>(a)];
  const Vec2& pb = pts_[static_cast<std::size_t>(b)];
  for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    const int t = triangle_with_edge(x, y);
    if (t < 0) continue;
    const Tri& tri = tris_[static_cast<std::size_t>(t)];
    for (int v : tri.v) {
      if (v == a || v == b || is_super(v)) continue;
      const Vec2& q = pts_[static_cast<std::size_t>(v)];
      if ((pa - q).dot(pb - q) < 0.0) return true;
    }
  }
  return false;
}

void DelaunayRefiner::split_segment(std::uint64_t k) {
  const auto it = segments_.find(k);
  if (it == segments_.end()) return;
  const Segment s = it->second;
  segments_.erase(it);
  const VertexKind kind = s.outer ? VertexKind::Outer : VertexKind::Inner;
  const Vec2 mid = 0.5 * (pts_[static_cast<std::size_t>(s.a)] + pts_[static_cast<std::size_t>(s.b)]);
  int hint = triangle_with_edge(s.a, s.b);
  if (hint < 0) hint = triangle_with_edge(s.b, s.a);
  const int m = insert(mid, kind, hint);
  segments_[key(s.a, m)] = Segment{s.a, m, s.outer};
  segments_[key(m, s.b)] = Segment{m, s.b, s.outer};
  seg_queue_.push_back(key(s.a, m));
  seg_queue_.push_back(key(m, s.b));
}

void DelaunayRefiner::add_segment(int a, int b) {
  // a, b are internal indices (as returned by add_vertex).
  const bool outer = kind_[static_cast<std::size_t>(a)] == VertexKind::Outer;
  // Conforming recovery: split at midpoints until the pieces are edges.
  std::vector<std::pair<int, int>> todo{{a, b}};
  while (!todo.empty()) {
    auto [x, y] = todo.back();
    todo.pop_back();
    if (triangle_with_edge(x, y) >= 0 || triangle_with_edge(y, x) >= 0) {
      segments_[key(x, y)] = Segment{x, y, outer};
      seg_queue_.push_back(key(x, y));
      continue;
    }
    if (pts_.size() > 4'000'000) throw Error(ErrorCode::MeshFailure, "segment recovery did not terminate");
    const Vec2 mid = 0.5 * (pts_[static_cast<std::size_t>(x)] + pts_[static_cast<std::size_t>(y)]);
    const int m = insert(mid, outer ? VertexKind::Outer : VertexKind::Inner, vertex_tri_[static_cast<std::size_t>(x)]);
    todo.push_back({m, y});
    todo.push_back({x, m});
  }
}

bool DelaunayRefiner::refinable(int t) const {
  const Tri& tri = tris_[static_cast<std::size_t>(t)];
  for (int v : tri.v) {
    if (is_super(v)) return false;
    if (opt_.freeze_outer_layer && kind_[static_cast<std::size_t>(v)] == VertexKind::Outer) return false;
  }
  if (opt_.inside) {
    const Vec2 g = (pts_[static_cast<std::size_t>(tri.v[0])] + pts_[static_cast<std::size_t>(tri.v[1])] +
                    pts_[static_cast<std::size_t>(tri.v[2])]) / 3.0;
    if (!opt_.inside(g)) return false;
  }
  return true;
}

bool DelaunayRefiner::is_bad(int t) const {
  const Tri& tri = tris_[static_cast<std::size_t>(t)];
  if (!tri.alive || !refinable(t)) return false;
  const Vec2 c = circumcenter(tri);
  const double r = (c - pts_[static_cast<std::size_t>(tri.v[0])]).norm();
  if (opt_.max_circumradius > 0.0 && r > opt_.max_circumradius) return true;
  double shortest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    shortest = std::min(shortest, (pts_[static_cast<std::size_t>(tri.v[static_cast<std::size_t>(i)])] -
                                   pts_[static_cast<std::size_t>(tri.v[static_cast<std::size_t>((i + 1) % 3)])])
                                      .norm());
  }
  return r > opt_.max_radius_edge * shortest * (1.0 + 1e-12);
}

void DelaunayRefiner::queue_if_bad(int t) {
  if (refining_ && is_bad(t)) bad_queue_.push_back(t);
}

void DelaunayRefiner::refine(const Options& options) {
  opt_ = options;
  refining_ = true;
  for (int t = 0; t < static_cast<int>(tris_.size()); ++t) queue_if_bad(t);

  while (true) {
    while (!seg_queue_.empty()) {
      const std::uint64_t k = seg_queue_.front();
      seg_queue_.pop_front();
      const auto it = segments_.find(k);
      if (it != segments_.end() && is_encroached(it->second.a, it->second.b)) split_segment(k);
    }
    if (pts_.size() > opt_.max_vertices) {
      throw Error(ErrorCode::MeshFailure, "refinement exceeded " + std::to_string(opt_.max_vertices) + " vertices");
    }
    if (bad_queue_.empty()) break;
    const int t = bad_queue_.front();
    bad_queue_.pop_front();
    if (!is_bad(t)) continue;

    const Vec2 c = circumcenter(tris_[static_cast<std::size_t>(t)]);
    std::uint64_t crossed = 0;
    const int host = locate(c, t, true, &crossed);
    if (host < 0) {
      split_segment(crossed);
      bad_queue_.push_back(t);
      continue;
    }
    const std::vector<int> cav = cavity(host, c);
    std::vector<std::uint64_t> encroached;
    for (int ct : cav) {
      const Tri& tri = tris_[static_cast<std::size_t>(ct)];
      for (int i = 0; i < 3; ++i) {
        const int a = tri.v[static_cast<std::size_t>((i + 1) % 3)];
        const int b = tri.v[static_cast<std::size_t>((i + 2) % 3)];
        if (!segments_.count(key(a, b))) continue;
        const Vec2& pa = pts_[static_cast<std::size_t>(a)];
        const Vec2& pb = pts_[static_cast<std::size_t>(b)];
        if ((pa - c).dot(pb - c) < 0.0) encroached.push_back(key(a, b));
      }
    }
    if (!encroached.empty()) {
      for (std::uint64_t k : encroached) split_segment(k);
      bad_queue_.push_back(t);
      continue;
    }
    commit(c, VertexKind::Interior, cav);
  }
  refining_ = false;
}

std::vector<Vec2> DelaunayRefiner::vertices() const { return {pts_.begin() + 3, pts_.end()}; }

std::vector<DelaunayRefiner::VertexKind> DelaunayRefiner::kinds() const { return {kind_.begin() + 3, kind_.end()}; }

std::vector<std::array<int, 3>> DelaunayRefiner::triangles() const {
  // Flood the exterior from every triangle touching a super vertex; the
  // outer segments stop the flood.
  std::vector<char> outside(tris_.size(), 0);
  std::vector<int> stack;
  for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
    const Tri& tri = tris_[static_cast<std::size_t>(t)];
    if (tri.alive && (is_super(tri.v[0]) || is_super(tri.v[1]) || is_super(tri.v[2]))) {
      outside[static_cast<std::size_t>(t)] = 1;
      stack.push_back(t);
    }
  }
  while (!stack.empty()) {
    const Tri& tri = tris_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    for (int i = 0; i < 3; ++i) {
      const int n = tri.nb[static_cast<std::size_t>(i)];
      if (n < 0 || outside[static_cast<std::size_t>(n)]) continue;
      const auto it = segments_.find(key(tri.v[static_cast<std::size_t>((i + 1) % 3)], tri.v[static_cast<std::size_t>((i + 2) % 3)]));
      if (it != segments_.end() && it->second.outer) continue;
      outside[static_cast<std::size_t>(n)] = 1;
      stack.push_back(n);
    }
  }
  std::vector<std::array<int, 3>> out;
  for (std::size_t t = 0; t < tris_.size(); ++t) {
    if (!tris_[t].alive || outside[t]) continue;
    out.push_back({tris_[t].v[0] - 3, tris_[t].v[1] - 3, tris_[t].v[2] - 3});
  }
  return out;
}

std::unordered_map<int, int> DelaunayRefiner::outer_successor() const {
  std::unordered_map<int, int> next;
  for (const auto& [k, s] : segments_) {
    if (s.outer) next[s.a - 3] = s.b - 3;
  }
  return next;
}

}  // namespace worn::detail
