#include "worn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "worn/error.hpp"
#include "worn/fourier.hpp"
#include "worn/kernels.hpp"

namespace worn {

// ---------------------------------------------------------------------------
// SupportFunction

SupportFunction::SupportFunction(AngleGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size()) {
    throw Error(ErrorCode::InvalidInput, "support function has " + std::to_string(values_.size()) +
                                             " samples for a grid of " + std::to_string(grid_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::InvalidInput, "support value " + std::to_string(i) + " is not finite");
    }
  }
}

SupportFunction SupportFunction::constant(const AngleGrid& grid, double radius) {
  return {grid, std::vector<double>(static_cast<std::size_t>(grid.size()), radius)};
}

double SupportFunction::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}
double SupportFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double SupportFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

std::vector<double> SupportFunction::first_derivative() const { return fourier::derivative(values_, 1); }
std::vector<double> SupportFunction::second_derivative() const { return fourier::derivative(values_, 2); }

bool SupportFunction::is_positive() const { return min() > 0.0; }

bool SupportFunction::is_convex() const {
  const auto r = curvature_radius(*this);
  const double eps = kConvexityEps * std::abs(mean());
  return std::all_of(r.begin(), r.end(), [eps](double v) { return v > eps; });
}

void SupportFunction::require_positive() const {
  for (int i = 0; i < size(); ++i) {
    if (!(values_[static_cast<std::size_t>(i)] > 0.0)) {
      throw Error(ErrorCode::OriginOutside,
                  "h(theta_" + std::to_string(i) + ") = " + std::to_string(values_[static_cast<std::size_t>(i)]));
    }
  }
}

void SupportFunction::require_convex() const {
  const auto r = curvature_radius(*this);
  const double eps = kConvexityEps * std::abs(mean());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > eps)) {
      throw Error(ErrorCode::NonConvex, "h + h'' = " + std::to_string(r[i]) + " at theta_" + std::to_string(i));
    }
  }
}

// ---------------------------------------------------------------------------
// ConvexPolygon

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  const int n = size();
  if (n < 3) throw Error(ErrorCode::InvalidInput, "polygon needs at least 3 vertices");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(vertices_[static_cast<std::size_t>(i)].x()) ||
        !std::isfinite(vertices_[static_cast<std::size_t>(i)].y())) {
      throw Error(ErrorCode::InvalidInput, "vertex " + std::to_string(i) + " is not finite");
    }
  }
  for (int i = 0; i < n; ++i) {
    const Vec2 e0 = vertex(i) - vertex(i - 1);
    const Vec2 e1 = vertex(i + 1) - vertex(i);
    if (!(cross(e0, e1) > 0.0)) {
      throw Error(ErrorCode::NonConvex, "vertex " + std::to_string(i) + " is not a strictly convex ccw turn");
    }
  }
  // Consecutive left turns can still wind more than once.
  double turning = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2 e0 = vertex(i) - vertex(i - 1);
    const Vec2 e1 = vertex(i + 1) - vertex(i);
    turning += std::atan2(cross(e0, e1), e0.dot(e1));
  }
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) {
    throw Error(ErrorCode::NonConvex, "vertex sequence winds more than once");
  }
}

double ConvexPolygon::area() const {
  double a = 0.0;
  for (int i = 0; i < size(); ++i) a += cross(vertex(i), vertex(i + 1));
  return 0.5 * a;
}

double ConvexPolygon::perimeter() const {
  double p = 0.0;
  for (int i = 0; i < size(); ++i) p += edge_length(i);
  return p;
}

Vec2 ConvexPolygon::centroid() const {
  Vec2 c = Vec2::Zero();
  for (int i = 0; i < size(); ++i) c += cross(vertex(i), vertex(i + 1)) * (vertex(i) + vertex(i + 1));
  return c / (6.0 * area());
}

double ConvexPolygon::support(double theta) const {
  const Vec2 xi = unit_normal(theta);
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : vertices_) best = std::max(best, v.dot(xi));
  return best;
}

bool ConvexPolygon::contains_origin_strictly() const {
  for (int i = 0; i < size(); ++i) {
    if (!(edge_support(i) > 0.0)) return false;
  }
  return true;
}

double ConvexPolygon::edge_normal_angle(int i) const {
  const Vec2 e = vertex(i + 1) - vertex(i);
  double a = std::atan2(-e.x(), e.y());
  if (a < 0) a += 2.0 * std::numbers::pi;
  return a + 0.0;  // no negative zero
}

double ConvexPolygon::edge_length(int i) const { return (vertex(i + 1) - vertex(i)).norm(); }

double ConvexPolygon::edge_support(int i) const { return vertex(i).dot(unit_normal(edge_normal_angle(i))); }

ConvexPolygon ConvexPolygon::translated(const Vec2& shift) const {
  auto v = vertices_;
  for (auto& p : v) p += shift;
  return ConvexPolygon(std::move(v));
}

ConvexPolygon ConvexPolygon::scaled(double factor) const {
  auto v = vertices_;
  for (auto& p : v) p *= factor;
  return ConvexPolygon(std::move(v));
}

// ---------------------------------------------------------------------------
// Operations

SupportFunction support_from_polygon(const ConvexPolygon& polygon, const AngleGrid& grid) {
  std::vector<double> h(static_cast<std::size_t>(grid.size()));
  kernels::polygon_support(polygon.vertices(), grid, h);
  SupportFunction out(grid, std::move(h));
  out.require_positive();
  return out;
}

Vec2 boundary_point(const SupportFunction& h, double theta) {
  h.require_convex();
  const double value = fourier::evaluate(h.values(), theta);
  const double slope = fourier::evaluate_derivative(h.values(), theta);
  return value * unit_normal(theta) + slope * unit_tangent(theta);
}

std::vector<Vec2> boundary_points(const SupportFunction& h) {
  h.require_convex();
  const auto dh = h.first_derivative();
  std::vector<Vec2> pts(static_cast<std::size_t>(h.size()));
  for (int i = 0; i < h.size(); ++i) {
    const double t = h.grid().theta(i);
    pts[static_cast<std::size_t>(i)] = h[i] * unit_normal(t) + dh[static_cast<std::size_t>(i)] * unit_tangent(t);
  }
  return pts;
}

ConvexPolygon halfplane_polygon(const SupportFunction& h) {
  h.require_positive();
  const AngleGrid& grid = h.grid();
  const int n = grid.size();
  const double scale = h.max();

  // Non-redundant constraints are the vertices of the convex hull of the dual
  // points xi_i / h_i. They are already in angular order around the origin,
  // so a single cyclic Graham pass starting at the farthest point suffices.
  std::vector<Vec2> dual(static_cast<std::size_t>(n));
  int start = 0;
  for (int i = 0; i < n; ++i) {
    dual[static_cast<std::size_t>(i)] = unit_normal(grid.theta(i)) / h[i];
    if (dual[static_cast<std::size_t>(i)].norm() > dual[static_cast<std::size_t>(start)].norm()) start = i;
  }
  // Samples attained at a shared vertex give exactly collinear dual points.
  const double collinear_tol = 1e-12 / (h.min() * h.min());
  std::vector<int> hull;
  for (int step = 0; step <= n; ++step) {
    const int i = grid.wrap(start + step);
    const Vec2& p = dual[static_cast<std::size_t>(i)];
    while (hull.size() >= 2) {
      const Vec2& a = dual[static_cast<std::size_t>(hull[hull.size() - 2])];
      const Vec2& b = dual[static_cast<std::size_t>(hull.back())];
      if (cross(b - a, p - b) > collinear_tol) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  hull.pop_back();  // the closing copy of start
  if (hull.size() < 3) throw Error(ErrorCode::DegenerateIntersection, "fewer than 3 active half-planes");

  std::vector<Vec2> vertices;
  vertices.reserve(hull.size());
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const int a = hull[k];
    const int b = hull[(k + 1) % hull.size()];
    const Vec2 na = unit_normal(grid.theta(a));
    const Vec2 nb = unit_normal(grid.theta(b));
    const double det = cross(na, nb);
    if (!(det > 0.0)) throw Error(ErrorCode::DegenerateIntersection, "active normals span more than pi");
    const Vec2 v((h[a] * nb.y() - h[b] * na.y()) / det, (na.x() * h[b] - nb.x() * h[a]) / det);
    if (vertices.empty() || (v - vertices.back()).norm() > 1e-12 * scale) vertices.push_back(v);
  }
  if (vertices.size() > 1 && (vertices.front() - vertices.back()).norm() <= 1e-12 * scale) vertices.pop_back();

  try {
    ConvexPolygon poly(std::move(vertices));
    if (!(poly.area() > 1e-14 * scale * scale)) {
      throw Error(ErrorCode::DegenerateIntersection, "half-plane intersection has no interior");
    }
    return poly;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateIntersection) throw;
    throw Error(ErrorCode::DegenerateIntersection, e.what());
  }
}

ConvexPolygon polygon_from_support(const SupportFunction& h) {
  h.require_positive();
  if (h.is_convex()) return ConvexPolygon(boundary_points(h));

  ConvexPolygon poly = halfplane_polygon(h);
  std::vector<double> attained(static_cast<std::size_t>(h.size()));
  kernels::polygon_support(poly.vertices(), h.grid(), attained);
  const double tol = 1e-10 * h.max();
  for (int i = 0; i < h.size(); ++i) {
    if (attained[static_cast<std::size_t>(i)] < h[i] - tol) {
      throw Error(ErrorCode::NonConvex, "sample " + std::to_string(i) + " is not a support value");
    }
  }
  return poly;
}

SupportFunction minkowski_sum(const SupportFunction& a, const SupportFunction& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> v(static_cast<std::size_t>(a.size()));
  for (int i = 0; i < a.size(); ++i) v[static_cast<std::size_t>(i)] = a[i] + b[i];
  return {a.grid(), std::move(v)};
}

SupportFunction scaled(const SupportFunction& h, double factor) {
  std::vector<double> v(h.values().begin(), h.values().end());
  for (double& x : v) x *= factor;
  return {h.grid(), std::move(v)};
}

SupportFunction translated(const SupportFunction& h, const Vec2& shift) {
  std::vector<double> v(h.values().begin(), h.values().end());
  for (int i = 0; i < h.size(); ++i) v[static_cast<std::size_t>(i)] += shift.dot(unit_normal(h.grid().theta(i)));
  return {h.grid(), std::move(v)};
}

SupportFunction log_minkowski_combination(const SupportFunction& a, const SupportFunction& b, double lambda) {
  require_same_grid(a.grid(), b.grid());
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorCode::InvalidInput, "lambda must lie in [0, 1]");
  a.require_positive();
  b.require_positive();
  std::vector<double> bound(static_cast<std::size_t>(a.size()));
  for (int i = 0; i < a.size(); ++i) {
    bound[static_cast<std::size_t>(i)] = std::pow(a[i], 1.0 - lambda) * std::pow(b[i], lambda);
  }
  const ConvexPolygon body = halfplane_polygon(SupportFunction(a.grid(), bound));
  std::vector<double> h(static_cast<std::size_t>(a.size()));
  kernels::polygon_support(body.vertices(), a.grid(), h);
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::min(h[i], bound[i]);
  return {a.grid(), std::move(h)};
}

std::vector<double> curvature_radius(const SupportFunction& h) {
  auto r = h.second_derivative();
  for (int i = 0; i < h.size(); ++i) r[static_cast<std::size_t>(i)] += h[i];
  return r;
}

double volume(const SupportFunction& h) {
  h.require_convex();
  const auto r = curvature_radius(h);
  double sum = 0.0;
  for (int i = 0; i < h.size(); ++i) sum += h[i] * r[static_cast<std::size_t>(i)];
  return 0.5 * sum * h.grid().spacing();
}

double perimeter(const SupportFunction& h) {
  // Cauchy: the integral of h'' vanishes, so the length is the mean width times pi.
  double sum = 0.0;
  for (int i = 0; i < h.size(); ++i) sum += h[i];
  return sum * h.grid().spacing();
}

double polar_volume(const SupportFunction& h) {
  h.require_positive();
  double sum = 0.0;
  for (int i = 0; i < h.size(); ++i) sum += 1.0 / (h[i] * h[i]);
  return 0.5 * sum * h.grid().spacing();
}

double hausdorff_distance(const SupportFunction& a, const SupportFunction& b) {
  require_same_grid(a.grid(), b.grid());
  double d = 0.0;
  for (int i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double min_width(const SupportFunction& h) {
  double w = std::numeric_limits<double>::infinity();
  for (int i = 0; i < h.size() / 2; ++i) w = std::min(w, h[i] + h[h.grid().antipode(i)]);
  return w;
}

double diameter(const SupportFunction& h) {
  double w = 0.0;
  for (int i = 0; i < h.size() / 2; ++i) w = std::max(w, h[i] + h[h.grid().antipode(i)]);
  return w;
}

Vec2 centroid(const SupportFunction& h) {
  h.require_convex();
  const auto r = curvature_radius(h);
  const auto dh = h.first_derivative();
  Vec2 moment = Vec2::Zero();
  double area = 0.0;
  for (int i = 0; i < h.size(); ++i) {
    const double t = h.grid().theta(i);
    const auto k = static_cast<std::size_t>(i);
    const Vec2 x = h[i] * unit_normal(t) + dh[k] * unit_tangent(t);
    // int_K x dx = (1/3) int_{dK} x (x . nu) ds, ds = r dtheta
    moment += x * (h[i] * r[k]);
    area += h[i] * r[k];
  }
  area *= 0.5 * h.grid().spacing();
  return moment * (h.grid().spacing() / 3.0) / area;
}

double symmetry_defect(const SupportFunction& h) {
  double d = 0.0;
  for (int i = 0; i < h.size() / 2; ++i) d = std::max(d, std::abs(h[i] - h[h.grid().antipode(i)]));
  return d;
}

bool is_centrally_symmetric(const SupportFunction& h, double rel_tol) {
  return symmetry_defect(h) <= rel_tol * std::abs(h.mean());
}

std::pair<BodySummary, SupportFunction> centroid_and_center(const SupportFunction& h) {
  BodySummary s;
  s.volume = volume(h);
  s.centroid = centroid(h);
  SupportFunction centered = translated(h, -s.centroid);
  for (int i = 0; i < centered.size(); ++i) {
    if (!(centered[i] > 0.0)) {
      throw Error(ErrorCode::OriginOutside, "centroid translation leaves h(theta_" + std::to_string(i) + ") <= 0");
    }
  }
  s.min_width = min_width(centered);
  s.diameter = diameter(centered);
  const double mean = centered.mean();
  for (int i = 0; i < centered.size(); ++i) {
    s.hausdorff_to_best_disk = std::max(s.hausdorff_to_best_disk, std::abs(centered[i] - mean));
  }
  s.is_centrally_symmetric = is_centrally_symmetric(centered);
  return {s, std::move(centered)};
}

}  // namespace worn
