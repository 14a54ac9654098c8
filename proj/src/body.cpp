#include "worn/body.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

#include "worn/error.hpp"
#include "worn/fourier.hpp"

namespace worn {

double Body::area() const { return polygon ? polygon->area() : volume(support); }

double Body::support_at(double theta) const {
  if (polygon) return polygon->support(theta);
  const int i = support.grid().index_of(theta);
  if (i >= 0) return support[i];
  return fourier::evaluate(support.values(), theta);
}

double Body::diameter() const {
  if (!polygon) return worn::diameter(support);
  double d = 0.0;
  for (const Vec2& a : polygon->vertices()) {
    for (const Vec2& b : polygon->vertices()) d = std::max(d, (a - b).norm());
  }
  return d;
}

Body body_from_support(std::string name, SupportFunction h) {
  h.require_positive();
  return Body{std::move(name), std::move(h), std::nullopt};
}

Body body_from_polygon(std::string name, ConvexPolygon polygon, const AngleGrid& grid) {
  if (!polygon.contains_origin_strictly()) {
    throw Error(ErrorCode::OriginOutside, "polygon '" + name + "' does not contain the origin");
  }
  SupportFunction h = support_from_polygon(polygon, grid);
  return Body{std::move(name), std::move(h), std::move(polygon)};
}

SupportFunction ellipse_support(const AngleGrid& grid, double a, double b) {
  std::vector<double> h(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) {
    const double c = std::cos(grid.theta(i));
    const double s = std::sin(grid.theta(i));
    h[static_cast<std::size_t>(i)] = std::sqrt(a * a * c * c + b * b * s * s);
  }
  return {grid, std::move(h)};
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_number(std::string_view text, std::string_view spec) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidInput, "bad number '" + std::string(text) + "' in fixture '" + std::string(spec) + "'");
  }
  return value;
}

double arg_or(const std::vector<std::string_view>& parts, std::size_t i, double fallback, std::string_view spec) {
  return parts.size() > i ? parse_number(parts[i], spec) : fallback;
}

void require_positive_args(std::initializer_list<double> values, std::string_view spec) {
  for (double v : values) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidInput, "fixture '" + std::string(spec) + "' needs positive sizes");
  }
}

ConvexPolygon regular_polygon(int sides, double circumradius, double phase) {
  std::vector<Vec2> v;
  for (int k = 0; k < sides; ++k) {
    const double t = phase + 2.0 * std::numbers::pi * k / sides;
    v.emplace_back(circumradius * std::cos(t), circumradius * std::sin(t));
  }
  return ConvexPolygon(std::move(v));
}

ConvexPolygon centered_rectangle(double width, double height) {
  return ConvexPolygon({{-width / 2, -height / 2}, {width / 2, -height / 2}, {width / 2, height / 2}, {-width / 2, height / 2}});
}

SupportFunction fourier_support(const AngleGrid& grid, const std::vector<double>& coeffs) {
  std::vector<double> h(static_cast<std::size_t>(grid.size()), coeffs.empty() ? 1.0 : coeffs[0]);
  for (std::size_t j = 1; j < coeffs.size(); ++j) {
    const int k = static_cast<int>((j + 1) / 2);
    const bool is_cos = (j % 2 == 1);
    for (int i = 0; i < grid.size(); ++i) {
      const double t = k * grid.theta(i);
      h[static_cast<std::size_t>(i)] += coeffs[j] * (is_cos ? std::cos(t) : std::sin(t));
    }
  }
  return {grid, std::move(h)};
}

// Even modes 2 and 4 with random phases; the mode-4 content keeps the body
// visibly away from every ellipse. Rejection sampling keeps h + h'' >= 0.1.
SupportFunction random_support(const AngleGrid& grid, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double a2 = 0.10 + 0.04 * unit(rng);
    const double a4 = 0.045 + 0.01 * unit(rng);
    const double p2 = 2.0 * std::numbers::pi * unit(rng);
    const double p4 = 2.0 * std::numbers::pi * unit(rng);
    std::vector<double> h(static_cast<std::size_t>(grid.size()));
    double r_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.size(); ++i) {
      const double t = grid.theta(i);
      h[static_cast<std::size_t>(i)] = 1.0 + a2 * std::cos(2 * (t - p2)) + a4 * std::cos(4 * (t - p4));
      r_min = std::min(r_min, 1.0 - 3 * a2 * std::cos(2 * (t - p2)) - 15 * a4 * std::cos(4 * (t - p4)));
    }
    if (r_min >= 0.1) return {grid, std::move(h)};
  }
  throw Error(ErrorCode::InvalidInput, "random fixture: no convex sample found");
}

}  // namespace

Body make_fixture(std::string_view spec, const AngleGrid& grid) {
  const auto parts = split(spec, ':');
  const std::string_view kind = parts[0];
  const std::string name(spec);

  if (kind == "disk") {
    const double r = arg_or(parts, 1, 1.0, spec);
    require_positive_args({r}, spec);
    return body_from_support(name, SupportFunction::constant(grid, r));
  }
  if (kind == "ellipse") {
    if (parts.size() != 3) throw Error(ErrorCode::InvalidInput, "ellipse fixture is ellipse:a:b");
    const double a = parse_number(parts[1], spec);
    const double b = parse_number(parts[2], spec);
    require_positive_args({a, b}, spec);
    return body_from_support(name, ellipse_support(grid, a, b));
  }
  if (kind == "square") {
    const double side = arg_or(parts, 1, 1.0, spec);
    require_positive_args({side}, spec);
    return body_from_polygon(name, centered_rectangle(side, side), grid);
  }
  if (kind == "rect") {
    if (parts.size() != 2) throw Error(ErrorCode::InvalidInput, "rect fixture is rect:l");
    const double l = parse_number(parts[1], spec);
    require_positive_args({l}, spec);
    return body_from_polygon(name, centered_rectangle(l, 1.0), grid);
  }
  if (kind == "hexagon") {
    const double r = arg_or(parts, 1, 1.0, spec);
    require_positive_args({r}, spec);
    return body_from_polygon(name, regular_polygon(6, r, 0.0), grid);
  }
  if (kind == "smoothsquare") {
    const double t = arg_or(parts, 1, 0.02, spec);
    require_positive_args({t}, spec);
    const SupportFunction sq = support_from_polygon(centered_rectangle(1.0, 1.0), grid);
    return body_from_support(name, SupportFunction(grid, fourier::heat_smooth(sq.values(), t)));
  }
  if (kind == "fourier") {
    if (parts.size() != 2) throw Error(ErrorCode::InvalidInput, "fourier fixture is fourier:a0,a1,b1,...");
    std::vector<double> coeffs;
    for (auto c : split(parts[1], ',')) coeffs.push_back(parse_number(c, spec));
    SupportFunction h = fourier_support(grid, coeffs);
    h.require_positive();
    h.require_convex();
    return body_from_support(name, std::move(h));
  }
  if (kind == "random") {
    if (parts.size() != 2) throw Error(ErrorCode::InvalidInput, "random fixture is random:seed");
    const double seed = parse_number(parts[1], spec);
    if (seed < 0 || seed != std::floor(seed)) throw Error(ErrorCode::InvalidInput, "random seed must be a non-negative integer");
    return body_from_support(name, random_support(grid, static_cast<unsigned>(seed)));
  }
  throw Error(ErrorCode::InvalidInput, "unknown fixture '" + name + "'");
}

std::vector<std::string> standard_corpus() {
  return {"disk", "ellipse:1.2:1", "ellipse:1.5:1", "ellipse:2:1", "square", "hexagon", "random:1", "random:2"};
}

}  // namespace worn
