#include "worn/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "worn/error.hpp"
#include "worn/fourier.hpp"
#include "worn/kernels.hpp"

namespace worn {

namespace {

double dictionary_function(int j, double theta) {
  if (j == 0) return 1.0;
  const int k = (j + 1) / 2;
  return j % 2 == 1 ? std::cos(k * theta) : std::sin(k * theta);
}

double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * std::numbers::pi);
  return t < 0.0 ? t + 2.0 * std::numbers::pi : t;
}

void require_same(const SphereMeasure& a, const SphereMeasure& b) { require_same_grid(a.grid, b.grid); }

}  // namespace

double SphereMeasure::total_variation() const {
  double t = 0.0;
  for (double d : density) t += d;
  t *= grid.spacing();
  for (const Atom& a : atoms) t += a.mass;
  return t;
}

double SphereMeasure::integrate(const std::function<double(double)>& f) const {
  double t = 0.0;
  for (int i = 0; i < grid.size(); ++i) t += f(grid.theta(i)) * density[static_cast<std::size_t>(i)];
  t *= grid.spacing();
  for (const Atom& a : atoms) t += f(a.angle) * a.mass;
  return t;
}

SphereMeasure SphereMeasure::scaled(double factor) const {
  SphereMeasure m = *this;
  for (double& d : m.density) d *= factor;
  for (Atom& a : m.atoms) a.mass *= factor;
  return m;
}

SphereMeasure zero_measure(const AngleGrid& grid) {
  return {grid, std::vector<double>(static_cast<std::size_t>(grid.size()), 0.0), {}};
}

SphereMeasure surface_area_measure(const SupportFunction& h) {
  h.require_convex();
  return {h.grid(), curvature_radius(h), {}};
}

SphereMeasure surface_area_measure(const Body& body) {
  if (!body.polygon) return surface_area_measure(body.support);
  SphereMeasure m = zero_measure(body.grid());
  for (int i = 0; i < body.polygon->size(); ++i) m.atoms.push_back({body.polygon->edge_normal_angle(i), body.polygon->edge_length(i)});
  return m;
}

SphereMeasure cone_volume_measure(const SupportFunction& h) {
  SphereMeasure m = surface_area_measure(h);
  for (int i = 0; i < h.size(); ++i) m.density[static_cast<std::size_t>(i)] *= h[i];
  return m;
}

SphereMeasure cone_volume_measure(const Body& body) {
  if (!body.polygon) return cone_volume_measure(body.support);
  SphereMeasure m = zero_measure(body.grid());
  for (int i = 0; i < body.polygon->size(); ++i) {
    m.atoms.push_back({body.polygon->edge_normal_angle(i), body.polygon->edge_support(i) * body.polygon->edge_length(i)});
  }
  return m;
}

namespace {

void require_certified(const BoundaryTrace& trace) {
  if (!trace.certified) {
    std::ostringstream msg;
    msg << "Pohozaev residual " << trace.pohozaev_residual << " exceeds the " << kPohozaevGate << " gate";
    throw Error(ErrorCode::UncertifiedTrace, msg.str());
  }
}

SphereMeasure smooth_first_variation(const BoundaryTrace& trace, const SupportFunction& h) {
  if (trace.grid_grad_sq.size() != static_cast<std::size_t>(h.size())) {
    throw Error(ErrorCode::GridMismatch, "trace was not computed on this grid");
  }
  SphereMeasure m{h.grid(), curvature_radius(h), {}};
  for (std::size_t i = 0; i < m.density.size(); ++i) m.density[i] = std::max(0.0, m.density[i]) * trace.grid_grad_sq[i];
  return m;
}

}  // namespace

SphereMeasure first_variation_measure(const BoundaryTrace& trace, const Body& body) {
  require_certified(trace);
  if (trace.grid_grad_sq.empty()) {
    // Polygon mesh: one atom per facet.
    std::map<int, double> mass;
    for (const TraceEdge& e : trace.edges) {
      if (e.facet < 0) throw Error(ErrorCode::InvalidInput, "polygon trace edge without a facet");
      mass[e.facet] += e.grad_sq * e.length;
    }
    SphereMeasure m = zero_measure(body.grid());
    for (const auto& [facet, value] : mass) {
      const double angle = body.polygon ? body.polygon->edge_normal_angle(facet) : 0.0;
      m.atoms.push_back({angle, value});
    }
    return m;
  }
  return smooth_first_variation(trace, body.support);
}

SphereMeasure first_variation_measure(const BoundaryTrace& trace, const SupportFunction& h) {
  require_certified(trace);
  if (trace.grid_grad_sq.empty()) throw Error(ErrorCode::AtomsPresent, "polygon traces need the polygon body");
  return smooth_first_variation(trace, h);
}

SphereMeasure cone_energy_measure(const Body& body, const SphereMeasure& mu) {
  require_same_grid(body.grid(), mu.grid);
  SphereMeasure m = mu;
  for (int i = 0; i < mu.grid.size(); ++i) m.density[static_cast<std::size_t>(i)] *= body.support[i];
  for (Atom& a : m.atoms) a.mass *= body.support_at(a.angle);
  return m;
}

SphereMeasure cone_energy_measure(const SupportFunction& h, const SphereMeasure& mu) {
  require_same_grid(h.grid(), mu.grid);
  SphereMeasure m = mu;
  for (int i = 0; i < mu.grid.size(); ++i) m.density[static_cast<std::size_t>(i)] *= h[i];
  for (Atom& a : m.atoms) {
    const int i = h.grid().index_of(a.angle);
    a.mass *= i >= 0 ? h[i] : fourier::evaluate(h.values(), a.angle);
  }
  return m;
}

double constant_density_deficit(const SphereMeasure& m) {
  if (m.has_atoms()) throw Error(ErrorCode::AtomsPresent, "constant-density deficit is undefined for atomic measures");
  const auto [lo, hi] = std::minmax_element(m.density.begin(), m.density.end());
  double mean = 0.0;
  for (double d : m.density) mean += d;
  mean /= static_cast<double>(m.density.size());
  if (!(mean > 0.0)) throw Error(ErrorCode::InvalidInput, "deficit of a measure with non-positive mean");
  return (*hi - *lo) / mean;
}

double log_minkowski_objective(const SupportFunction& k, const SphereMeasure& tau, const SupportFunction& l, double energy) {
  require_same_grid(k.grid(), tau.grid);
  require_same_grid(k.grid(), l.grid());
  if (!(energy > 0.0)) throw Error(ErrorCode::InvalidInput, "energy must be positive");
  l.require_positive();
  double total = 0.0;
  for (int i = 0; i < l.size(); ++i) total += std::log(l[i]) * tau.density[static_cast<std::size_t>(i)];
  total *= tau.grid.spacing();
  for (const Atom& a : tau.atoms) {
    const int i = l.grid().index_of(a.angle);
    total += std::log(i >= 0 ? l[i] : fourier::evaluate(l.values(), a.angle)) * a.mass;
  }
  return total / energy;
}

double log_minkowski_objective(const SphereMeasure& tau, const Body& l, double energy) {
  require_same_grid(tau.grid, l.grid());
  if (!(energy > 0.0)) throw Error(ErrorCode::InvalidInput, "energy must be positive");
  l.support.require_positive();
  double total = 0.0;
  for (int i = 0; i < l.grid().size(); ++i) total += std::log(l.support[i]) * tau.density[static_cast<std::size_t>(i)];
  total *= tau.grid.spacing();
  for (const Atom& a : tau.atoms) {
    const double hl = l.support_at(a.angle);
    if (!(hl > 0.0)) throw Error(ErrorCode::OriginOutside, "log of a non-positive support value");
    total += std::log(hl) * a.mass;
  }
  return total / energy;
}

std::vector<double> dictionary_moments(const SphereMeasure& m) {
  std::vector<double> mom = kernels::dictionary_moments(m.density, m.grid, kWeakStarDegree);
  for (const Atom& a : m.atoms) {
    for (std::size_t j = 0; j < mom.size(); ++j) mom[j] += a.mass * dictionary_function(static_cast<int>(j), a.angle);
  }
  return mom;
}

double weak_star_distance(const SphereMeasure& a, const SphereMeasure& b) {
  require_same(a, b);
  const auto ma = dictionary_moments(a);
  const auto mb = dictionary_moments(b);
  double d = 0.0;
  for (std::size_t j = 0; j < ma.size(); ++j) d = std::max(d, std::abs(ma[j] - mb[j]));
  return d;
}

double pushforward_discrepancy(const BoundaryTrace& trace, const SphereMeasure& mu) {
  const auto on_sphere = dictionary_moments(mu);
  std::vector<double> on_boundary(on_sphere.size(), 0.0);
  for (const TraceEdge& e : trace.edges) {
    for (std::size_t j = 0; j < on_boundary.size(); ++j) {
      on_boundary[j] += dictionary_function(static_cast<int>(j), wrap_angle(e.normal_angle)) * e.grad_sq * e.length;
    }
  }
  const double scale = mu.total_variation();
  double d = 0.0;
  for (std::size_t j = 0; j < on_sphere.size(); ++j) d = std::max(d, std::abs(on_sphere[j] - on_boundary[j]) / scale);
  return d;
}

}  // namespace worn
