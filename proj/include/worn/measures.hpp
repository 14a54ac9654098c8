#pragma once

#include <functional>
#include <vector>

#include "worn/body.hpp"
#include "worn/pde.hpp"

namespace worn {

struct Atom {
  double angle = 0.0;  // in [0, 2pi)
  double mass = 0.0;
};

/// Measure on the unit circle: a density per unit angle on the grid plus
/// optional atoms (polytopal measures).
struct SphereMeasure {
  AngleGrid grid;
  std::vector<double> density;
  std::vector<Atom> atoms;

  bool has_atoms() const noexcept { return !atoms.empty(); }
  double total_variation() const;
  double integrate(const std::function<double(double)>& f) const;
  SphereMeasure scaled(double factor) const;
};

SphereMeasure zero_measure(const AngleGrid& grid);

// S_K: density r = h + h'' (smooth) or edge lengths at edge normals (polygon).
SphereMeasure surface_area_measure(const SupportFunction& h);
SphereMeasure surface_area_measure(const Body& body);
// V_K = h S_K; |V_K| = 2|K|.
SphereMeasure cone_volume_measure(const SupportFunction& h);
SphereMeasure cone_volume_measure(const Body& body);

// mu_K: pushforward of |grad u|^2 dH by the Gauss map. Requires a certified
// trace (UncertifiedTrace otherwise). Smooth meshes give the density
// |grad u|^2(theta_i) r(theta_i); polygon meshes give one atom per facet.
SphereMeasure first_variation_measure(const BoundaryTrace& trace, const Body& body);
SphereMeasure first_variation_measure(const BoundaryTrace& trace, const SupportFunction& h);

// tau_K / sigma_K = h mu_K.
SphereMeasure cone_energy_measure(const Body& body, const SphereMeasure& mu);
SphereMeasure cone_energy_measure(const SupportFunction& h, const SphereMeasure& mu);

// (max - min) / mean of the density; AtomsPresent for atomic measures.
double constant_density_deficit(const SphereMeasure& m);

// (1 / F_K) int log h_L d tau_K.
double log_minkowski_objective(const SupportFunction& k, const SphereMeasure& tau, const SupportFunction& l, double energy);
double log_minkowski_objective(const SphereMeasure& tau, const Body& l, double energy);

inline constexpr int kWeakStarDegree = 8;
// max over {1, cos k, sin k : k <= 8} of |int f dm1 - int f dm2|.
double weak_star_distance(const SphereMeasure& a, const SphereMeasure& b);
// Moments of the dictionary (same order as kernels::dictionary_moments).
std::vector<double> dictionary_moments(const SphereMeasure& m);

// Change of variables check: max over the dictionary of
// |int phi dmu - int_{boundary} (phi o nu) |grad u|^2 dH| / |mu|.
double pushforward_discrepancy(const BoundaryTrace& trace, const SphereMeasure& mu);

}  // namespace worn
