#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "worn/body.hpp"
#include "worn/measures.hpp"
#include "worn/pde.hpp"

namespace worn {

/// margin = rhs - lhs; the inequality holds when margin >= -tol.
struct InequalityReport {
  std::string name;
  std::string body;
  std::string other;       // second body, when the inequality has one
  std::string functional;  // empty for purely geometric checks
  double lambda = 0.0;     // interpolation weight (rectangle tables)
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol = 0.0;
  double equality_tol = 0.0;
  bool pass = false;
  bool near_equality = false;
  bool pde_backed = false;
  // resolution metadata
  int n_angles = 0;
  double mesh_target = 0.0;
  double pohozaev_residual = 0.0;  // max over the solves involved
  double solver_residual = 0.0;
  int series_terms = 0;
};

inline constexpr double kPdeRelTol = 0.01;
inline constexpr double kClosedFormTol = 1e-9;
inline constexpr double kDefaultMeshTarget = 0.02;

// tol = max(1%, 3 x residual) |rhs|
double pde_tolerance(double rhs, double pohozaev_residual);

/// Lazily solved torsion / eigenvalue problems for one body.
/// Not thread-safe; the suite gives each thread its own analyses.
class BodyAnalysis {
 public:
  BodyAnalysis(Body body, double mesh_target = kDefaultMeshTarget);

  const Body& body() const noexcept { return body_; }
  double mesh_target() const noexcept { return target_; }
  const BodySolve& solve(Functional f);
  double energy(Functional f) { return solve(f).field.energy; }
  const SphereMeasure& first_variation(Functional f);

 private:
  Body body_;
  double target_;
  std::map<Functional, BodySolve> solves_;
  std::map<Functional, SphereMeasure> measures_;
};

InequalityReport saint_venant(BodyAnalysis& k);
InequalityReport faber_krahn(BodyAnalysis& k);

// Theta_2 = int sqrt(r / h) dtheta; zero for polygons (G = 0 a.e.).
double affine2_surface_area(const Body& k);
InequalityReport affine2_isoperimetric(const Body& k);

InequalityReport bfl_isoperimetric(BodyAnalysis& k, Functional f);
// Centers the body first. Polygons use the exact polar polygon.
InequalityReport blaschke_santalo(const Body& k);
InequalityReport bm_first_variation(BodyAnalysis& k, BodyAnalysis& l, Functional f);
InequalityReport eigen_width_bound(BodyAnalysis& k);

// Log-Minkowski inequality against the unit disk with the uniform probability
// on the circle: volume form and the torsion chain through Saint-Venant.
// SymmetryViolation unless L is centrally symmetric.
InequalityReport guan_ni_log_volume(const Body& l);
InequalityReport guan_ni_log_torsion(BodyAnalysis& l);

struct SeriesValue {
  double value = 0.0;
  int terms = 0;
};
// Rectangle (0, l) x (0, 1).
double rectangle_eigenvalue(double l);
SeriesValue rectangle_torsion(double l);

inline const std::vector<double> kDefaultRectLengths{0.5, 1.0, 2.0, 4.0};
inline const std::vector<double> kDefaultRectLambdas{0.25, 0.5, 0.75};

// Every ordered pair (l1, l2) of the lengths times every lambda.
std::vector<InequalityReport> rectangle_logbm_table(const std::vector<double>& lengths, const std::vector<double>& lambdas, Functional f);

struct SuiteOptions {
  std::vector<std::string> bodies = standard_corpus();
  int n_angles = AngleGrid::kDefaultAngles;
  double mesh_target = kDefaultMeshTarget;
  std::optional<std::string> only;  // keep reports whose name starts with this
};

// All reports over the bodies, in a fixed order independent of threading.
std::vector<InequalityReport> run_suite(const SuiteOptions& options);

// Whether the report's inequality is an equality for this body: the disk for
// ball-equality inequalities, centered ellipses for Theta_2 and Blaschke-Santalo.
bool expected_equality(const InequalityReport& r);

}  // namespace worn
