#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "worn/body.hpp"
#include "worn/mesh.hpp"

namespace worn {

enum class Functional { Torsion, Eigenvalue };

std::string_view to_string(Functional f);
Functional functional_from_string(std::string_view name);  // "torsion" | "eigenvalue"

// Homogeneity degree alpha of the energy under dilation in the plane:
// torsion 4, eigenvalue -2.
double homogeneity(Functional f);

struct SolverDiagnostics {
  int unknowns = 0;
  double residual = 0.0;  // relative residual of the final linear solve
  int iterations = 0;     // inverse iterations (eigenvalue) or 1
  double min_angle_deg = 0.0;
};

/// P1 finite-element solution on a mesh. energy is T = int u for torsion and
/// lambda_1 for the eigenvalue (u normalized to unit L2 norm, positive).
struct ScalarField {
  std::shared_ptr<const TriangleMesh> mesh;
  std::vector<double> values;
  Functional kind = Functional::Torsion;
  double energy = 0.0;
  SolverDiagnostics diagnostics;
};

inline constexpr double kSolveResidualTol = 1e-12;
inline constexpr int kMaxInverseIterations = 500;
inline constexpr double kEigenTol = 1e-10;

ScalarField solve_torsion(std::shared_ptr<const TriangleMesh> mesh);
double torsional_rigidity(const ScalarField& u);
ScalarField solve_eigen(std::shared_ptr<const TriangleMesh> mesh);
ScalarField solve(Functional f, std::shared_ptr<const TriangleMesh> mesh);

// Discrete integral of u^2 with the consistent mass matrix.
double l2_norm_squared(const ScalarField& u);

struct TraceEdge {
  int from = 0, to = 0;
  double grad_sq = 0.0;  // edge mean of |grad u|^2 (exact for the linear trace of du/dn)
  double x_dot_nu = 0.0;
  double curvature = 0.0;  // G; zero on flat polygon edges
  double length = 0.0;
  double normal_angle = 0.0;
  int facet = -1;
};

/// |grad u|^2 along the boundary. The normal derivative is recovered from
/// the residual of the discrete equation at boundary nodes (consistent
/// flux), then certified by the Pohozaev identity
///   int |grad u|^2 x.nu = 4T (torsion) or 2 lambda (eigenvalue).
struct BoundaryTrace {
  Functional kind = Functional::Torsion;
  double energy = 0.0;
  std::vector<TraceEdge> edges;
  std::vector<double> node_dudn;     // du/dn at edges[k].from
  std::vector<double> grid_grad_sq;  // smooth bodies: |grad u|^2 at x(theta_i)
  double grad_sq_integral = 0.0;     // int |grad u|^2 dH
  double pohozaev_integral = 0.0;    // int |grad u|^2 x.nu dH
  double pohozaev_target = 0.0;
  double pohozaev_residual = 0.0;
  bool certified = false;
  double perimeter() const;
};

inline constexpr double kPohozaevGate = 0.01;

// h must be the support function the mesh was built from (smooth bodies);
// polygon meshes use their own facets. Throws HopfViolation when du/dn >= 0
// away from polygon corners.
BoundaryTrace boundary_trace(const ScalarField& u, const Body& body);
BoundaryTrace boundary_trace(const ScalarField& u, const SupportFunction& h);

struct BallOracle {
  int dimension = 2;
  double radius = 1.0;
  double omega = 0.0;  // volume of the unit ball
  double torsion = 0.0;
  double eigenvalue = 0.0;
  std::optional<double> capacity;  // n >= 3
  double grad_sq_torsion = 0.0;    // int over the sphere of |grad u|^2
  double grad_sq_eigen = 0.0;
  std::optional<double> grad_sq_capacity;
  double torsion_grad_sq_pointwise = 0.0;  // R^2 / n^2
};

BallOracle ball_oracle(int n, double radius);
// Newtonian capacity of the ball; DimensionError for n = 2.
double ball_capacity(int n, double radius);
double unit_ball_volume(int n);
// First positive zero of J_nu.
double bessel_zero(double nu);

// Full pipeline used by the higher modules: mesh, solve, trace.
struct BodySolve {
  ScalarField field;
  BoundaryTrace trace;
};
BodySolve solve_body(const Body& body, Functional f, double target_h);

}  // namespace worn
