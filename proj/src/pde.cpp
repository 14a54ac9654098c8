#include "worn/pde.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cmath>
#include <numbers>
#include <sstream>

#include "worn/error.hpp"
#include "worn/kernels.hpp"

namespace worn {

std::string_view to_string(Functional f) { return f == Functional::Torsion ? "torsion" : "eigenvalue"; }

Functional functional_from_string(std::string_view name) {
  if (name == "torsion") return Functional::Torsion;
  if (name == "eigenvalue" || name == "eigen") return Functional::Eigenvalue;
  throw Error(ErrorCode::InvalidInput, "unknown functional '" + std::string(name) + "' (torsion | eigenvalue)");
}

double homogeneity(Functional f) { return f == Functional::Torsion ? 4.0 : -2.0; }

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

struct System {
  SpMat stiffness;  // all nodes
  SpMat mass;
  std::vector<int> interior;  // interior index -> node
  std::vector<int> slot;      // node -> interior index or -1
  SpMat k_ii;
  SpMat m_ii;
};

System assemble(const TriangleMesh& mesh) {
  const auto em = kernels::p1_element_matrices(mesh.nodes, mesh.triangles);
  const int n = mesh.node_count();
  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(9 * mesh.triangles.size());
  mt.reserve(9 * mesh.triangles.size());
  for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
    if (!(em.area[e] > 0.0)) throw Error(ErrorCode::SolverFailure, "mesh has a non-positive triangle");
    const auto& t = mesh.triangles[e];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        kt.emplace_back(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(j)], em.stiffness[e][static_cast<std::size_t>(3 * i + j)]);
        mt.emplace_back(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(j)], em.mass[e][static_cast<std::size_t>(3 * i + j)]);
      }
    }
  }
  System s;
  s.stiffness.resize(n, n);
  s.mass.resize(n, n);
  s.stiffness.setFromTriplets(kt.begin(), kt.end());
  s.mass.setFromTriplets(mt.begin(), mt.end());

  s.slot.assign(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    if (!mesh.on_boundary[static_cast<std::size_t>(v)]) {
      s.slot[static_cast<std::size_t>(v)] = static_cast<int>(s.interior.size());
      s.interior.push_back(v);
    }
  }
  if (s.interior.empty()) throw Error(ErrorCode::SolverFailure, "mesh has no interior nodes");
  const int m = static_cast<int>(s.interior.size());
  std::vector<Eigen::Triplet<double>> ki, mi;
  for (const auto& [full, sub, out] : {std::tuple{&s.stiffness, &s.k_ii, &ki}, std::tuple{&s.mass, &s.m_ii, &mi}}) {
    for (int col = 0; col < full->outerSize(); ++col) {
      const int c = s.slot[static_cast<std::size_t>(col)];
      if (c < 0) continue;
      for (SpMat::InnerIterator it(*full, col); it; ++it) {
        const int r = s.slot[static_cast<std::size_t>(it.row())];
        if (r >= 0) out->emplace_back(r, c, it.value());
      }
    }
    sub->resize(m, m);
    sub->setFromTriplets(out->begin(), out->end());
  }
  return s;
}

Vec expand(const System& s, const Vec& x, int n) {
  Vec full = Vec::Zero(n);
  for (std::size_t i = 0; i < s.interior.size(); ++i) full[s.interior[i]] = x[static_cast<Eigen::Index>(i)];
  return full;
}

double relative_residual(const SpMat& a, const Vec& x, const Vec& b) {
  const double nb = b.norm();
  return (a * x - b).norm() / (nb > 0.0 ? nb : 1.0);
}

void factorize(Eigen::SimplicialLDLT<SpMat>& solver, const SpMat& a) {
  solver.compute(a);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::SolverFailure, "sparse factorization failed");
  if (solver.vectorD().minCoeff() <= 0.0) throw Error(ErrorCode::SolverFailure, "stiffness matrix is not positive definite");
}

// One step of iterative refinement keeps the reported residual at the level
// of the factorization's backward error.
Vec solve_refined(const Eigen::SimplicialLDLT<SpMat>& solver, const SpMat& a, const Vec& b, double* residual) {
  Vec x = solver.solve(b);
  for (int pass = 0; pass < 2; ++pass) {
    const double r = relative_residual(a, x, b);
    if (r <= 1e-15) break;
    x += solver.solve(b - a * x);
  }
  *residual = relative_residual(a, x, b);
  if (!std::isfinite(*residual) || *residual > kSolveResidualTol) {
    std::ostringstream msg;
    msg << "linear solve residual " << *residual << " exceeds " << kSolveResidualTol;
    throw Error(ErrorCode::SolverFailure, msg.str());
  }
  return x;
}

}  // namespace

ScalarField solve_torsion(std::shared_ptr<const TriangleMesh> mesh) {
  if (!mesh) throw Error(ErrorCode::InvalidInput, "null mesh");
  const System s = assemble(*mesh);
  // b_i = int phi_i: full mass rows, boundary columns included.
  const Vec row_sums = s.mass * Vec::Ones(mesh->node_count());
  Vec b(static_cast<Eigen::Index>(s.interior.size()));
  for (std::size_t i = 0; i < s.interior.size(); ++i) b[static_cast<Eigen::Index>(i)] = row_sums[s.interior[i]];
  Eigen::SimplicialLDLT<SpMat> solver;
  factorize(solver, s.k_ii);
  ScalarField u;
  u.kind = Functional::Torsion;
  const Vec x = solve_refined(solver, s.k_ii, b, &u.diagnostics.residual);
  const Vec full = expand(s, x, mesh->node_count());
  u.values.assign(full.data(), full.data() + full.size());
  u.mesh = std::move(mesh);
  u.diagnostics.unknowns = static_cast<int>(s.interior.size());
  u.diagnostics.iterations = 1;
  u.diagnostics.min_angle_deg = u.mesh->min_angle_deg();
  u.energy = torsional_rigidity(u);
  return u;
}

double torsional_rigidity(const ScalarField& u) {
  // int u with the consistent mass: sum over elements of area * mean of vertices.
  double total = 0.0;
  for (const auto& t : u.mesh->triangles) {
    const Vec2& a = u.mesh->nodes[static_cast<std::size_t>(t[0])];
    const double area = 0.5 * cross(u.mesh->nodes[static_cast<std::size_t>(t[1])] - a, u.mesh->nodes[static_cast<std::size_t>(t[2])] - a);
    total += area * (u.values[static_cast<std::size_t>(t[0])] + u.values[static_cast<std::size_t>(t[1])] +
                     u.values[static_cast<std::size_t>(t[2])]) / 3.0;
  }
  return total;
}

double l2_norm_squared(const ScalarField& u) {
  double total = 0.0;
  for (const auto& t : u.mesh->triangles) {
    const Vec2& a = u.mesh->nodes[static_cast<std::size_t>(t[0])];
    const double area = 0.5 * cross(u.mesh->nodes[static_cast<std::size_t>(t[1])] - a, u.mesh->nodes[static_cast<std::size_t>(t[2])] - a);
    const double x = u.values[static_cast<std::size_t>(t[0])];
    const double y = u.values[static_cast<std::size_t>(t[1])];
    const double z = u.values[static_cast<std::size_t>(t[2])];
    total += area * (x * x + y * y + z * z + x * y + y * z + z * x) / 6.0;
  }
  return total;
}

ScalarField solve_eigen(std::shared_ptr<const TriangleMesh> mesh) {
  if (!mesh) throw Error(ErrorCode::InvalidInput, "null mesh");
  const System s = assemble(*mesh);
  Eigen::SimplicialLDLT<SpMat> solver;
  factorize(solver, s.k_ii);

  const auto m = static_cast<Eigen::Index>(s.interior.size());
  Vec x = Vec::Ones(m);
  x /= std::sqrt(x.dot(s.m_ii * x));
  double lambda = x.dot(s.k_ii * x);
  double residual = 0.0;
  int it = 0;
  bool converged = false;
  while (it < kMaxInverseIterations) {
    ++it;
    const Vec mx = s.m_ii * x;
    Vec y = solve_refined(solver, s.k_ii, mx, &residual);
    y /= std::sqrt(y.dot(s.m_ii * y));
    const double next = y.dot(s.k_ii * y);
    x = std::move(y);
    const double change = std::abs(next - lambda) / std::abs(next);
    lambda = next;
    if (change < kEigenTol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(ErrorCode::NonConvergence, "inverse iteration did not converge in 500 steps");
  if (x.sum() < 0.0) x = -x;
  // The ground state has one sign; a sign change means the iteration locked
  // onto a higher mode.
  if (x.minCoeff() < -1e-8 * x.maxCoeff()) throw Error(ErrorCode::SolverFailure, "eigenvector changes sign");

  ScalarField u;
  u.kind = Functional::Eigenvalue;
  const Vec full = expand(s, x, mesh->node_count());
  u.values.assign(full.data(), full.data() + full.size());
  u.mesh = std::move(mesh);
  u.energy = lambda;
  u.diagnostics.unknowns = static_cast<int>(m);
  u.diagnostics.residual = residual;
  u.diagnostics.iterations = it;
  u.diagnostics.min_angle_deg = u.mesh->min_angle_deg();
  return u;
}

ScalarField solve(Functional f, std::shared_ptr<const TriangleMesh> mesh) {
  return f == Functional::Torsion ? solve_torsion(std::move(mesh)) : solve_eigen(std::move(mesh));
}

double BoundaryTrace::perimeter() const {
  double p = 0.0;
  for (const auto& e : edges) p += e.length;
  return p;
}

namespace {

// Residual of the discrete equation at boundary loop node k:
// (K u - f)_k = int_{boundary} phi_k du/dn.
std::vector<double> boundary_residual(const ScalarField& u) {
  const TriangleMesh& mesh = *u.mesh;
  const auto em = kernels::p1_element_matrices(mesh.nodes, mesh.triangles);
  std::vector<double> res(mesh.nodes.size(), 0.0);
  const double load = u.kind == Functional::Torsion ? 1.0 : u.energy;
  for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
    const auto& t = mesh.triangles[e];
    for (int i = 0; i < 3; ++i) {
      const auto vi = static_cast<std::size_t>(t[static_cast<std::size_t>(i)]);
      if (!mesh.on_boundary[vi]) continue;
      for (int j = 0; j < 3; ++j) {
        const auto vj = static_cast<std::size_t>(t[static_cast<std::size_t>(j)]);
        const double f = u.kind == Functional::Torsion ? 1.0 : u.values[vj];
        res[vi] += em.stiffness[e][static_cast<std::size_t>(3 * i + j)] * u.values[vj] -
                   load * em.mass[e][static_cast<std::size_t>(3 * i + j)] * f;
      }
    }
  }
  std::vector<double> out(mesh.boundary.size());
  for (std::size_t k = 0; k < mesh.boundary.size(); ++k) out[k] = res[static_cast<std::size_t>(mesh.boundary[k].from)];
  return out;
}

// Solves the periodic P1 mass system on a closed polyline with the given
// edge lengths: row k is (L_{k-1}/6, (L_{k-1}+L_k)/3, L_k/6).
std::vector<double> periodic_mass_solve(const std::vector<double>& rhs, const std::vector<double>& len) {
  const std::size_t nb = rhs.size();
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t k = 0; k < nb; ++k) {
    const std::size_t prev = (k + nb - 1) % nb;
    const auto r = static_cast<int>(k);
    trip.emplace_back(r, static_cast<int>(prev), len[prev] / 6.0);
    trip.emplace_back(r, r, (len[prev] + len[k]) / 3.0);
    trip.emplace_back(r, static_cast<int>((k + 1) % nb), len[k] / 6.0);
  }
  SpMat mb(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
  mb.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<SpMat> solver(mb);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::SolverFailure, "boundary mass factorization failed");
  const Vec x = solver.solve(Eigen::Map<const Vec>(rhs.data(), static_cast<Eigen::Index>(nb)));
  return {x.data(), x.data() + nb};
}

BoundaryTrace make_trace(const ScalarField& u, const SupportFunction* h, const ConvexPolygon* polygon) {
  const TriangleMesh& mesh = *u.mesh;
  if (mesh.smooth_boundary && h == nullptr) throw Error(ErrorCode::InvalidInput, "smooth mesh needs its support function");
  if (mesh.smooth_boundary && static_cast<int>(mesh.grid_node.size()) != h->size()) {
    throw Error(ErrorCode::GridMismatch, "mesh was built on a different angle grid");
  }
  BoundaryTrace tr;
  tr.kind = u.kind;
  tr.energy = u.energy;
  const std::vector<double> res = boundary_residual(u);
  const std::size_t nb = mesh.boundary.size();
  auto node = [&](int v) -> const Vec2& { return mesh.nodes[static_cast<std::size_t>(v)]; };

  std::vector<char> exempt;  // nodes where Hopf is not required (polygon corners)
  if (mesh.smooth_boundary) {
    // Every mesh node of the polygonal boundary is a slight corner, where the
    // flux density of the polygonal problem dips; testing against the hat
    // functions of the grid chords averages that out.
    const int n = h->size();
    const std::vector<double> r = curvature_radius(*h);
    std::vector<double> flux(static_cast<std::size_t>(n), 0.0), chord(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      chord[static_cast<std::size_t>(i)] =
          (node(mesh.grid_node[static_cast<std::size_t>((i + 1) % n)]) - node(mesh.grid_node[static_cast<std::size_t>(i)])).norm();
    }
    int owner = -1;
    for (std::size_t k = 0; k < nb; ++k) {
      const int v = mesh.boundary[k].from;
      const int gi = mesh.node_grid[static_cast<std::size_t>(v)];
      if (gi >= 0) owner = gi;
      if (owner < 0) throw Error(ErrorCode::InvalidInput, "boundary loop does not start at a grid node");
      const double s = gi >= 0 ? 0.0
                                : (node(v) - node(mesh.grid_node[static_cast<std::size_t>(owner)])).norm() /
                                      chord[static_cast<std::size_t>(owner)];
      flux[static_cast<std::size_t>(owner)] += (1.0 - s) * res[k];
      flux[static_cast<std::size_t>((owner + 1) % n)] += s * res[k];
    }
    tr.node_dudn = periodic_mass_solve(flux, chord);
    for (int i = 0; i < n; ++i) {
      const int i1 = (i + 1) % n;
      TraceEdge e;
      e.from = mesh.grid_node[static_cast<std::size_t>(i)];
      e.to = mesh.grid_node[static_cast<std::size_t>(i1)];
      const Vec2 d = node(e.to) - node(e.from);
      e.length = d.norm();
      e.normal_angle = std::atan2(-d.x(), d.y());
      if (e.normal_angle < 0.0) e.normal_angle += 2.0 * std::numbers::pi;
      e.x_dot_nu = node(e.from).dot(Vec2(d.y(), -d.x()) / e.length);
      e.curvature = 0.5 * (1.0 / r[static_cast<std::size_t>(i)] + 1.0 / r[static_cast<std::size_t>(i1)]);
      tr.edges.push_back(e);
    }
    tr.grid_grad_sq.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) tr.grid_grad_sq[static_cast<std::size_t>(i)] = tr.node_dudn[static_cast<std::size_t>(i)] * tr.node_dudn[static_cast<std::size_t>(i)];
    exempt.assign(static_cast<std::size_t>(n), 0);
  } else {
    // Polygons: lumped boundary mass; the consistent solve rings at corners.
    tr.node_dudn.resize(nb);
    exempt.assign(nb, 0);
    for (std::size_t k = 0; k < nb; ++k) {
      const BoundaryEdge& be = mesh.boundary[k];
      const BoundaryEdge& prev = mesh.boundary[(k + nb - 1) % nb];
      const double lk = (node(be.to) - node(be.from)).norm();
      const double lp = (node(prev.to) - node(prev.from)).norm();
      tr.node_dudn[k] = res[k] / (0.5 * (lk + lp));
      exempt[k] = be.facet != prev.facet;
      TraceEdge e;
      e.from = be.from;
      e.to = be.to;
      e.length = lk;
      e.normal_angle = be.normal_angle;
      e.facet = be.facet;
      e.x_dot_nu = polygon && be.facet >= 0 ? polygon->edge_support(be.facet) : node(be.from).dot(unit_normal(be.normal_angle));
      tr.edges.push_back(e);
    }
  }

  const std::size_t ne = tr.edges.size();
  for (std::size_t k = 0; k < ne; ++k) {
    TraceEdge& e = tr.edges[k];
    const double ga = tr.node_dudn[k];
    const double gb = tr.node_dudn[(k + 1) % ne];
    e.grad_sq = (ga * ga + ga * gb + gb * gb) / 3.0;
    tr.grad_sq_integral += e.grad_sq * e.length;
    tr.pohozaev_integral += e.grad_sq * e.x_dot_nu * e.length;
  }

  // Hopf: du/dn < 0 on the boundary; polygon corners (where it vanishes) are exempt.
  for (std::size_t k = 0; k < ne; ++k) {
    if (exempt[k]) continue;
    if (!(tr.node_dudn[k] < 0.0)) {
      std::ostringstream msg;
      msg << "du/dn = " << tr.node_dudn[k] << " at boundary node " << tr.edges[k].from;
      throw Error(ErrorCode::HopfViolation, msg.str());
    }
  }

  tr.pohozaev_target = u.kind == Functional::Torsion ? 4.0 * u.energy : 2.0 * u.energy;
  tr.pohozaev_residual = std::abs(tr.pohozaev_target - tr.pohozaev_integral) / std::abs(tr.pohozaev_target);
  tr.certified = tr.pohozaev_residual <= kPohozaevGate;
  return tr;
}

}  // namespace

BoundaryTrace boundary_trace(const ScalarField& u, const Body& body) {
  if (u.mesh->smooth_boundary) return make_trace(u, &body.support, nullptr);
  return make_trace(u, nullptr, body.polygon ? &*body.polygon : nullptr);
}

BoundaryTrace boundary_trace(const ScalarField& u, const SupportFunction& h) {
  return make_trace(u, u.mesh->smooth_boundary ? &h : nullptr, nullptr);
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double bessel_zero(double nu) {
  if (!(nu >= 0.0)) throw Error(ErrorCode::InvalidInput, "bessel_zero needs nu >= 0");
  // j_{nu,1} > nu; scan for the first sign change, then bisect.
  double lo = nu + 1e-3;
  double flo = std::cyl_bessel_j(nu, lo);
  double hi = lo;
  while (true) {
    hi = lo + 0.1;
    const double fhi = std::cyl_bessel_j(nu, hi);
    if ((flo > 0.0) != (fhi > 0.0)) break;
    lo = hi;
    flo = fhi;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = std::cyl_bessel_j(nu, mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double ball_capacity(int n, double radius) {
  if (n < 3) throw Error(ErrorCode::DimensionError, "Newtonian capacity needs n >= 3");
  return n * (n - 2) * unit_ball_volume(n) * std::pow(radius, n - 2);
}

BallOracle ball_oracle(int n, double radius) {
  if (n < 2) throw Error(ErrorCode::DimensionError, "ball oracle needs n >= 2");
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidInput, "ball radius must be positive");
  BallOracle b;
  b.dimension = n;
  b.radius = radius;
  b.omega = unit_ball_volume(n);
  b.torsion = b.omega * std::pow(radius, n + 2) / (n * (n + 2));
  const double j = bessel_zero(0.5 * n - 1.0);
  b.eigenvalue = j * j / (radius * radius);
  b.torsion_grad_sq_pointwise = radius * radius / (n * n);
  b.grad_sq_torsion = b.omega * std::pow(radius, n + 1) / n;
  b.grad_sq_eigen = 2.0 * j * j / (radius * radius * radius);
  if (n >= 3) {
    b.capacity = ball_capacity(n, radius);
    b.grad_sq_capacity = n * (n - 2.0) * (n - 2.0) * b.omega * std::pow(radius, n - 3);
  }
  return b;
}

BodySolve solve_body(const Body& body, Functional f, double target_h) {
  auto mesh = std::make_shared<const TriangleMesh>(mesh_body(body, target_h));
  ScalarField u = solve(f, std::move(mesh));
  BoundaryTrace tr = boundary_trace(u, body);
  return {std::move(u), std::move(tr)};
}

}  // namespace worn
