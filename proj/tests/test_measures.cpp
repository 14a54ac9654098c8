#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "worn/body.hpp"
#include "worn/error.hpp"
#include "worn/measures.hpp"

using namespace worn;
using oracle::pi;

TEST_CASE("surface area and cone volume measures") {
  const AngleGrid g(256);
  const Body e = make_fixture("ellipse:2:1", g);
  CHECK(surface_area_measure(e).total_variation() == doctest::Approx(oracle::ellipse_perimeter(2, 1)).epsilon(1e-9));
  CHECK(cone_volume_measure(e).total_variation() == doctest::Approx(2 * e.area()).epsilon(1e-10));

  const Body sq = make_fixture("square:2", g);
  const SphereMeasure v = cone_volume_measure(sq);
  REQUIRE(v.atoms.size() == 4);
  for (const Atom& a : v.atoms) CHECK(a.mass == doctest::Approx(2.0));
  CHECK(v.total_variation() == doctest::Approx(8.0));
  const SphereMeasure s = surface_area_measure(sq);
  CHECK(s.total_variation() == doctest::Approx(8.0));
  bool atoms = false;
  try {
    constant_density_deficit(v);
  } catch (const Error& err) {
    atoms = err.code() == ErrorCode::AtomsPresent;
  }
  CHECK(atoms);
}

TEST_CASE("cone energy measures of the disk") {
  const AngleGrid g(256);
  const Body d = make_fixture("disk", g);
  const BodySolve t = solve_body(d, Functional::Torsion, 0.02);
  const SphereMeasure tau = cone_energy_measure(d, first_variation_measure(t.trace, d));
  CHECK(tau.total_variation() == doctest::Approx(4 * t.field.energy).epsilon(0.01));
  CHECK(constant_density_deficit(tau) <= 0.01);
  const BodySolve l = solve_body(d, Functional::Eigenvalue, 0.02);
  const SphereMeasure sigma = cone_energy_measure(d, first_variation_measure(l.trace, d));
  CHECK(sigma.total_variation() == doctest::Approx(2 * l.field.energy).epsilon(0.01));
}

TEST_CASE("ellipse cone energy density is far from constant") {
  const Body e = make_fixture("ellipse:1.5:1", AngleGrid(256));
  const BodySolve t = solve_body(e, Functional::Torsion, 0.02);
  CHECK(constant_density_deficit(cone_energy_measure(e, first_variation_measure(t.trace, e))) >= 0.05);
}

TEST_CASE("polygon first variation is atomic") {
  const Body hex = make_fixture("hexagon", AngleGrid(256));
  const BodySolve t = solve_body(hex, Functional::Torsion, 0.03);
  const SphereMeasure mu = first_variation_measure(t.trace, hex);
  CHECK(mu.atoms.size() == 6);
  CHECK(mu.total_variation() == doctest::Approx(t.trace.grad_sq_integral).epsilon(1e-12));
  // Equal facets by symmetry.
  for (const Atom& a : mu.atoms) CHECK(a.mass == doctest::Approx(mu.atoms[0].mass).epsilon(0.01));
  CHECK(cone_energy_measure(hex, mu).total_variation() == doctest::Approx(4 * t.field.energy).epsilon(0.01));
}

TEST_CASE("uncertified traces are rejected") {
  const Body d = make_fixture("disk", AngleGrid(128));
  BodySolve t = solve_body(d, Functional::Torsion, 0.05);
  t.trace.certified = false;
  bool threw = false;
  try {
    first_variation_measure(t.trace, d);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::UncertifiedTrace;
  }
  CHECK(threw);
}

TEST_CASE("property: pushforward consistency") {
  for (const char* name : {"disk", "ellipse:2:1", "random:1", "square"}) {
    const Body b = make_fixture(name, AngleGrid(256));
    const BodySolve t = solve_body(b, Functional::Torsion, 0.03);
    INFO(name);
    CHECK(pushforward_discrepancy(t.trace, first_variation_measure(t.trace, b)) <= 0.01);
  }
}

TEST_CASE("property: weak-star distance of regular polygons to the disk decreases") {
  // The dictionary has degree 8, so an n-gon with n <= 8 aliases a mode onto
  // the constant; the sequence starts above that.
  const AngleGrid g(256);
  auto tau = [](const Body& b) {
    const BodySolve t = solve_body(b, Functional::Torsion, 0.03);
    return cone_energy_measure(b, first_variation_measure(t.trace, b));
  };
  const SphereMeasure disk = tau(make_fixture("disk", g));
  double prev = 1e300;
  for (int n : {12, 16, 32, 64}) {
    std::vector<Vec2> v;
    for (int i = 0; i < n; ++i) v.push_back(unit_normal(2 * pi * (i + 0.5) / n));
    const double d = weak_star_distance(tau(body_from_polygon("ngon", ConvexPolygon(v), g)), disk);
    INFO("n = " << n << " distance " << d);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("log-Minkowski objective") {
  const AngleGrid g(256);
  const Body d = make_fixture("disk", g);
  const BodySolve t = solve_body(d, Functional::Torsion, 0.03);
  const SphereMeasure tau = cone_energy_measure(d, first_variation_measure(t.trace, d));
  const Body big = make_fixture("disk:3", g);
  // (1 / T) int log 3 d tau = 4 log 3 up to |tau| / 4T.
  CHECK(log_minkowski_objective(tau, big, t.field.energy) == doctest::Approx(4 * std::log(3.0)).epsilon(0.01));
  CHECK(log_minkowski_objective(d.support, tau, big.support, t.field.energy) ==
        doctest::Approx(log_minkowski_objective(tau, big, t.field.energy)).epsilon(1e-12));
}

TEST_CASE("measure arithmetic") {
  const AngleGrid g(64);
  SphereMeasure m = zero_measure(g);
  m.atoms.push_back({0.5, 2.0});
  for (double& d : m.density) d = 1.0;
  CHECK(m.total_variation() == doctest::Approx(2 * pi + 2));
  CHECK(m.integrate([](double t) { return std::cos(t); }) == doctest::Approx(2 * std::cos(0.5)).epsilon(1e-12));
  CHECK(m.scaled(2).total_variation() == doctest::Approx(4 * pi + 4));
}
