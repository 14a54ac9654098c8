#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "worn/fourier.hpp"
#include "worn/kernels.hpp"
#include "worn/mesh.hpp"

using namespace worn;
using oracle::pi;

TEST_CASE("spectral derivatives") {
  const AngleGrid g(64);
  std::vector<double> v;
  for (int i = 0; i < g.size(); ++i) v.push_back(std::cos(3 * g.theta(i)) + 0.5 * std::sin(5 * g.theta(i)));
  const auto d1 = fourier::derivative(v, 1);
  const auto d2 = fourier::derivative(v, 2);
  for (int i = 0; i < g.size(); ++i) {
    const double t = g.theta(i);
    CHECK(d1[static_cast<std::size_t>(i)] == doctest::Approx(-3 * std::sin(3 * t) + 2.5 * std::cos(5 * t)).epsilon(1e-12));
    CHECK(d2[static_cast<std::size_t>(i)] == doctest::Approx(-9 * std::cos(3 * t) - 12.5 * std::sin(5 * t)).epsilon(1e-12));
  }
  CHECK(fourier::evaluate(v, 0.3) == doctest::Approx(std::cos(0.9) + 0.5 * std::sin(1.5)).epsilon(1e-12));
  CHECK(fourier::evaluate_derivative(v, 0.3) == doctest::Approx(-3 * std::sin(0.9) + 2.5 * std::cos(1.5)).epsilon(1e-12));
}

TEST_CASE("lowpass, resample, symmetrize") {
  const AngleGrid g(64);
  std::vector<double> v;
  for (int i = 0; i < g.size(); ++i) v.push_back(1.0 + std::cos(2 * g.theta(i)) + 0.1 * std::cos(20 * g.theta(i)) + 0.2 * std::sin(3 * g.theta(i)));
  const auto lp = fourier::lowpass(v, 10);
  CHECK(lp.removed_l2 == doctest::Approx(0.1 * std::sqrt(pi)).epsilon(1e-10));
  CHECK(lp.values[0] == doctest::Approx(2.0).epsilon(1e-12));
  const auto r = fourier::resample(v, 128);
  CHECK(r[2] == doctest::Approx(v[1]).epsilon(1e-12));
  const auto s = fourier::symmetrize(v);
  for (int i = 0; i < g.size(); ++i) CHECK(s[static_cast<std::size_t>(i)] == doctest::Approx(s[static_cast<std::size_t>(g.antipode(i))]).epsilon(1e-14));
  const auto heat = fourier::heat_smooth(v, 0.01);
  CHECK(heat[0] < v[0]);
}

TEST_CASE("serial and OpenMP kernels agree bit for bit") {
  gen::Rng rng(5);
  const AngleGrid g(1024);
  for (int trial = 0; trial < 5; ++trial) {
    const ConvexPolygon p = gen::polygon(rng, rng.integer(3, 40));
    std::vector<double> a(static_cast<std::size_t>(g.size())), b(a.size());
    kernels::polygon_support_serial(p.vertices(), g, a);
    kernels::polygon_support(p.vertices(), g, b);
    CHECK(a == b);

    std::vector<double> density(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) density[i] = rng.uniform(0.0, 2.0);
    CHECK(kernels::dictionary_moments_serial(density, g, 8) == kernels::dictionary_moments(density, g, 8));
  }
  const TriangleMesh m = mesh_body(ellipse_support(AngleGrid(128), 1.5, 1.0), 0.05);
  const auto s = kernels::p1_element_matrices_serial(m.nodes, m.triangles);
  const auto p = kernels::p1_element_matrices(m.nodes, m.triangles);
  CHECK(s.stiffness == p.stiffness);
  CHECK(s.mass == p.mass);
  CHECK(s.area == p.area);
}

TEST_CASE("P1 element matrices") {
  const std::vector<Vec2> nodes{{0, 0}, {1, 0}, {0, 1}};
  const std::vector<std::array<int, 3>> tris{{0, 1, 2}};
  const auto e = kernels::p1_element_matrices(nodes, tris);
  CHECK(e.area[0] == doctest::Approx(0.5));
  // Reference stiffness of the right triangle.
  const std::array<double, 9> k{1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5};
  for (int i = 0; i < 9; ++i) CHECK(e.stiffness[0][static_cast<std::size_t>(i)] == doctest::Approx(k[static_cast<std::size_t>(i)]));
  double mass = 0.0;
  for (double v : e.mass[0]) mass += v;
  CHECK(mass == doctest::Approx(0.5));
  CHECK(e.mass[0][0] == doctest::Approx(1.0 / 12.0));
  CHECK(e.mass[0][1] == doctest::Approx(1.0 / 24.0));
}

TEST_CASE("dictionary moments") {
  const AngleGrid g(256);
  std::vector<double> d;
  for (int i = 0; i < g.size(); ++i) d.push_back(1.0 + 0.5 * std::cos(2 * g.theta(i)) - 0.25 * std::sin(3 * g.theta(i)));
  const auto m = kernels::dictionary_moments(d, g, 8);
  REQUIRE(m.size() == 17);
  CHECK(m[0] == doctest::Approx(2 * pi));
  CHECK(m[3] == doctest::Approx(0.5 * pi));   // cos 2
  CHECK(m[6] == doctest::Approx(-0.25 * pi));  // sin 3
  CHECK(std::abs(m[1]) < 1e-12);
}
