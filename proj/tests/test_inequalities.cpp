#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "worn/error.hpp"
#include "worn/inequalities.hpp"

using namespace worn;
using oracle::pi;

namespace {

const AngleGrid kGrid(256);

BodyAnalysis analysis(const char* name, double target = 0.03) { return BodyAnalysis(make_fixture(name, kGrid), target); }

}  // namespace

TEST_CASE("Saint-Venant") {
  auto disk = analysis("disk", 0.02);
  const auto r = saint_venant(disk);
  CHECK(r.pass);
  CHECK(r.near_equality);
  CHECK(r.rhs == doctest::Approx(pi / 8));

  auto sq = analysis("square");
  const auto s = saint_venant(sq);
  CHECK(s.lhs == doctest::Approx(0.03514).epsilon(0.005));
  CHECK(s.rhs == doctest::Approx(1.0 / (8 * pi)));
  CHECK(s.margin > 0.0);
  CHECK_FALSE(s.near_equality);

  auto e = analysis("ellipse:2:1");
  CHECK(saint_venant(e).margin > 0.0);
}

TEST_CASE("Faber-Krahn") {
  auto disk = analysis("disk", 0.02);
  CHECK(faber_krahn(disk).near_equality);
  auto sq = analysis("square");
  const auto s = faber_krahn(sq);
  CHECK(s.lhs == doctest::Approx(oracle::j01() * oracle::j01() * pi).epsilon(1e-12));
  CHECK(s.margin == doctest::Approx(2 * pi * pi - oracle::j01() * oracle::j01() * pi).epsilon(0.05));
  auto rect = analysis("rect:4");
  const auto r = faber_krahn(rect);
  CHECK(r.rhs == doctest::Approx(pi * pi * (1 + 1.0 / 16) * 4).epsilon(0.005));
  CHECK(r.margin > 0.5 * r.rhs);
}

TEST_CASE("affine surface area") {
  CHECK(affine2_surface_area(make_fixture("disk", kGrid)) == doctest::Approx(2 * pi).epsilon(1e-12));
  const auto e = affine2_isoperimetric(make_fixture("ellipse:2:1", kGrid));
  CHECK(e.pass);
  CHECK(e.near_equality);
  // h = 1 + 0.05 cos 3 theta is smooth, convex and not an ellipse.
  const Body wavy = make_fixture("fourier:1,0,0,0,0,0.05,0", kGrid);
  const auto w = affine2_isoperimetric(wavy);
  CHECK(w.pass);
  CHECK(w.margin > 1e-4);
  CHECK_FALSE(w.near_equality);
  CHECK(affine2_surface_area(make_fixture("square", kGrid)) == 0.0);
}

TEST_CASE("BFL isoperimetric-type inequality") {
  for (const char* disk : {"disk", "disk:2.5"}) {
    auto d = analysis(disk, 0.02 * (disk[4] ? 2.5 : 1.0));
    for (Functional f : {Functional::Torsion, Functional::Eigenvalue}) {
      const auto r = bfl_isoperimetric(d, f);
      INFO(disk << " " << to_string(f));
      CHECK(r.near_equality);
      CHECK(r.pass);
    }
  }
  // Lambda(B)^4 = 1 / (32 pi) from the ball oracle.
  const BallOracle b = ball_oracle(2, 1.0);
  CHECK(std::pow(b.torsion, 0.75) / b.grad_sq_torsion == doctest::Approx(std::pow(1.0 / (32 * pi), 0.25)).epsilon(1e-12));
  for (const char* name : {"ellipse:1.5:1", "smoothsquare"}) {
    auto k = analysis(name);
    for (Functional f : {Functional::Torsion, Functional::Eigenvalue}) {
      const auto r = bfl_isoperimetric(k, f);
      INFO(name << " " << to_string(f));
      CHECK(r.margin > 0.0);
    }
  }
}

TEST_CASE("Blaschke-Santalo") {
  const auto d = blaschke_santalo(make_fixture("disk", kGrid));
  CHECK(d.lhs == doctest::Approx(pi * pi).epsilon(1e-12));
  CHECK(d.near_equality);
  const auto sq = blaschke_santalo(make_fixture("square:2", kGrid));
  CHECK(sq.lhs == doctest::Approx(8.0).epsilon(1e-12));
  // Centering happens inside.
  const Body shifted = body_from_support("shifted", translated(ellipse_support(kGrid, 1.5, 1.0), {0.2, 0.1}));
  const auto e = blaschke_santalo(shifted);
  CHECK(e.lhs == doctest::Approx(pi * pi).epsilon(1e-9));
  CHECK(e.pass);
}

TEST_CASE("Brunn-Minkowski first variation") {
  auto disk = analysis("disk", 0.02);
  auto disk2 = analysis("disk", 0.02);
  for (Functional f : {Functional::Torsion, Functional::Eigenvalue}) {
    const auto r = bm_first_variation(disk, disk2, f);
    CHECK(r.near_equality);
    CHECK(r.pass);
  }
  auto sq = analysis("square");
  auto e = analysis("ellipse:1.5:1");
  for (Functional f : {Functional::Torsion, Functional::Eigenvalue}) {
    CHECK(bm_first_variation(disk, sq, f).margin > 0.0);
    CHECK(bm_first_variation(e, disk, f).margin > 0.0);
  }
}

TEST_CASE("eigenvalue width bound") {
  auto disk = analysis("disk");
  const auto d = eigen_width_bound(disk);
  CHECK(d.lhs == doctest::Approx(pi * pi / 4));
  CHECK(d.rhs == doctest::Approx(oracle::j01() * oracle::j01()).epsilon(0.005));
  auto thin = analysis("ellipse:4:0.5", 0.02);
  CHECK(eigen_width_bound(thin).pass);
  auto rect = analysis("rect:2");
  const auto r = eigen_width_bound(rect);
  CHECK(r.lhs == doctest::Approx(pi * pi));
  CHECK(r.rhs == doctest::Approx(pi * pi * 1.25).epsilon(0.005));
}

TEST_CASE("Guan-Ni log inequality") {
  for (const char* name : {"disk", "disk:0.5", "disk:2"}) {
    const auto v = guan_ni_log_volume(make_fixture(name, kGrid));
    INFO(name);
    CHECK(std::abs(v.margin) < 1e-12);
    CHECK(v.near_equality);
  }
  auto disk = analysis("disk", 0.02);
  CHECK(guan_ni_log_torsion(disk).near_equality);
  const auto sq = guan_ni_log_volume(make_fixture("square", kGrid));
  CHECK(sq.margin > 0.05);
  auto sqa = analysis("square");
  CHECK(guan_ni_log_torsion(sqa).margin > sq.margin);
  const Body lopsided = body_from_support("lopsided", translated(ellipse_support(kGrid, 1.5, 1.0), {0.2, 0.0}));
  bool threw = false;
  try {
    guan_ni_log_volume(lopsided);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::SymmetryViolation;
  }
  CHECK(threw);
}

TEST_CASE("rectangle formulas against independent series") {
  for (double l : {0.5, 1.0, 2.0, 4.0, 0.3}) {
    INFO("l = " << l);
    const auto t = rectangle_torsion(l);
    // Stopping at term < 1e-14 sum leaves a tail near 1e-12 of the sum, which
    // the cancellation against l^3 / 12 amplifies for long rectangles.
    CHECK(t.value == doctest::Approx(oracle::rect_torsion_swapped(l)).epsilon(1e-10));
    CHECK(t.value == doctest::Approx(oracle::rect_torsion_double_series(l, 1.0)).epsilon(1e-6));
    CHECK(t.terms > 0);
  }
  CHECK(rectangle_eigenvalue(2.0) == doctest::Approx(pi * pi * 1.25));
}

TEST_CASE("rectangle log-BM table") {
  const auto eig = rectangle_logbm_table({1.0, 4.0}, {0.5}, Functional::Eigenvalue);
  REQUIRE(eig.size() == 4);
  // l1 = 1, l2 = 4, lambda = 1/2: pi^2 (1.25) <= (2 pi^2)^{1/2} (pi^2 17/16)^{1/2}.
  const auto& row = eig[1];
  CHECK(row.lhs == doctest::Approx(pi * pi * 1.25));
  CHECK(row.rhs == doctest::Approx(std::sqrt(2 * pi * pi * pi * pi * 17.0 / 16.0)));
  CHECK(row.pass);
  const auto tor = rectangle_logbm_table({1.0, 4.0}, {0.5}, Functional::Torsion);
  CHECK(tor[1].rhs == doctest::Approx(rectangle_torsion(2.0).value));
  CHECK(tor[1].margin > 0.0);

  for (Functional f : {Functional::Torsion, Functional::Eigenvalue}) {
    const auto table = rectangle_logbm_table(kDefaultRectLengths, kDefaultRectLambdas, f);
    CHECK(table.size() == 48);
    for (const auto& r : table) {
      CHECK(r.margin >= -1e-9);
      CHECK(r.near_equality == (r.body == r.other));
    }
  }
}

TEST_CASE("property: rectangle margins are invariant under (l1, l2, lambda) -> (l2, l1, 1 - lambda)") {
  const std::vector<double> lengths{0.5, 0.8, 1.0, 2.0, 3.3, 4.0};
  const std::vector<double> lambdas{0.1, 0.25, 0.5, 0.75, 0.9};
  for (Functional f : {Functional::Torsion, Functional::Eigenvalue}) {
    const auto t = rectangle_logbm_table(lengths, lambdas, f);
    const std::size_t nl = lengths.size(), nw = lambdas.size();
    for (std::size_t i = 0; i < nl; ++i) {
      for (std::size_t j = 0; j < nl; ++j) {
        for (std::size_t k = 0; k < nw; ++k) {
          const auto& a = t[(i * nl + j) * nw + k];
          const auto& b = t[(j * nl + i) * nw + (nw - 1 - k)];
          CHECK(a.margin == doctest::Approx(b.margin).epsilon(1e-12).scale(a.rhs));
        }
      }
    }
  }
}

TEST_CASE("suite filter and ordering") {
  SuiteOptions opt;
  opt.bodies = {"disk", "square"};
  opt.only = "blaschke";
  const auto r = run_suite(opt);
  REQUIRE(r.size() == 2);
  CHECK(r[0].body == "disk");
  CHECK(r[1].body == "square");
  CHECK(expected_equality(r[0]));
  CHECK_FALSE(expected_equality(r[1]));
}
