#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <optional>

#include "generators.hpp"
#include "oracles.hpp"
#include "worn/body.hpp"
#include "worn/error.hpp"
#include "worn/flow.hpp"

using namespace worn;
using oracle::pi;

namespace {

FlowConfig config(int n, double target, double gamma_t) {
  FlowConfig cfg;
  cfg.grid = AngleGrid(n);
  cfg.mesh_target = target;
  cfg.t_end = gamma_t / flow_gamma(cfg);
  return cfg;
}

double relative_roundness(const FlowState& s) {
  double dev = 0.0;
  for (double v : s.h_tilde) dev = std::max(dev, std::abs(v - s.mean_radius));
  return dev / s.mean_radius;
}

std::optional<ErrorCode> code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("flow rhs on disks") {
  FlowConfig cfg = config(128, 0.03, 1.0);
  CHECK(flow_gamma(cfg) == doctest::Approx(pi / 2));
  for (double radius : {1.0, 2.0}) {
    cfg.mesh_target = 0.03 * radius;
    const auto rhs = flow_rhs(SupportFunction::constant(cfg.grid, radius), cfg);
    for (double v : rhs) CHECK(v == doctest::Approx(-pi / 2 * radius).epsilon(0.01));
  }
  cfg.wear = 2.0;
  cfg.mesh_target = 0.03;
  const auto rhs = flow_rhs(SupportFunction::constant(cfg.grid, 1.0), cfg);
  CHECK(rhs[0] == doctest::Approx(-flow_gamma(cfg)).epsilon(0.01));
}

TEST_CASE("flow rhs is symmetric for symmetric bodies") {
  const FlowConfig cfg = config(128, 0.03, 1.0);
  const auto rhs = flow_rhs(ellipse_support(cfg.grid, 1.3, 1.0 / 1.3), cfg);
  for (int i = 0; i < 64; ++i) {
    CHECK(rhs[static_cast<std::size_t>(i)] < 0.0);
    CHECK(rhs[static_cast<std::size_t>(i)] == doctest::Approx(rhs[static_cast<std::size_t>(i + 64)]).epsilon(0.01));
  }
}

TEST_CASE("entropy") {
  const AngleGrid g(64);
  CHECK(entropy(SupportFunction::constant(g, 2.0)) == doctest::Approx(2 * pi * std::log(2.0)).epsilon(1e-12));
  CHECK(entropy(SupportFunction::constant(g, 1.0)) == doctest::Approx(0.0));
}

TEST_CASE("disk stays a disk") {
  const FlowConfig cfg = config(128, 0.03, 0.02);
  const FlowTrace tr = run(SupportFunction::constant(cfg.grid, 1.0), cfg);
  REQUIRE(tr.states.size() > 5);
  for (std::size_t k = 1; k < tr.states.size(); ++k) {
    const FlowState& a = tr.states[k - 1];
    const FlowState& b = tr.states[k];
    CHECK(relative_roundness(b) <= 1e-6);
    CHECK(b.t > a.t);
    CHECK(b.F < a.F);
    for (std::size_t i = 0; i < b.h.size(); ++i) CHECK(b.h[i] < a.h[i]);
    // The raw and normalized bodies are tied exactly.
    CHECK(b.h[7] == doctest::Approx(std::exp(-flow_gamma(cfg) * b.t) * b.h_tilde[7]).epsilon(1e-14));
  }
  CHECK(tr.states.back().t == doctest::Approx(cfg.t_end).epsilon(1e-12));
}

TEST_CASE("ellipse steps keep symmetry, entropy and normalized energy") {
  const FlowConfig cfg = config(128, 0.05, 0.02);
  const FlowTrace tr = run(ellipse_support(cfg.grid, 1.3, 1.0 / 1.3), cfg);
  CHECK(tr.symmetric);
  const double f0 = tr.states.front().F_tilde;
  const double tol = 0.01 + 3 * tr.max_pohozaev_residual();
  for (std::size_t k = 1; k < tr.states.size(); ++k) {
    const FlowState& s = tr.states[k];
    const SupportFunction h = s.normalized(cfg.grid);
    CHECK(symmetry_defect(h) <= 1e-10 * s.mean_radius);
    CHECK(h.is_convex());
    CHECK(s.entropy <= tr.states[k - 1].entropy + cfg.entropy_tol);
    CHECK(std::abs(s.F_tilde / f0 - 1.0) <= tol);
  }
  int accepted = 0;
  for (const auto& rec : tr.log) accepted += rec.accepted;
  CHECK(accepted == static_cast<int>(tr.states.size()) - 1);
}

TEST_CASE("property: random symmetric bodies pass every gate") {
  gen::Rng rng(21);
  const FlowConfig cfg = config(128, 0.05, 0.005);
  for (int trial = 0; trial < 2; ++trial) {
    const SupportFunction h0 = gen::smooth_body(rng, cfg.grid, true);
    FlowConfig c = cfg;
    c.mesh_target = cfg.mesh_target * h0.mean();
    const FlowTrace tr = run(h0, c);
    for (std::size_t k = 1; k < tr.states.size(); ++k) {
      CHECK(tr.states[k].t > tr.states[k - 1].t);
      CHECK(tr.states[k].normalized(c.grid).is_convex());
      CHECK(tr.states[k].entropy <= tr.states[k - 1].entropy + c.entropy_tol);
      CHECK(tr.states[k].F < tr.states[k - 1].F);
    }
  }
}

TEST_CASE("eigenvalue flow") {
  FlowConfig cfg = config(128, 0.05, 0.01);
  cfg.functional = Functional::Eigenvalue;
  cfg.t_end = 0.01 / flow_gamma(cfg);
  CHECK(flow_alpha(cfg) == -2.0);
  CHECK(flow_gamma(cfg) == doctest::Approx(pi));
  const FlowTrace tr = run(ellipse_support(cfg.grid, 1.3, 1.0 / 1.3), cfg);
  const double tol = 0.01 + 3 * tr.max_pohozaev_residual();
  for (std::size_t k = 1; k < tr.states.size(); ++k) {
    CHECK(tr.states[k].F > tr.states[k - 1].F);  // the body shrinks
    CHECK(std::abs(tr.states[k].F_tilde / tr.states[0].F_tilde - 1.0) <= tol);
  }
}

TEST_CASE("log energy slope on a disk") {
  const FlowConfig cfg = config(128, 0.05, 0.05);
  const FlowTrace tr = run(SupportFunction::constant(cfg.grid, 1.0), cfg);
  const double expected = -flow_alpha(cfg) * flow_gamma(cfg);
  CHECK(fitted_log_energy_slope(tr) == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("flow errors") {
  FlowConfig cfg = config(64, 0.05, 1.0);
  const SupportFunction disk = SupportFunction::constant(cfg.grid, 1.0);

  FlowConfig bad = cfg;
  bad.dt_min = 1.0;
  CHECK(code_of([&] { run(disk, bad); }) == ErrorCode::InvalidInput);
  bad = cfg;
  bad.t_end = 0.0;
  CHECK(code_of([&] { run(disk, bad); }) == ErrorCode::InvalidInput);
  bad = cfg;
  bad.cutoff = 1;
  CHECK(code_of([&] { run(disk, bad); }) == ErrorCode::InvalidInput);
  bad = cfg;
  bad.wear = 0.0;
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::InvalidInput);

  const SupportFunction shifted = translated(ellipse_support(cfg.grid, 1.3, 1.0 / 1.3), {0.1, 0.0});
  CHECK(code_of([&] { run(shifted, cfg); }) == ErrorCode::SymmetryViolation);
  CHECK(code_of([&] { run(SupportFunction::constant(AngleGrid(32), 1.0), cfg); }) == ErrorCode::GridMismatch);
}

TEST_CASE("step failure keeps the partial trace") {
  FlowConfig cfg = config(64, 0.05, 1.0);
  // The stability cap is far below this floor, so the first step cannot be taken.
  cfg.dt_min = cfg.dt_init = cfg.dt_max = 0.04;
  bool caught = false;
  try {
    run(SupportFunction::constant(cfg.grid, 1.0), cfg);
  } catch (const FlowFailure& f) {
    caught = true;
    CHECK(f.code() == ErrorCode::StepFailure);
    REQUIRE(f.partial().states.size() == 1);
    CHECK(f.partial().states[0].t == 0.0);
  }
  CHECK(caught);
}

TEST_CASE("asymmetric bodies run unchecked") {
  const FlowConfig cfg = config(64, 0.05, 0.002);
  const SupportFunction shifted = translated(ellipse_support(cfg.grid, 1.3, 1.0 / 1.3), {0.1, 0.0});
  const FlowTrace tr = run_unchecked(shifted, cfg);
  CHECK_FALSE(tr.symmetric);
  CHECK(tr.states.size() > 1);
  CHECK(tr.states.back().F < tr.states.front().F);
}
