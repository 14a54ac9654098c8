#include "worn/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "worn/body.hpp"
#include "worn/fourier.hpp"
#include "worn/measures.hpp"

namespace worn {

namespace {

constexpr double kPi = std::numbers::pi;

struct Solved {
  double energy = 0.0;
  double residual = 0.0;
  std::vector<double> rhs;
  SphereMeasure tau;
};

Solved solve_flow_body(const SupportFunction& h, const FlowConfig& cfg) {
  h.require_positive();
  h.require_convex();
  const Body body = body_from_support("flow", h);
  const BodySolve s = solve_body(body, cfg.functional, cfg.mesh_target);
  const SphereMeasure mu = first_variation_measure(s.trace, h);
  const auto r = curvature_radius(h);
  Solved out{s.field.energy, s.trace.pohozaev_residual, std::vector<double>(r.size()), cone_energy_measure(h, mu)};
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double g = s.trace.grid_grad_sq[i];
    if (!(g > 0.0)) throw Error(ErrorCode::HopfViolation, "vanishing boundary gradient");
    out.rhs[i] = -cfg.wear * s.field.energy / (r[i] * g);
  }
  return out;
}

std::string describe(const char* what, double t, double dt) {
  std::ostringstream msg;
  msg << what << " at t = " << t << ", dt = " << dt;
  return msg.str();
}

}  // namespace

void FlowConfig::validate() const {
  if (!(wear > 0.0)) throw Error(ErrorCode::InvalidInput, "wear constant must be positive");
  if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max)) {
    throw Error(ErrorCode::InvalidInput, "need 0 < dt_min <= dt_init <= dt_max");
  }
  if (!(t_end > 0.0)) throw Error(ErrorCode::InvalidInput, "t_end must be positive");
  if (!(mesh_target > 0.0)) throw Error(ErrorCode::InvalidInput, "mesh target must be positive");
  if (cutoff < 0 || cutoff > grid.size() / 2) throw Error(ErrorCode::InvalidInput, "cutoff out of range");
  if (effective_cutoff() < 2) throw Error(ErrorCode::InvalidInput, "cutoff must keep mode 2");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorCode::InvalidInput, "cfl must lie in (0, 1]");
  if (!(convexity_eps > 0.0) || !(entropy_tol >= 0.0)) throw Error(ErrorCode::InvalidInput, "gate tolerances");
}

double flow_alpha(const FlowConfig& cfg) { return homogeneity(cfg.functional); }

double flow_gamma(const FlowConfig& cfg) { return cfg.wear * 2.0 * kPi / std::abs(flow_alpha(cfg)); }

double FlowTrace::max_pohozaev_residual() const {
  double r = 0.0;
  for (const FlowState& s : states) r = std::max(r, s.pohozaev_residual);
  return r;
}

double entropy(const SupportFunction& h_tilde) {
  h_tilde.require_positive();
  double s = 0.0;
  for (int i = 0; i < h_tilde.size(); ++i) s += std::log(h_tilde[i]);
  return s * h_tilde.grid().spacing();
}

std::vector<double> flow_rhs(const SupportFunction& h, const FlowConfig& cfg) { return solve_flow_body(h, cfg).rhs; }

FlowState evaluate_state(const SupportFunction& h_tilde, double t, const FlowConfig& cfg) {
  const Solved s = solve_flow_body(h_tilde, cfg);
  const double gamma = flow_gamma(cfg);
  const double shrink = std::exp(-gamma * t);
  FlowState st;
  st.t = t;
  st.h_tilde.assign(h_tilde.values().begin(), h_tilde.values().end());
  st.h.resize(st.h_tilde.size());
  for (std::size_t i = 0; i < st.h.size(); ++i) st.h[i] = shrink * st.h_tilde[i];
  st.F_tilde = s.energy;
  st.F = std::exp(-flow_alpha(cfg) * gamma * t) * s.energy;
  st.entropy = entropy(h_tilde);
  st.deficit = constant_density_deficit(s.tau);
  st.mean_radius = h_tilde.mean();
  for (double v : st.h_tilde) st.dist_to_disk = std::max(st.dist_to_disk, std::abs(v - st.mean_radius));
  st.pohozaev_residual = s.residual;
  // rhs(h) = e^{-gamma t} rhs(h_tilde) by homogeneity; stored for h_tilde.
  st.rhs = s.rhs;
  return st;
}

StepResult step(const FlowState& state, double dt, const FlowConfig& cfg, bool symmetric) {
  const double gamma = flow_gamma(cfg);
  const int cutoff = cfg.effective_cutoff();
  const SupportFunction cur(cfg.grid, state.h_tilde);
  const auto r = curvature_radius(cur);
  std::vector<double> rhs = symmetric ? fourier::symmetrize(state.rhs) : state.rhs;

  // Explicit Euler on the curvature term is stable for modes up to the cutoff
  // when dt * D * (c^2 - 1) <= 2, D = |rhs| / r.
  double d_max = 0.0;
  for (std::size_t i = 0; i < rhs.size(); ++i) d_max = std::max(d_max, std::abs(rhs[i]) / r[i]);
  const double cap = cfg.cfl * 2.0 / (d_max * (static_cast<double>(cutoff) * cutoff - 1.0));
  dt = std::min({dt, cap, cfg.dt_max});

  StepResult out;
  const double mean = cur.mean();
  while (true) {
    if (dt < cfg.dt_min) throw Error(ErrorCode::StepFailure, describe("dt below dt_min", state.t, dt));
    std::vector<double> cand(rhs.size());
    for (std::size_t i = 0; i < cand.size(); ++i) cand[i] = state.h_tilde[i] + dt * (gamma * state.h_tilde[i] + rhs[i]);
    if (symmetric) cand = fourier::symmetrize(cand);
    fourier::LowpassResult lp = fourier::lowpass(cand, cutoff);
    const SupportFunction next(cfg.grid, std::move(lp.values));

    const char* reason = nullptr;
    if (!next.is_positive()) {
      reason = "positivity";
    } else {
      const auto rn = curvature_radius(next);
      if (*std::min_element(rn.begin(), rn.end()) <= cfg.convexity_eps * mean) {
        reason = "convexity";
      } else if (entropy(next) > state.entropy + cfg.entropy_tol) {
        reason = "entropy";
      }
    }
    if (reason) {
      out.attempts.push_back({state.t, dt, false, reason});
      dt *= 0.5;
      continue;
    }
    out.attempts.push_back({state.t, dt, true, ""});
    out.state = evaluate_state(next, state.t + dt, cfg);
    out.state.dt = dt;
    out.state.smoothing_removed = lp.removed_l2;
    out.next_dt = std::min(1.5 * dt, cfg.dt_max);
    return out;
  }
}

FlowTrace run_unchecked(const SupportFunction& h0, const FlowConfig& cfg) {
  cfg.validate();
  require_same_grid(h0.grid(), cfg.grid);
  h0.require_positive();
  h0.require_convex();
  FlowTrace trace;
  trace.symmetric = is_centrally_symmetric(h0);
  trace.states.push_back(evaluate_state(h0, 0.0, cfg));
  double dt = cfg.dt_init;
  while (trace.states.back().t < cfg.t_end * (1.0 - 1e-12)) {
    const FlowState& cur = trace.states.back();
    try {
      StepResult res = step(cur, std::min(dt, cfg.t_end - cur.t), cfg, trace.symmetric);
      trace.log.insert(trace.log.end(), res.attempts.begin(), res.attempts.end());
      dt = res.next_dt;
      trace.states.push_back(std::move(res.state));
    } catch (const Error& e) {
      throw FlowFailure(e.what(), std::move(trace));
    }
  }
  return trace;
}

FlowTrace run(const SupportFunction& h0, const FlowConfig& cfg) {
  if (!is_centrally_symmetric(h0)) throw Error(ErrorCode::SymmetryViolation, "initial body is not centrally symmetric");
  return run_unchecked(h0, cfg);
}

double fitted_log_energy_slope(const FlowTrace& trace) {
  const std::size_t n = trace.states.size();
  if (n < 2) throw Error(ErrorCode::InvalidInput, "need at least two states");
  double st = 0.0, sy = 0.0;
  for (const FlowState& s : trace.states) {
    st += s.t;
    sy += std::log(s.F);
  }
  st /= static_cast<double>(n);
  sy /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (const FlowState& s : trace.states) {
    num += (s.t - st) * (std::log(s.F) - sy);
    den += (s.t - st) * (s.t - st);
  }
  return num / den;
}

}  // namespace worn
