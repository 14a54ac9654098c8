#pragma once

#include <string>
#include <vector>

#include "worn/error.hpp"
#include "worn/geometry.hpp"
#include "worn/pde.hpp"

namespace worn {

struct FlowConfig {
  Functional functional = Functional::Torsion;
  double wear = 1.0;  // the wear constant a
  double dt_init = 1e-3;
  double dt_min = 1e-9;
  double dt_max = 0.05;
  double t_end = 1.0;
  AngleGrid grid{AngleGrid::kDefaultAngles};
  double mesh_target = 0.03;  // relative to the normalized body
  int cutoff = 0;             // highest kept Fourier mode; 0 means n_angles / 4
  double convexity_eps = 1e-3;  // h + h'' > eps * mean(h)
  double entropy_tol = 1e-6;
  double cfl = 0.8;

  int effective_cutoff() const { return cutoff > 0 ? cutoff : grid.size() / 4; }
  void validate() const;  // InvalidInput
};

// gamma = a * 2 pi / |alpha|.
double flow_gamma(const FlowConfig& cfg);
double flow_alpha(const FlowConfig& cfg);

struct FlowState {
  double t = 0.0;
  std::vector<double> h;        // raw support, e^{-gamma t} h_tilde
  std::vector<double> h_tilde;  // normalized support
  double F = 0.0;
  double F_tilde = 0.0;
  double entropy = 0.0;
  double deficit = 0.0;       // of the normalized cone energy measure
  double dist_to_disk = 0.0;  // max |h_tilde - mean h_tilde|
  double mean_radius = 0.0;   // mean h_tilde
  double dt = 0.0;            // step that produced this state
  double pohozaev_residual = 0.0;
  double smoothing_removed = 0.0;
  std::vector<double> rhs;  // flow_rhs(h_tilde)

  SupportFunction raw(const AngleGrid& grid) const { return {grid, h}; }
  SupportFunction normalized(const AngleGrid& grid) const { return {grid, h_tilde}; }
};

struct StepRecord {
  double t = 0.0;
  double dt = 0.0;
  bool accepted = false;
  std::string reason;  // empty when accepted
};

struct FlowTrace {
  std::vector<FlowState> states;  // initial state plus every accepted step
  std::vector<StepRecord> log;
  bool symmetric = false;
  double max_pohozaev_residual() const;
};

class FlowFailure : public Error {
 public:
  FlowFailure(const std::string& what, FlowTrace partial) : Error(ErrorCode::StepFailure, what), partial_(std::move(partial)) {}
  const FlowTrace& partial() const noexcept { return partial_; }

 private:
  FlowTrace partial_;
};

// E = int log h_tilde dtheta.
double entropy(const SupportFunction& h_tilde);

// -a F G / |grad u|^2 at the grid angles, G = 1 / (h + h'').
std::vector<double> flow_rhs(const SupportFunction& h, const FlowConfig& cfg);

// Fields of the state recomputed from h_tilde at time t.
FlowState evaluate_state(const SupportFunction& h_tilde, double t, const FlowConfig& cfg);

struct StepResult {
  FlowState state;
  std::vector<StepRecord> attempts;
  double next_dt = 0.0;
};

// One accepted explicit Euler step of the normalized equation
// dh_tilde/dt = gamma h_tilde + rhs(h_tilde) (equivalently h <- h + dt rhs(h)
// for the raw body, by homogeneity of the rhs). Throws StepFailure when dt
// falls below dt_min.
StepResult step(const FlowState& state, double dt, const FlowConfig& cfg, bool symmetric);

// Requires a centrally symmetric, centered, smooth initial body.
FlowTrace run(const SupportFunction& h0, const FlowConfig& cfg);
// No symmetry requirement (exploratory runs).
FlowTrace run_unchecked(const SupportFunction& h0, const FlowConfig& cfg);

// Least-squares slope of log F against t.
double fitted_log_energy_slope(const FlowTrace& trace);

}  // namespace worn
