#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "worn/error.hpp"
#include "worn/flow.hpp"
#include "worn/inequalities.hpp"
#include "worn/io.hpp"
#include "worn/measures.hpp"

namespace fs = std::filesystem;
using namespace worn;

namespace {

enum Exit { kPass = 0, kVerifyFailed = 1, kInputError = 2, kSolverError = 3 };

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput:
    case ErrorCode::OriginOutside:
    case ErrorCode::NonConvex:
    case ErrorCode::GridMismatch:
    case ErrorCode::DimensionError:
    case ErrorCode::AtomsPresent:
    case ErrorCode::SymmetryViolation:
      return kInputError;
    default:
      return kSolverError;
  }
}

struct Common {
  int grid = AngleGrid::kDefaultAngles;
  double target = kDefaultMeshTarget;
  std::string out = ".";
  unsigned seed = 0;  // meshing is deterministic; recorded for provenance
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--grid", c.grid, "number of angles")->check(CLI::Range(AngleGrid::kMinAngles, 1 << 16));
  cmd->add_option("--target", c.target, "mesh target edge length")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--seed", c.seed, "run seed (recorded)");
}

fs::path prepare(const Common& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw Error(ErrorCode::InvalidInput, "cannot create output directory " + c.out);
  return dir;
}

io::Json resolution(const Common& c) { return {{"n_angles", c.grid}, {"mesh_target", c.target}, {"seed", c.seed}}; }

std::string dump(const io::Json& j) { return j.dump(2) + "\n"; }

std::string csv_of(const std::function<void(std::ostream&)>& write) {
  std::ostringstream s;
  write(s);
  return s.str();
}

// --config file.json: every key becomes --key=value ahead of the command line.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] != "--config") continue;
    std::ifstream in(args[i + 1]);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open config " + args[i + 1]);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::InvalidInput, std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "config must be a JSON object");
    std::vector<std::string> extra;
    for (const auto& [key, value] : j.items()) {
      if (value.is_array()) {
        extra.push_back("--" + key);
        for (const auto& v : value) extra.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      } else if (value.is_boolean()) {
        if (value.get<bool>()) extra.push_back("--" + key);
      } else {
        extra.push_back("--" + key + "=" + (value.is_string() ? value.get<std::string>() : value.dump()));
      }
    }
    args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
    args.insert(args.begin() + static_cast<long>(std::min(i, args.size())), extra.begin(), extra.end());
    break;
  }
  return args;
}

int cmd_solve(const Common& c, const std::string& body_src, const std::string& functional, bool dump_mesh) {
  const fs::path dir = prepare(c);
  const Body body = io::load_body(body_src, AngleGrid(c.grid));
  const BodySolve s = solve_body(body, functional_from_string(functional), c.target);
  io::Json report = io::solve_report(body, s, c.target);
  report["resolution"]["seed"] = c.seed;
  io::write_text(dir / "solve.json", dump(report));
  if (dump_mesh) io::write_text(dir / "mesh.json", dump(io::mesh_to_json(*s.field.mesh)));
  std::cout << dump(report);
  return s.trace.certified ? kPass : kVerifyFailed;
}

int cmd_measures(const Common& c, const std::string& body_src, const std::string& functional) {
  const fs::path dir = prepare(c);
  const Body body = io::load_body(body_src, AngleGrid(c.grid));
  const Functional f = functional_from_string(functional);
  const BodySolve s = solve_body(body, f, c.target);
  const SphereMeasure mu = first_variation_measure(s.trace, body);
  const std::vector<std::pair<std::string, SphereMeasure>> measures{
      {"surface_area", surface_area_measure(body)},
      {"cone_volume", cone_volume_measure(body)},
      {"first_variation", mu},
      {"cone_energy", cone_energy_measure(body, mu)},
  };
  io::Json summary;
  summary["body"] = body.name;
  summary["functional"] = std::string(to_string(f));
  summary["energy"] = s.field.energy;
  for (const auto& [kind, m] : measures) {
    io::write_text(dir / (kind + ".csv"), csv_of([&m](std::ostream& o) { io::write_measure_csv(o, m); }));
    io::Json side = io::measure_sidecar(m, kind);
    side["resolution"] = resolution(c);
    side["resolution"]["pohozaev_residual"] = s.trace.pohozaev_residual;
    if (!m.has_atoms() && kind == "cone_energy") side["deficit"] = constant_density_deficit(m);
    io::write_text(dir / (kind + ".json"), dump(side));
    summary[kind] = {{"total", m.total_variation()}, {"atoms", m.atoms.size()}};
  }
  const SphereMeasure& tau = measures.back().second;
  summary["cone_energy_over_alpha_F"] = tau.total_variation() / (std::abs(homogeneity(f)) * s.field.energy);
  if (!tau.has_atoms()) summary["deficit"] = constant_density_deficit(tau);
  summary["resolution"] = resolution(c);
  summary["resolution"]["pohozaev_residual"] = s.trace.pohozaev_residual;
  io::write_text(dir / "measures.json", dump(summary));
  std::cout << dump(summary);
  return kPass;
}

int finish_reports(const Common& c, std::vector<InequalityReport> reports, std::optional<double> tol_override,
                   const std::string& stem) {
  const fs::path dir = prepare(c);
  if (tol_override) {
    for (InequalityReport& r : reports) {
      r.tol = *tol_override;
      r.pass = r.margin >= -r.tol;
    }
  }
  io::write_text(dir / (stem + ".csv"), csv_of([&reports](std::ostream& o) { io::write_inequality_csv(o, reports); }));
  io::Json summary = io::inequality_summary(reports);
  summary["resolution"] = resolution(c);
  io::write_text(dir / (stem + ".json"), dump(summary));
  std::cout << dump(summary);
  return summary["all_pass"].get<bool>() ? kPass : kVerifyFailed;
}

int cmd_flow(const Common& c, FlowConfig cfg, const std::string& body_src, double t_end_gamma, int stride) {
  const fs::path dir = prepare(c);
  cfg.grid = AngleGrid(c.grid);
  cfg.mesh_target = c.target;
  if (t_end_gamma > 0.0) cfg.t_end = t_end_gamma / flow_gamma(cfg);
  const Body body = io::load_body(body_src, cfg.grid);
  if (body.polygon) throw Error(ErrorCode::InvalidInput, "flow needs a smooth initial body");

  auto emit = [&](const FlowTrace& trace) {
    io::write_text(dir / "trace.csv", csv_of([&trace](std::ostream& o) { io::write_trace_csv(o, trace); }));
    fs::create_directories(dir / "snapshots");
    std::vector<const FlowState*> picked;
    for (std::size_t k = 0; k < trace.states.size(); ++k) {
      if (k % static_cast<std::size_t>(stride) != 0 && k + 1 != trace.states.size()) continue;
      const FlowState& s = trace.states[k];
      picked.push_back(&s);
      io::Json j = io::body_to_json(s.normalized(cfg.grid));
      j["t"] = s.t;
      j["scale"] = std::exp(-flow_gamma(cfg) * s.t);
      char name[32];
      std::snprintf(name, sizeof name, "state_%06zu.json", k);
      io::write_text(dir / "snapshots" / name, dump(j));
    }
    std::ostringstream svg;
    io::write_svg_strip(svg, picked, cfg.grid);
    io::write_text(dir / "strip.svg", svg.str());
    io::Json summary = io::flow_summary(trace, cfg);
    summary["body"] = body.name;
    summary["resolution"]["seed"] = c.seed;
    io::write_text(dir / "flow.json", dump(summary));
    return summary;
  };

  try {
    const FlowTrace trace = run(body.support, cfg);
    std::cout << dump(emit(trace));
    return kPass;
  } catch (const FlowFailure& e) {
    if (!e.partial().states.empty()) emit(e.partial());
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Worn-stone laboratory: convex bodies, ground states, cone measures and flows"};
  app.require_subcommand(1);
  Common common;

  std::string body = "disk";
  std::string functional = "torsion";
  bool dump_mesh = false;
  auto* solve = app.add_subcommand("solve", "solve torsion or eigenvalue problem on a body");
  add_common(solve, common);
  solve->add_option("--body", body, "fixture name or body JSON file");
  solve->add_option("--functional", functional)->check(CLI::IsMember({"torsion", "eigenvalue", "eigen"}));
  solve->add_flag("--mesh", dump_mesh, "also write mesh.json");

  auto* measures = app.add_subcommand("measures", "dump S_K, V_K, mu_K and tau_K / sigma_K");
  add_common(measures, common);
  measures->add_option("--body", body, "fixture name or body JSON file");
  measures->add_option("--functional", functional)->check(CLI::IsMember({"torsion", "eigenvalue", "eigen"}));

  SuiteOptions suite;
  std::string only;
  std::optional<double> tol_override;
  auto* verify = app.add_subcommand("verify", "run the inequality suite");
  add_common(verify, common);
  verify->add_option("--bodies", suite.bodies, "bodies (default: standard corpus)");
  verify->add_option("--only", only, "keep only inequalities with this name prefix");
  verify->add_option("--tol", tol_override, "override every tolerance");

  std::vector<double> lengths = kDefaultRectLengths;
  std::vector<double> lambdas = kDefaultRectLambdas;
  std::vector<std::string> functionals{"torsion", "eigenvalue"};
  auto* rect = app.add_subcommand("logbm-rect", "rectangle log-Brunn-Minkowski tables");
  add_common(rect, common);
  rect->add_option("--lengths", lengths)->check(CLI::PositiveNumber);
  rect->add_option("--lambdas", lambdas)->check(CLI::Range(0.0, 1.0));
  rect->add_option("--functionals", functionals)->check(CLI::IsMember({"torsion", "eigenvalue", "eigen"}));
  rect->add_option("--tol", tol_override, "override every tolerance");

  FlowConfig cfg;
  double t_end_gamma = 0.0;
  int stride = 10;
  std::string flow_body = "ellipse:1.3:0.76923076923076927";
  std::string flow_functional = "torsion";
  auto* flow = app.add_subcommand("flow", "integrate the normalized worn-stone flow");
  add_common(flow, common);
  flow->add_option("--body", flow_body, "smooth centrally symmetric body");
  flow->add_option("--functional", flow_functional)->check(CLI::IsMember({"torsion", "eigenvalue", "eigen"}));
  flow->add_option("--wear", cfg.wear, "wear constant a")->check(CLI::PositiveNumber);
  flow->add_option("--t-end", cfg.t_end, "final time");
  flow->add_option("--t-end-gamma", t_end_gamma, "final time in units of 1/gamma (overrides --t-end)");
  flow->add_option("--dt-init", cfg.dt_init);
  flow->add_option("--dt-min", cfg.dt_min);
  flow->add_option("--dt-max", cfg.dt_max);
  flow->add_option("--cutoff", cfg.cutoff, "highest kept Fourier mode (0: n/4)");
  flow->add_option("--cfl", cfg.cfl);
  flow->add_option("--snapshot-stride", stride)->check(CLI::PositiveNumber);

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  // Flow defaults differ from the solve defaults.
  if (flow->parsed() && flow->count("--target") == 0) common.target = 0.03;

  try {
    if (solve->parsed()) return cmd_solve(common, body, functional, dump_mesh);
    if (measures->parsed()) return cmd_measures(common, body, functional);
    if (verify->parsed()) {
      suite.n_angles = common.grid;
      suite.mesh_target = common.target;
      if (!only.empty()) suite.only = only;
      return finish_reports(common, run_suite(suite), tol_override, "verify");
    }
    if (rect->parsed()) {
      std::vector<InequalityReport> all;
      for (const std::string& f : functionals) {
        auto rows = rectangle_logbm_table(lengths, lambdas, functional_from_string(f));
        std::move(rows.begin(), rows.end(), std::back_inserter(all));
      }
      return finish_reports(common, std::move(all), tol_override, "logbm_rect");
    }
    if (flow->parsed()) {
      cfg.functional = functional_from_string(flow_functional);
      return cmd_flow(common, cfg, flow_body, t_end_gamma, stride);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  }
  return kInputError;
}
