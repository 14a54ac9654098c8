#include "worn/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "worn/error.hpp"
#include "worn/fourier.hpp"

namespace worn::io {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& problem) {
  throw Error(ErrorCode::InvalidInput, "field '" + field + "': " + problem);
}

double finite_number(const nlohmann::json& v, const std::string& field) {
  if (!v.is_number()) field_error(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) field_error(field, "must be finite");
  return x;
}

Body support_body(const nlohmann::json& j, const AngleGrid& grid, std::string name) {
  if (!j.contains("n_angles")) field_error("n_angles", "missing");
  const auto& n_field = j["n_angles"];
  if (!n_field.is_number_integer()) field_error("n_angles", "expected an integer");
  const int n = n_field.get<int>();
  if (n < AngleGrid::kMinAngles || n % 2 != 0) field_error("n_angles", "must be even and at least " + std::to_string(AngleGrid::kMinAngles));
  const auto& values = j["values"];
  if (!values.is_array()) field_error("values", "expected an array");
  if (static_cast<int>(values.size()) != n) {
    field_error("values", "has " + std::to_string(values.size()) + " entries, n_angles is " + std::to_string(n));
  }
  std::vector<double> h;
  h.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string field = "values[" + std::to_string(i) + "]";
    const double x = finite_number(values[i], field);
    if (!(x > 0.0)) field_error(field, "support value must be positive (origin inside the body)");
    h.push_back(x);
  }
  if (n != grid.size()) h = fourier::resample(h, grid.size());
  SupportFunction s(grid, std::move(h));
  try {
    s.require_convex();
  } catch (const Error& e) {
    field_error("values", std::string("not a convex support function (") + e.what() + ")");
  }
  return body_from_support(std::move(name), std::move(s));
}

Body polygon_body(const nlohmann::json& j, const AngleGrid& grid, std::string name) {
  const auto& vs = j["vertices"];
  if (!vs.is_array() || vs.size() < 3) field_error("vertices", "expected an array of at least 3 points");
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string field = "vertices[" + std::to_string(i) + "]";
    if (!vs[i].is_array() || vs[i].size() != 2) field_error(field, "expected [x, y]");
    pts.emplace_back(finite_number(vs[i][0], field + "[0]"), finite_number(vs[i][1], field + "[1]"));
  }
  try {
    ConvexPolygon p(std::move(pts));
    if (!p.contains_origin_strictly()) field_error("vertices", "origin must lie strictly inside");
    return body_from_polygon(std::move(name), std::move(p), grid);
  } catch (const Error& e) {
    if (std::string_view(e.what()).find("field '") != std::string_view::npos) throw;
    field_error("vertices", e.what());
  }
}

Json number_array(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Body body_from_json(const nlohmann::json& j, const AngleGrid& grid, std::string name) {
  if (!j.is_object()) field_error("<root>", "expected an object");
  if (j.contains("name")) {
    if (!j["name"].is_string()) field_error("name", "expected a string");
    name = j["name"].get<std::string>();
  }
  const bool has_values = j.contains("values");
  const bool has_vertices = j.contains("vertices");
  if (has_values == has_vertices) field_error("<root>", "exactly one of 'values' or 'vertices' is required");
  return has_values ? support_body(j, grid, std::move(name)) : polygon_body(j, grid, std::move(name));
}

Body read_body_file(const std::filesystem::path& path, const AngleGrid& grid) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, path.string() + ": " + e.what());
  }
  return body_from_json(j, grid, path.stem().string());
}

Body load_body(std::string_view source, const AngleGrid& grid) {
  const std::filesystem::path p{std::string(source)};
  if (std::filesystem::is_regular_file(p) || p.extension() == ".json") return read_body_file(p, grid);
  return make_fixture(source, grid);
}

Json body_to_json(const SupportFunction& h) {
  Json j;
  j["n_angles"] = h.size();
  j["values"] = number_array(h.values());
  return j;
}

Json mesh_to_json(const TriangleMesh& mesh) {
  Json j;
  Json nodes = Json::array();
  for (const Vec2& p : mesh.nodes) nodes.push_back({p.x(), p.y()});
  Json tris = Json::array();
  for (const auto& t : mesh.triangles) tris.push_back({t[0], t[1], t[2]});
  Json edges = Json::array();
  for (const BoundaryEdge& e : mesh.boundary) edges.push_back({e.from, e.to});
  j["nodes"] = std::move(nodes);
  j["triangles"] = std::move(tris);
  j["boundary_edges"] = std::move(edges);
  j["resolution"] = {{"target_h", mesh.target_h},
                     {"node_count", mesh.node_count()},
                     {"min_angle_deg", mesh.min_angle_deg()},
                     {"max_edge", mesh.max_edge()}};
  return j;
}

Json solve_report(const Body& body, const BodySolve& s, double mesh_target) {
  Json j;
  j["body"] = body.name;
  j["functional"] = std::string(to_string(s.field.kind));
  j["energy"] = s.field.energy;
  j["residual"] = s.field.diagnostics.residual;
  j["iterations"] = s.field.diagnostics.iterations;
  j["pohozaev_residual"] = s.trace.pohozaev_residual;
  j["certified"] = s.trace.certified;
  j["grad_sq_integral"] = s.trace.grad_sq_integral;
  j["pohozaev_integral"] = s.trace.pohozaev_integral;
  j["resolution"] = {{"n_angles", body.grid().size()},
                     {"mesh_target", mesh_target},
                     {"unknowns", s.field.diagnostics.unknowns},
                     {"nodes", s.field.mesh->node_count()},
                     {"min_angle_deg", s.field.diagnostics.min_angle_deg}};
  return j;
}

void write_measure_csv(std::ostream& out, const SphereMeasure& m) {
  out << "theta,density\n";
  for (int i = 0; i < m.grid.size(); ++i) {
    out << format_number(m.grid.theta(i)) << ',' << format_number(m.density[static_cast<std::size_t>(i)]) << '\n';
  }
}

Json measure_sidecar(const SphereMeasure& m, std::string_view kind) {
  Json j;
  j["kind"] = std::string(kind);
  Json atoms = Json::array();
  for (const Atom& a : m.atoms) atoms.push_back({{"angle", a.angle}, {"mass", a.mass}});
  j["atoms"] = std::move(atoms);
  j["total"] = m.total_variation();
  j["n_angles"] = m.grid.size();
  return j;
}

void write_inequality_csv(std::ostream& out, const std::vector<InequalityReport>& reports) {
  out << "name,body,lhs,rhs,margin,tol,pass,functional,other,lambda,near_equality,n_angles,mesh_target,pohozaev_residual,series_terms\n";
  for (const InequalityReport& r : reports) {
    out << r.name << ',' << r.body << ',' << format_number(r.lhs) << ',' << format_number(r.rhs) << ','
        << format_number(r.margin) << ',' << format_number(r.tol) << ',' << (r.pass ? "true" : "false") << ','
        << r.functional << ',' << r.other << ',' << format_number(r.lambda) << ',' << (r.near_equality ? "true" : "false")
        << ',' << r.n_angles << ',' << format_number(r.mesh_target) << ',' << format_number(r.pohozaev_residual) << ','
        << r.series_terms << '\n';
  }
}

Json inequality_summary(const std::vector<InequalityReport>& reports) {
  Json j;
  int failed = 0;
  Json equality = Json::array();
  Json failures = Json::array();
  for (const InequalityReport& r : reports) {
    std::string id = r.name + "/" + r.body;
    if (!r.functional.empty()) id += "/" + r.functional;
    if (!r.other.empty()) id += "/" + r.other;
    if (r.name == "rectangle_logbm") id += "@" + format_number(r.lambda);
    if (!r.pass) {
      ++failed;
      failures.push_back(id);
    }
    if (r.near_equality) equality.push_back(id);
  }
  j["count"] = reports.size();
  j["failed"] = failed;
  j["all_pass"] = failed == 0;
  j["failures"] = std::move(failures);
  j["near_equality"] = std::move(equality);
  return j;
}

void write_trace_csv(std::ostream& out, const FlowTrace& trace) {
  out << "t,F,F_tilde,entropy,deficit,dist_to_disk,dt,pohozaev_residual\n";
  for (const FlowState& s : trace.states) {
    out << format_number(s.t) << ',' << format_number(s.F) << ',' << format_number(s.F_tilde) << ','
        << format_number(s.entropy) << ',' << format_number(s.deficit) << ',' << format_number(s.dist_to_disk) << ','
        << format_number(s.dt) << ',' << format_number(s.pohozaev_residual) << '\n';
  }
}

Json flow_summary(const FlowTrace& trace, const FlowConfig& cfg) {
  Json j;
  j["functional"] = std::string(to_string(cfg.functional));
  j["wear"] = cfg.wear;
  j["gamma"] = flow_gamma(cfg);
  j["alpha"] = flow_alpha(cfg);
  j["t_end"] = cfg.t_end;
  j["accepted_steps"] = trace.states.size() - 1;
  int rejected = 0;
  for (const StepRecord& r : trace.log) rejected += r.accepted ? 0 : 1;
  j["rejected_steps"] = rejected;
  j["symmetric"] = trace.symmetric;
  if (trace.states.size() >= 2) j["log_energy_slope"] = fitted_log_energy_slope(trace);
  const FlowState& first = trace.states.front();
  const FlowState& last = trace.states.back();
  j["final"] = {{"t", last.t},
                {"F_tilde_drift", std::abs(last.F_tilde - first.F_tilde) / first.F_tilde},
                {"deficit", last.deficit},
                {"dist_to_disk", last.dist_to_disk},
                {"mean_radius", last.mean_radius}};
  j["resolution"] = {{"n_angles", cfg.grid.size()},
                     {"mesh_target", cfg.mesh_target},
                     {"cutoff", cfg.effective_cutoff()},
                     {"max_pohozaev_residual", trace.max_pohozaev_residual()}};
  return j;
}

void write_svg_strip(std::ostream& out, const std::vector<const FlowState*>& states, const AngleGrid& grid) {
  constexpr double cell = 120.0;
  double extent = 0.0;
  std::vector<std::vector<Vec2>> outlines;
  for (const FlowState* s : states) {
    outlines.push_back(boundary_points(SupportFunction(grid, s->h_tilde)));
    for (const Vec2& p : outlines.back()) extent = std::max(extent, p.norm());
  }
  const double scale = extent > 0.0 ? 0.45 * cell / extent : 1.0;
  const double width = cell * std::max<std::size_t>(1, states.size());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << cell + 20 << "\">\n";
  out << "<line x1=\"0\" y1=\"" << cell / 2 << "\" x2=\"" << width << "\" y2=\"" << cell / 2
      << "\" stroke=\"#bbb\" stroke-width=\"0.5\"/>\n";
  for (std::size_t k = 0; k < outlines.size(); ++k) {
    const double cx = cell * (static_cast<double>(k) + 0.5);
    const double cy = cell / 2;
    out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << scale * states[k]->mean_radius
        << "\" fill=\"none\" stroke=\"#bbb\" stroke-width=\"0.5\"/>\n";
    out << "<polygon fill=\"none\" stroke=\"#333\" stroke-width=\"1\" points=\"";
    for (const Vec2& p : outlines[k]) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", cx + scale * p.x(), cy - scale * p.y());
      out << buf;
    }
    out << "\"/>\n";
    char label[64];
    std::snprintf(label, sizeof label, "t=%.4g", states[k]->t);
    out << "<text x=\"" << cx << "\" y=\"" << cell + 12 << "\" font-size=\"10\" text-anchor=\"middle\">" << label << "</text>\n";
  }
  out << "</svg>\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
  out << text;
}

}  // namespace worn::io
