#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "worn/body.hpp"
#include "worn/flow.hpp"
#include "worn/inequalities.hpp"
#include "worn/measures.hpp"
#include "worn/mesh.hpp"
#include "worn/pde.hpp"

namespace worn::io {

using Json = nlohmann::ordered_json;

// {"n_angles": N, "values": [...]} or {"vertices": [[x, y], ...]}, optional
// "name". Errors are InvalidInput naming the offending field. Support samples
// are resampled onto the grid when N differs from it.
Body body_from_json(const nlohmann::json& j, const AngleGrid& grid, std::string name = "file");
Body read_body_file(const std::filesystem::path& path, const AngleGrid& grid);
// A path to an existing file or a fixture name.
Body load_body(std::string_view source, const AngleGrid& grid);

Json body_to_json(const SupportFunction& h);
Json mesh_to_json(const TriangleMesh& mesh);
Json solve_report(const Body& body, const BodySolve& solve, double mesh_target);

// CSV theta,density (atoms are listed in the sidecar).
void write_measure_csv(std::ostream& out, const SphereMeasure& m);
Json measure_sidecar(const SphereMeasure& m, std::string_view kind);

void write_inequality_csv(std::ostream& out, const std::vector<InequalityReport>& reports);
Json inequality_summary(const std::vector<InequalityReport>& reports);

void write_trace_csv(std::ostream& out, const FlowTrace& trace);
Json flow_summary(const FlowTrace& trace, const FlowConfig& cfg);
// Normalized outlines of the given states side by side.
void write_svg_strip(std::ostream& out, const std::vector<const FlowState*>& states, const AngleGrid& grid);

// Shortest round-trip representation.
std::string format_number(double v);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace worn::io
