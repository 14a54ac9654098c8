#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "worn/error.hpp"
#include "worn/io.hpp"

using namespace worn;
using oracle::pi;

namespace {

std::string error_message(auto&& f, ErrorCode expected) {
  try {
    f();
  } catch (const Error& e) {
    CHECK(e.code() == expected);
    return e.what();
  }
  FAIL("no error thrown");
  return {};
}

}  // namespace

TEST_CASE("body JSON round trip") {
  const AngleGrid g(64);
  const Body e = make_fixture("ellipse:1.5:1", g);
  const io::Json j = io::body_to_json(e.support);
  CHECK(j["n_angles"] == 64);
  const Body back = io::body_from_json(nlohmann::json::parse(j.dump()), g);
  for (int i = 0; i < g.size(); ++i) CHECK(back.support[i] == e.support[i]);

  // Resampled onto a finer grid.
  const Body fine = io::body_from_json(nlohmann::json::parse(j.dump()), AngleGrid(256));
  CHECK(fine.area() == doctest::Approx(1.5 * pi).epsilon(1e-8));
}

TEST_CASE("polygon bodies from vertices") {
  const auto j = nlohmann::json::parse(R"({"name": "tri", "vertices": [[1, -0.5], [0, 1], [-1, -0.5]]})");
  const Body b = io::body_from_json(j, AngleGrid(128));
  CHECK(b.name == "tri");
  REQUIRE(b.polygon.has_value());
  CHECK(b.area() == doctest::Approx(1.5));
}

TEST_CASE("body JSON diagnostics name the field") {
  const AngleGrid g(64);
  auto parse = [&](const char* text) { return io::body_from_json(nlohmann::json::parse(text), g); };
  CHECK(error_message([&] { parse(R"({"n_angles": 16, "values": [1, 1, "x", 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]})"); }, ErrorCode::InvalidInput)
            .find("values[2]") != std::string::npos);
  CHECK(error_message([&] { parse(R"({"values": [1, 1, 1, 1]})"); }, ErrorCode::InvalidInput).find("n_angles") != std::string::npos);
  CHECK(error_message([&] { parse(R"({"vertices": [[1, 0], [1], [0, 1]]})"); }, ErrorCode::InvalidInput).find("vertices[1]") != std::string::npos);
  error_message([&] { parse(R"([1, 2])"); }, ErrorCode::InvalidInput);
  CHECK(error_message([&] { parse(R"({"vertices": [[1, 1], [2, 1], [1, 2]]})"); }, ErrorCode::InvalidInput).find("origin") != std::string::npos);
}

TEST_CASE("load_body falls back to fixtures") {
  const Body b = io::load_body("square:2", AngleGrid(64));
  CHECK(b.area() == doctest::Approx(4.0));
  error_message([&] { io::load_body("no_such_file.json", AngleGrid(64)); }, ErrorCode::InvalidInput);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 6.02214076e23}) {
    CHECK(std::stod(io::format_number(v)) == v);
  }
  CHECK(io::format_number(0.5) == "0.5");
}

TEST_CASE("inequality CSV and summary") {
  InequalityReport ok;
  ok.name = "saint_venant";
  ok.body = "disk";
  ok.lhs = 1.0;
  ok.rhs = 1.0;
  ok.pass = true;
  ok.near_equality = true;
  InequalityReport bad = ok;
  bad.name = "faber_krahn";
  bad.margin = -1.0;
  bad.pass = false;
  std::ostringstream csv;
  io::write_inequality_csv(csv, {ok, bad});
  const std::string text = csv.str();
  CHECK(text.rfind("name,body,lhs,rhs,margin,tol,pass", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  const io::Json s = io::inequality_summary({ok, bad});
  CHECK(s["count"] == 2);
  CHECK(s["failed"] == 1);
  CHECK(s["all_pass"] == false);
}

TEST_CASE("measure CSV") {
  const Body sq = make_fixture("square", AngleGrid(16));
  std::ostringstream out;
  const SphereMeasure s = surface_area_measure(sq);
  io::write_measure_csv(out, s);
  CHECK(out.str().rfind("theta,density\n", 0) == 0);
  const io::Json side = io::measure_sidecar(s, "surface_area");
  CHECK(side["atoms"].size() == 4);
  CHECK(side["total"].get<double>() == doctest::Approx(4.0));
}
