#include <cstdio>
#include <filesystem>

#include "common.hpp"
#include "doctest.h"
#include "homog/homo2d.hpp"
#include "homog/io.hpp"
#include "json.hpp"

using namespace homog;

TEST_SUITE("io") {

TEST_CASE("solution JSON round trip is bit-faithful") {
  auto g = SphereGrid::build(16, 32);
  for (const auto& sol : {conical_axisym(-3, 0.6, 0.8, g), irrotational(3, -2, 1.5, g),
                          lift_2d(elliptic_exceptional(2, 1), g), radial(1.0 / 3.0, g)}) {
    const std::string text = solution_to_json(sol);
    auto back = solution_from_json(text);
    CHECK(back.alpha == sol.alpha);
    CHECK(back.family_tag == sol.family_tag);
    CHECK(back.smooth_range_note == sol.smooth_range_note);
    CHECK(back.params == sol.params);
    CHECK(back.grid()->nlat() == 16);
    CHECK(back.grid()->nlon() == 32);
    CHECK(back.f.values == sol.f.values);
    CHECK(back.v.a == sol.v.a);
    CHECK(back.v.b == sol.v.b);
    CHECK(back.p.values == sol.p.values);
    CHECK_FALSE(back.closure);
    CHECK(solution_to_json(back) == text);
  }
}

TEST_CASE("solution JSON layout") {
  auto g = SphereGrid::build(8, 8);
  auto j = nlohmann::json::parse(solution_to_json(rotational(-2, 1, g), 2));
  for (const char* key : {"alpha", "family_tag", "params", "grid", "fields"}) CHECK(j.contains(key));
  CHECK(j["family_tag"] == "rotational");
  CHECK(j["fields"]["f"].size() == 64);
  CHECK(j["grid"]["nlon"] == 8);
}

TEST_CASE("malformed solution JSON") {
  CHECK_THROWS_AS(solution_from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(solution_from_json("{}"), std::invalid_argument);
  CHECK_THROWS_AS(solution_from_json(R"({"alpha": 1, "family_tag": "blob", "grid": {"nlat": 8, "nlon": 8}})"),
                  std::invalid_argument);
  auto g = SphereGrid::build(8, 8);
  auto j = nlohmann::json::parse(solution_to_json(rotational(-2, 1, g)));
  j["fields"]["a"].erase(0);
  CHECK_THROWS_AS(solution_from_json(j.dump()), std::invalid_argument);
}

TEST_CASE("report JSON") {
  auto g = SphereGrid::build(8, 8);
  ResidualReport r;
  r.nlat = 8;
  r.nlon = 8;
  r.add("continuity", ScalarField(g, 0.1));
  r.finalize(1e-6);
  auto j = nlohmann::json::parse(report_to_json(r));
  CHECK(j["pass"] == false);
  CHECK(j["tol"] == 1e-6);
  CHECK(j["equations"][0]["name"] == "continuity");
  CHECK(j["equations"][0]["linf"] == 0.1);
  CHECK(j["grid"]["nlat"] == 8);
}

TEST_CASE("tables") {
  Table t{{"x", "y"}, {{0.1, 1.0 / 3.0}, {-2.0, 1e-300}}};
  const std::string csv = to_csv(t);
  CHECK(csv == "x,y\n0.10000000000000001,0.33333333333333331\n-2,1e-300\n");
  double y = 0.0;
  std::sscanf(csv.c_str() + csv.find(',', 3) + 1, "%lf", &y);
  CHECK(y == 1.0 / 3.0);
  auto j = nlohmann::json::parse(to_json(t));
  CHECK(j.size() == 2);
  CHECK(j[0]["y"].get<double>() == 1.0 / 3.0);
  CHECK(to_csv(Table{{"a"}, {}}) == "a\n");
}

TEST_CASE("files") {
  const auto path = std::filesystem::temp_directory_path() / "homog_io_test.txt";
  write_text(path.string(), "abc\n");
  CHECK(read_text(path.string()) == "abc\n");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_text("/nonexistent-dir/x.txt", "x"), std::runtime_error);
  CHECK_THROWS_AS(read_text("/nonexistent-dir/x.txt"), std::runtime_error);
}

}
