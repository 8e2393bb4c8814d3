#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "homog/io.hpp"
#include "homog/residuals.hpp"
#include "json.hpp"

using homog::cli::run;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "homog_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("verify an irrotational family") {
  auto r = call({"verify", "--family", "irrotational", "--l", "2", "--m", "0", "--nlat", "64"});
  CHECK(r.code == homog::cli::kOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["grid"]["nlat"] == 64);
  CHECK(j["grid"]["nlon"] == 128);
  CHECK(j["tol"] == 1e-6);
  CHECK(j["equations"].size() > 10);
}

TEST_CASE("verification failure exits 1") {
  auto r = call({"verify", "--family", "conical", "--alpha", "-3", "--a0", "0.6", "--b0", "0.8",
                 "--nlat", "16", "--nlon", "32", "--tol", "1e-12"});
  CHECK(r.code == homog::cli::kFailed);
}

TEST_CASE("usage errors exit 2") {
  CHECK(call({"verify", "--family", "rotational", "--alpha", "0"}).code == homog::cli::kUsage);
  CHECK(call({"verify", "--family", "vortex"}).code == homog::cli::kUsage);
  CHECK(call({}).code == homog::cli::kUsage);
  CHECK(call({"verify", "--nlat", "2"}).code == homog::cli::kUsage);
  CHECK(call({"verify", "--family", "irrotational", "--l", "2", "--m", "5"}).code ==
        homog::cli::kUsage);
  CHECK(call({"scan2d", "--B-range", "0:10"}).code == homog::cli::kUsage);
  CHECK(call({"family", "--family", "radial", "-o", "/nonexistent-dir/out.json"}).code ==
        homog::cli::kUsage);
  auto r = call({"verify", "--input", "/nonexistent-dir/in.json"});
  CHECK(r.code == homog::cli::kUsage);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("help") {
  auto r = call({"--help"});
  CHECK(r.code == homog::cli::kOk);
  CHECK(r.out.find("scan-axisym") != std::string::npos);
}

TEST_CASE("scan2d") {
  auto r = call({"scan2d", "--alpha", "-1", "--B-range", "0:10:50"});
  REQUIRE(r.code == homog::cli::kOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "B,T");
  std::getline(in, line);
  const double T0 = std::stod(line.substr(line.find(',') + 1));
  CHECK(std::abs(T0 - std::numbers::pi / 2) < 1e-8);
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 50);
}

TEST_CASE("identical configs give byte-identical CSV") {
  const std::vector<std::string> args{"scan-axisym", "--alpha-range", "-2.5:-1:4"};
  auto a = call(args);
  auto b = call(args);
  REQUIRE(a.code == homog::cli::kOk);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("alpha,B,defect,blowup_flag\n", 0) == 0);

  auto f1 = call({"family", "--family", "shear", "--alpha", "-2", "--k", "2", "--nlat", "8",
                  "--nlon", "8", "--format", "csv"});
  auto f2 = call({"family", "--family", "shear", "--alpha", "-2", "--k", "2", "--nlat", "8",
                  "--nlon", "8", "--format", "csv"});
  CHECK(f1.out == f2.out);
  CHECK(f1.out.rfind("phi,theta,f,a,b,p\n", 0) == 0);
}

TEST_CASE("JSON round trip verifies with identical residuals") {
  const auto path = scratch("conical.json").string();
  const std::vector<std::string> fam{"--family", "conical", "--alpha", "-10", "--a0", "0.6",
                                     "--b0", "0.8", "--nlat", "64", "--nlon", "128"};
  std::vector<std::string> mk{"family", "-o", path};
  mk.insert(mk.end(), fam.begin(), fam.end());
  REQUIRE(call(mk).code == homog::cli::kOk);

  std::vector<std::string> direct{"verify"};
  direct.insert(direct.end(), fam.begin(), fam.end());
  auto d = call(direct);
  auto i = call({"verify", "--input", path});
  REQUIRE(d.code == homog::cli::kOk);
  REQUIRE(i.code == homog::cli::kOk);
  auto jd = nlohmann::json::parse(d.out);
  auto ji = nlohmann::json::parse(i.out);
  REQUIRE(jd["equations"].size() == ji["equations"].size());
  for (std::size_t k = 0; k < jd["equations"].size(); ++k) {
    CHECK(ji["equations"][k]["name"] == jd["equations"][k]["name"]);
    CHECK(std::abs(ji["equations"][k]["linf"].get<double>() -
                   jd["equations"][k]["linf"].get<double>()) <= 1e-14);
  }
  fs::remove(path);
}

TEST_CASE("config file with flag override") {
  const auto path = scratch("run.toml").string();
  homog::write_text(path,
                    "[verify]\nfamily = \"irrotational\"\nl = 3\nm = 1\nnlat = 24\nnlon = 48\n"
                    "format = \"csv\"\n");
  auto r = call({"--config", path, "verify"});
  CHECK(r.code == homog::cli::kOk);
  CHECK(r.out.rfind("equation,linf,l2\n", 0) == 0);
  auto o = call({"--config", path, "verify", "--format", "json"});
  CHECK(o.code == homog::cli::kOk);
  CHECK(nlohmann::json::parse(o.out)["grid"]["nlat"] == 24);
  fs::remove(path);
}

TEST_CASE("flux and landau") {
  auto f = call({"flux", "--family", "rotational", "--alpha", "-1", "--nlat", "32", "--nlon", "64"});
  CHECK(f.code == homog::cli::kOk);
  auto j = nlohmann::json::parse(f.out);
  CHECK(j["flux"].get<double>() == 0.0);
  CHECK(j["moments"].size() == 5);

  auto l = call({"landau"});
  CHECK(l.code == homog::cli::kOk);
  CHECK(l.out.rfind("nu,sup_psi,residual\n", 0) == 0);
  CHECK(call({"landau", "--c", "0.5"}).code == homog::cli::kUsage);
  CHECK(call({"landau", "--A", "1", "--B", "0", "--C", "1"}).code == homog::cli::kOk);
  CHECK(call({"landau", "--A", "1", "--B", "3", "--C", "1"}).code == homog::cli::kFailed);
}

TEST_CASE("thread count") {
  CHECK(homog::cli::thread_count() >= 1);
}
