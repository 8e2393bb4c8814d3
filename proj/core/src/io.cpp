#include "homog/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace homog {

using nlohmann::json;

std::string solution_to_json(const HomogeneousSolution& sol, int indent) {
  json j;
  j["alpha"] = sol.alpha;
  j["family_tag"] = to_string(sol.family_tag);
  j["note"] = sol.smooth_range_note;
  j["params"] = json::object();
  for (const auto& [k, v] : sol.params) j["params"][k] = v;
  j["grid"] = {{"nlat", sol.grid()->nlat()}, {"nlon", sol.grid()->nlon()}};
  j["fields"] = {{"f", sol.f.values}, {"a", sol.v.a}, {"b", sol.v.b}, {"p", sol.p.values}};
  return j.dump(indent);
}

HomogeneousSolution solution_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed solution JSON: ") + e.what());
  }
  try {
    HomogeneousSolution sol;
    sol.alpha = j.at("alpha").get<double>();
    sol.family_tag = family_tag_from_string(j.at("family_tag").get<std::string>());
    sol.smooth_range_note = j.value("note", std::string{});
    const json params = j.value("params", json::object());
    for (const auto& [k, v] : params.items()) {
      sol.params[k] = v.get<double>();
    }
    const auto grid = SphereGrid::build(j.at("grid").at("nlat").get<int>(),
                                        j.at("grid").at("nlon").get<int>());
    const auto& fields = j.at("fields");
    auto column = [&](const char* name) {
      auto v = fields.at(name).get<std::vector<double>>();
      if (v.size() != grid->size()) {
        throw std::invalid_argument(std::string("field '") + name + "' does not match the grid");
      }
      return v;
    };
    sol.f = ScalarField(grid, column("f"));
    sol.v = TangentField(grid, column("a"), column("b"));
    sol.p = ScalarField(grid, column("p"));
    return sol;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed solution JSON: ") + e.what());
  }
}

std::string report_to_json(const ResidualReport& report, int indent) {
  json eqs = json::array();
  for (const auto& e : report.equations) {
    eqs.push_back({{"name", e.name}, {"linf", e.linf}, {"l2", e.l2}});
  }
  json j;
  j["equations"] = eqs;
  j["pass"] = report.pass;
  j["grid"] = {{"nlat", report.nlat}, {"nlon", report.nlon}};
  j["tol"] = report.tol;
  return j.dump(indent);
}

std::string to_csv(const Table& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << '\n';
  char buf[32];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string to_json(const Table& table, int indent) {
  json arr = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size() && i < table.header.size(); ++i) {
      obj[table.header[i]] = row[i];
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(indent);
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace homog
