#pragma once

// JSON and CSV serialization. Doubles are written so that they read back
// bit-identically.

#include <string>
#include <string_view>
#include <vector>

#include "homog/families.hpp"
#include "homog/residuals.hpp"

namespace homog {

/// {alpha, family_tag, note, params, grid: {nlat, nlon}, fields: {f, a, b, p}}.
std::string solution_to_json(const HomogeneousSolution& sol, int indent = -1);

/// Inverse of solution_to_json. The result has no closure. Throws
/// std::invalid_argument on malformed input.
HomogeneousSolution solution_from_json(std::string_view text);

/// {equations: [{name, linf, l2}], pass, grid: {nlat, nlon}, tol}.
std::string report_to_json(const ResidualReport& report, int indent = -1);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Single header row, comma separated, 17 significant digits.
std::string to_csv(const Table& table);
/// Array of objects keyed by the header.
std::string to_json(const Table& table, int indent = -1);

/// Throws std::runtime_error when the file cannot be written.
void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace homog
