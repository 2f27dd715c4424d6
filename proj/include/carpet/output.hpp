#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "carpet/grid.hpp"

namespace carpet {

/// Shortest-free fixed format: 17 significant digits, '.' separator.
std::string format_number(double v);

/// Column-oriented CSV: one header entry per column, all columns the same length.
std::string csv_columns(const std::vector<std::string>& header, const std::vector<Vector>& columns);

/// One row per stored time: t, then the nodal values. Header is t followed by the node positions.
std::string csv_spacetime(const Vector& nodes, const std::vector<double>& times, const std::vector<Vector>& rows);

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// JSON text with a fixed indentation and a trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace carpet
