#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bmac/config.hpp"
#include "bmac/harness.hpp"

namespace bmac {

/// Decimal with 12 significant digits, integers verbatim, strings as-is.
std::string format_cell(const Cell& cell);

/// RFC 4180: header row, CRLF line ends, fields quoted when they contain a comma, quote,
/// CR or LF, embedded quotes doubled.
std::string to_csv(const Table& table);

/// Splits RFC 4180 text into records. Accepts CRLF or LF line ends. Throws PreconditionError
/// on an unterminated quoted field or a quote inside an unquoted field.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Rebuilds a table from CSV text: integer-looking fields become integers, other numeric
/// fields doubles, the rest strings. to_csv(read_table(to_csv(t))) == to_csv(t).
Table read_table(std::string_view text);

/// Manifest path that belongs to a CSV path: "x.csv" -> "x.manifest.json".
std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path);

/// Run record: the resolved config (which carries the seed), library version, wall time and
/// the CSV it produced. Replaying the embedded config reproduces the CSV byte for byte.
nlohmann::json make_manifest(const ExperimentConfig& config, double wall_seconds,
                             const std::string& csv_path);

/// The embedded config if `document` is a manifest, otherwise nullptr.
const nlohmann::json* manifest_config(const nlohmann::json& document);

}  // namespace bmac
