#include "bmac/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>

#include "bmac/errors.hpp"

namespace bmac {

std::string format_cell(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", std::get<double>(cell));
  return buffer;
}

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void append_record(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out += ',';
    out += quote(fields[k]);
  }
  out += "\r\n";
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  append_record(out, table.columns);
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw PreconditionError("table row width does not match its header");
    std::vector<std::string> fields;
    for (const auto& cell : row) fields.push_back(format_cell(cell));
    append_record(out, fields);
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, field_started = false;
  std::size_t k = 0;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  while (k < text.size()) {
    const char c = text[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          field += '"';
          k += 2;
          continue;
        }
        quoted = false;
        ++k;
        if (k < text.size() && text[k] != ',' && text[k] != '\r' && text[k] != '\n')
          throw PreconditionError("csv: unexpected character after closing quote");
        continue;
      }
      field += c;
      ++k;
      continue;
    }
    if (c == '"') {
      if (field_started || !field.empty())
        throw PreconditionError("csv: quote inside an unquoted field");
      quoted = true;
      field_started = true;
      ++k;
    } else if (c == ',') {
      end_field();
      ++k;
    } else if (c == '\r' || c == '\n') {
      end_record();
      k += (c == '\r' && k + 1 < text.size() && text[k + 1] == '\n') ? 2 : 1;
    } else {
      field += c;
      ++k;
    }
  }
  if (quoted) throw PreconditionError("csv: unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

namespace {

Cell parse_cell(const std::string& field) {
  if (field.empty()) return field;
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  const long long i = std::strtoll(begin, &end, 10);
  if (errno == 0 && end == begin + field.size() && std::to_string(i) == field)
    return static_cast<std::int64_t>(i);
  errno = 0;
  const double d = std::strtod(begin, &end);
  if (end == begin + field.size() && format_cell(Cell{d}) == field) return d;
  return field;
}

}  // namespace

Table read_table(std::string_view text) {
  const auto records = parse_csv(text);
  if (records.empty()) throw PreconditionError("csv: missing header row");
  Table table;
  table.columns = records.front();
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.columns.size())
      throw PreconditionError("csv: record " + std::to_string(r) + " has " +
                              std::to_string(records[r].size()) + " fields, header has " +
                              std::to_string(table.columns.size()));
    std::vector<Cell> row;
    for (const auto& field : records[r]) row.push_back(parse_cell(field));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path) {
  auto out = csv_path;
  if (out.extension() == ".csv") out.replace_extension();
  out += ".manifest.json";
  return out;
}

nlohmann::json make_manifest(const ExperimentConfig& config, double wall_seconds,
                             const std::string& csv_path) {
  return {{"tool", "bmac"},
          {"version", std::string(kVersion)},
          {"master_seed", config.master_seed},
          {"wall_time_seconds", wall_seconds},
          {"csv", csv_path},
          {"config", config.resolved()}};
}

const nlohmann::json* manifest_config(const nlohmann::json& document) {
  if (!document.is_object() || !document.contains("config") || !document.contains("tool"))
    return nullptr;
  if (document["tool"] != "bmac") return nullptr;
  return &document["config"];
}

}  // namespace bmac
