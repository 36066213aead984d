#pragma once

#include <charconv>
#include <cmath>
#include <set>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "triality/errors.hpp"

namespace triality {

// Flat numeric table with named columns and provenance key/value pairs
// (tool version, seed, tolerance, ...) that ride along into the output.
struct ResultTable {
  std::vector<std::pair<std::string, std::string>> provenance;
  std::vector<std::string> headers;
  std::vector<std::vector<double>> rows;
};

// Shortest decimal string that round-trips to exactly this double.
inline std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (result.ec != std::errc()) {
    throw consistency_error("double formatting failed");
  }
  return std::string(buffer, result.ptr);
}

namespace detail {

// Quote a field if it contains a comma, quote, or newline (doubling any
// embedded quotes); plain fields pass through untouched.
inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += '"';
  return out;
}

}  // namespace detail

// Serializes a table to CSV: '#'-prefixed provenance lines, then the
// header row, then one line per data row; LF endings throughout, numbers
// in shortest round-trip form.  Byte-deterministic for identical input.
inline std::string emit_table(const ResultTable& table) {
  if (table.headers.empty()) throw validation_error("result table: no columns");
  std::set<std::string> seen;
  for (const auto& h : table.headers) {
    if (!seen.insert(h).second) {
      throw validation_error("result table: duplicate column name '" + h + "'");
    }
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.headers.size()) {
      throw validation_error("result table: row " + std::to_string(r) + " has " +
                             std::to_string(table.rows[r].size()) + " values, expected " +
                             std::to_string(table.headers.size()));
    }
  }

  std::string out;
  for (const auto& [key, value] : table.provenance) {
    out += "# " + key + "=" + value + "\n";
  }
  for (std::size_t c = 0; c < table.headers.size(); ++c) {
    if (c > 0) out += ',';
    out += detail::csv_escape(table.headers[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace triality
