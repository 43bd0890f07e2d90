#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pcredit::io {

/// Malformed input, located by 1-based line and column name.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t row, std::string column, const std::string& message);

  const std::string& source() const noexcept { return source_; }
  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::string source_;
  std::size_t row_;
  std::string column_;
};

struct CsvRow {
  std::size_t line = 0;  // 1-based; the header is line 1
  std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF. A trailing
/// newline does not produce an empty row; blank lines are skipped.
std::vector<CsvRow> read_csv(std::string_view text, const std::string& source);

/// Joins fields with commas, quoting where needed, and appends '\n'.
std::string csv_line(const std::vector<std::string>& fields);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);
/// Strict parse of a whole field; nullopt on any trailing text.
std::optional<double> parse_double(std::string_view text);

}  // namespace pcredit::io
