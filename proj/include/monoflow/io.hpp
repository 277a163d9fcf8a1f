#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "monoflow/errors.hpp"

namespace monoflow {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Parses a full-string double ("1/64" style fractions are accepted).
double parse_double(std::string_view text);
std::vector<double> parse_double_list(std::string_view text, char sep);

/// A CSV file violated its schema; line() is 1-based (0 when not line-specific).
class SchemaError : public InvalidInput {
 public:
  SchemaError(const std::string& what, int line) : InvalidInput(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Numeric CSV with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads a numeric CSV. Every data row must have as many fields as the header
/// and every field must parse as a number; violations raise SchemaError.
CsvTable read_csv(const std::string& path);

/// Incremental CSV writer producing "\n"-terminated rows with shortest
/// round-trip numbers.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  CsvWriter& row(const std::vector<double>& values);
  /// Row of preformatted fields.
  CsvWriter& text_row(const std::vector<std::string>& fields);
  const std::string& str() const noexcept { return buffer_; }
  void save(const std::string& path) const;

 private:
  std::size_t columns_;
  std::string buffer_;
};

/// Writes `content` to `path`, throwing std::runtime_error when it cannot.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace monoflow
