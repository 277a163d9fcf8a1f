#include "monoflow/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace monoflow {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_plain(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

double parse_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  if (parse_plain(text, v)) return v;
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    double num = 0.0, den = 0.0;
    if (parse_plain(text.substr(0, slash), num) && parse_plain(text.substr(slash + 1), den) && den != 0.0) {
      return num / den;
    }
  }
  throw InvalidInput("not a number: '" + std::string(text) + "'");
}

std::vector<double> parse_double_list(std::string_view text, char sep) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (auto part : split(text, sep)) out.push_back(parse_double(part));
  return out;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path, 0);
  CsvTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto fields = split(body, ',');
    if (table.header.empty()) {
      for (auto f : fields) table.header.emplace_back(trim(f));
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw SchemaError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(table.header.size()) +
                            " fields, found " + std::to_string(fields.size()),
                        line_no);
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) {
      double v = 0.0;
      if (!parse_plain(f, v)) {
        throw SchemaError(path + ":" + std::to_string(line_no) + ": non-numeric field '" + std::string(trim(f)) + "'",
                          line_no);
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw SchemaError(path + ": missing header row", 1);
  return table;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

CsvWriter& CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw InvalidInput("CSV row width does not match header");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_double(values[i]);
  }
  buffer_ += '\n';
  return *this;
}

CsvWriter& CsvWriter::text_row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw InvalidInput("CSV row width does not match header");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += fields[i];
  }
  buffer_ += '\n';
  return *this;
}

void CsvWriter::save(const std::string& path) const { write_text_file(path, buffer_); }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace monoflow
