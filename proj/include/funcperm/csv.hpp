#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "funcperm/error.hpp"
#include "funcperm/fda_core.hpp"

namespace funcperm {

struct CsvOptions {
  /// First non-empty line holds the grid times.
  bool header = true;
  char delimiter = ',';
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<double> parse_csv_line(std::string_view line, char delim, std::size_t line_no) {
  std::vector<double> out;
  std::size_t column = 1;
  for (;;) {
    const auto cut = line.find(delim);
    const auto cell = trim(line.substr(0, cut));
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (!cell.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (cell.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value))
      throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(column) +
                           ": not a finite number: '" + std::string(cell) + "'",
                       line_no, column);
    out.push_back(value);
    if (cut == std::string_view::npos) break;
    line.remove_prefix(cut + 1);
    ++column;
  }
  return out;
}

inline void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace detail

/// Reads one curve per line. Without a header the grid is 0, 1, ..., L-1.
/// Blank lines are skipped; line numbers in errors count every physical line.
inline FunctionalSample read_sample(std::istream& in, const CsvOptions& options = {}) {
  std::vector<double> grid_points;
  std::vector<double> values;
  std::size_t width = 0;
  std::size_t line_no = 0;
  bool header_pending = options.header;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (detail::trim(view).empty()) continue;
    auto row = detail::parse_csv_line(view, options.delimiter, line_no);
    if (header_pending) {
      grid_points = std::move(row);
      width = grid_points.size();
      header_pending = false;
      continue;
    }
    if (width == 0) width = row.size();
    if (row.size() != width)
      throw ParseError("line " + std::to_string(line_no) + ": ragged row with " +
                           std::to_string(row.size()) + " values, expected " +
                           std::to_string(width),
                       line_no);
    values.insert(values.end(), row.begin(), row.end());
  }
  if (values.empty()) throw ParseError("no curves found", line_no);
  Grid grid = options.header ? Grid(std::move(grid_points)) : Grid::index(width);
  return FunctionalSample(std::move(grid), std::move(values));
}

inline FunctionalSample load_sample(const std::string& path, const CsvOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_sample(in, options);
}

/// Shortest round-trip decimal form, so reading back is bit-exact.
inline void write_sample(std::ostream& out, const FunctionalSample& sample, bool header = true,
                         char delimiter = ',') {
  std::string line;
  auto emit = [&](std::span<const double> row) {
    line.clear();
    for (std::size_t l = 0; l < row.size(); ++l) {
      if (l) line.push_back(delimiter);
      detail::append_number(line, row[l]);
    }
    line.push_back('\n');
    out << line;
  };
  if (header) emit(sample.grid().points());
  for (std::size_t i = 0; i < sample.count(); ++i) emit(sample.row(i));
}

inline void save_sample(const std::string& path, const FunctionalSample& sample, bool header = true) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_sample(out, sample, header);
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace funcperm
