#include "csketch/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "csketch/errors.hpp"

namespace csketch {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

Index CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DataError("missing column '" + std::string(name) + "'");
  return static_cast<Index>(it - header.begin());
}

bool CsvTable::has_column(std::string_view name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable parse_csv(std::istream& in, std::string_view source) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    for (auto cell : split(line)) table.header.emplace_back(cell);
    have_header = true;
  }
  if (!have_header) throw DataError(std::string(source) + ": empty CSV, header row expected");

  const std::size_t cols = table.header.size();
  std::vector<double> cells;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto parts = split(line);
    if (parts.size() != cols) {
      throw DataError(std::string(source) + ":" + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                      " cells, found " + std::to_string(parts.size()));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double v = 0.0;
      const auto cell = parts[c];
      const auto* begin = cell.data();
      const auto* end = cell.data() + cell.size();
      if (!cell.empty() && *begin == '+') ++begin;
      const auto [ptr, ec] = std::from_chars(begin, end, v);
      if (cell.empty() || ec != std::errc() || ptr != end) {
        throw DataError(std::string(source) + ":" + std::to_string(line_no) + ": non-numeric cell '" +
                        std::string(cell) + "' in column '" + table.header[c] + "'");
      }
      cells.push_back(v);
    }
    ++rows;
  }
  table.values.resize(static_cast<Index>(rows), static_cast<Index>(cols));
  std::copy(cells.begin(), cells.end(), table.values.data());
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_csv(in, path);
}

std::string format_double(double x) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const RowMatrix& values) {
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) out << (c ? "," : "") << format_double(values(r, c));
    out << '\n';
  }
}

void write_csv(const std::string& path, const std::vector<std::string>& header, const RowMatrix& values) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_csv(out, header, values);
}

}  // namespace csketch
