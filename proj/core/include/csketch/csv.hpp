#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "csketch/types.hpp"

namespace csketch {

/// Numeric table read from a comma-separated file with a header row.
struct CsvTable {
  std::vector<std::string> header;
  RowMatrix values;

  /// Column position of `name`; throws DataError if absent.
  Index column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

/// Parses '.'-decimal numeric CSV. Throws DataError on ragged rows or
/// non-numeric cells.
CsvTable parse_csv(std::istream& in, std::string_view source = "<stream>");
CsvTable read_csv(const std::string& path);

/// Shortest-safe text for a double: 17 significant digits.
std::string format_double(double x);

/// Writes header + rows; every cell uses format_double.
void write_csv(std::ostream& out, const std::vector<std::string>& header, const RowMatrix& values);
void write_csv(const std::string& path, const std::vector<std::string>& header, const RowMatrix& values);

}  // namespace csketch
