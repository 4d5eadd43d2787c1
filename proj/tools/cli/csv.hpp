#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fracdelay/grid_calculus.hpp"

namespace fracdelay::cli {

/// Failure to write an output file.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed CSV text.
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric CSV with optional leading '#' comment lines.
struct CsvTable {
  std::vector<std::string> comments;  ///< without the leading "# "
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Shortest decimal text that reads back to exactly `x`.
std::string format_number(double x);

std::string to_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);

/// Header k,z1,...,zn and one row per grid point.
CsvTable trace_table(const GridSeries& values);
GridSeries table_trace(const CsvTable& table);

/// Writes through a temporary file in the target directory and renames it
/// into place, so `path` is either untouched or complete.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace fracdelay::cli
