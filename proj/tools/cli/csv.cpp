#include "cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <system_error>

namespace fracdelay::cli {

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (const auto& c : table.comments) out += "# " + c + "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

double parse_number(std::string_view cell, std::size_t line_no) {
  // from_chars does not accept a leading '+'; to_chars never writes one.
  double x = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw CsvError("line " + std::to_string(line_no) + ": not a number: '" + std::string(cell) + "'");
  }
  return x;
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (have_header) throw CsvError("line " + std::to_string(line_no) + ": comment after header");
      line.remove_prefix(1);
      if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      table.comments.emplace_back(line);
      continue;
    }
    const auto cells = split(line);
    if (!have_header) {
      for (auto c : cells) table.header.emplace_back(c);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw CsvError("line " + std::to_string(line_no) + ": expected " + std::to_string(table.header.size()) +
                     " cells, got " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) row.push_back(parse_number(c, line_no));
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw CsvError("missing header");
  return table;
}

CsvTable trace_table(const GridSeries& values) {
  CsvTable t;
  t.header.push_back("k");
  for (int i = 1; i <= values.dimension(); ++i) t.header.push_back("z" + std::to_string(i));
  for (int k = values.first(); k <= values.last(); ++k) {
    std::vector<double> row{static_cast<double>(k)};
    const auto& v = values.at(k);
    row.insert(row.end(), v.data(), v.data() + v.size());
    t.rows.push_back(std::move(row));
  }
  return t;
}

GridSeries table_trace(const CsvTable& table) {
  if (table.header.size() < 2 || table.header.front() != "k") throw CsvError("expected header k,z1,...");
  const int n = static_cast<int>(table.header.size()) - 1;
  if (table.rows.empty()) throw CsvError("trace has no rows");
  const double k0 = table.rows.front().front();
  if (k0 != std::floor(k0)) throw CsvError("k must be an integer");
  GridSeries out(static_cast<int>(k0), n);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.front() != k0 + static_cast<double>(r)) throw CsvError("k values must be consecutive");
    out.push_back(Eigen::Map<const Vector>(row.data() + 1, n));
  }
  return out;
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  std::random_device rd;
  const fs::path tmp = dir / ("." + target.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot create " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw OutputError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw OutputError("cannot move output into place at " + path + ": " + ec.message());
  }
}

}  // namespace fracdelay::cli
