#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fracdelay::cli {

using nlohmann::json;

namespace {

std::string field(const std::string& parent, const std::string& key) { return parent + "." + key; }
std::string item(const std::string& parent, std::size_t i) { return parent + "[" + std::to_string(i) + "]"; }

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& known) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) throw ConfigError(field(path, key), "unknown field");
  }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(field(path, key), "missing required field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
  return x;
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  const auto x = v.get<long long>();
  if (x < -1000000000LL || x > 1000000000LL) throw ConfigError(path, "integer out of range");
  return static_cast<int>(x);
}

Vector vector_of(const json& v, const std::string& path, int n) {
  if (n == 1 && v.is_number()) return Vector::Constant(1, number(v, path));
  if (!v.is_array()) throw ConfigError(path, "expected an array of " + std::to_string(n) + " numbers");
  if (static_cast<int>(v.size()) != n) {
    throw ConfigError(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
  }
  Vector out(n);
  for (int i = 0; i < n; ++i) out(i) = number(v[static_cast<std::size_t>(i)], item(path, static_cast<std::size_t>(i)));
  return out;
}

GridSeries series_of(const json& v, const std::string& path, int first, int count, int n) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  if (static_cast<int>(v.size()) != count) {
    throw ConfigError(path, "expected " + std::to_string(count) + " entries, got " + std::to_string(v.size()));
  }
  GridSeries out(first, n);
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(vector_of(v[i], item(path, i), n));
  return out;
}

Forcing forcing_of(const json& v, const std::string& path, int n, int horizon) {
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  const auto& type = require(v, path, "type");
  if (!type.is_string()) throw ConfigError(field(path, "type"), "expected a string");
  const auto kind = type.get<std::string>();
  if (kind == "zero") {
    reject_unknown(v, path, {"type"});
    return Forcing::zero();
  }
  if (kind == "constant") {
    reject_unknown(v, path, {"type", "value"});
    return Forcing::constant(vector_of(require(v, path, "value"), field(path, "value"), n));
  }
  if (kind == "table") {
    reject_unknown(v, path, {"type", "values"});
    return Forcing::table(series_of(require(v, path, "values"), field(path, "values"), 1, horizon, n));
  }
  throw ConfigError(field(path, "type"), "expected one of \"zero\", \"constant\", \"table\"");
}

TruncationPolicy policy_of(const json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown(v, path, {"tol", "i_max", "window", "divergence_growth"});
  TruncationPolicy p;
  if (v.contains("tol")) {
    p.tol = number(v["tol"], field(path, "tol"));
    if (!(p.tol > 0.0)) throw ConfigError(field(path, "tol"), "must be positive");
  }
  auto positive = [&](const char* key, int& out) {
    if (!v.contains(key)) return;
    out = integer(v[key], field(path, key));
    if (out < 1) throw ConfigError(field(path, key), "must be at least 1");
  };
  positive("i_max", p.i_max);
  positive("window", p.window);
  positive("divergence_growth", p.divergence_growth);
  return p;
}

}  // namespace

json read_json_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError(file, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(file, std::string("invalid JSON: ") + e.what());
  }
}

SquareMatrix parse_matrix(const json& value, const std::string& path) {
  if (!value.is_array() || value.empty()) throw ConfigError(path, "expected a non-empty 2-D array");
  const auto n = value.size();
  SquareMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = value[i];
    const auto p = item(path, i);
    if (!row.is_array()) throw ConfigError(p, "expected an array (matrix row)");
    if (row.size() != n) {
      throw ConfigError(p, "matrix must be square: row has " + std::to_string(row.size()) + " entries, expected " +
                               std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = number(row[j], item(p, j));
    }
  }
  return out;
}

SquareMatrix load_matrix(const std::string& file) { return parse_matrix(read_json_file(file), "$"); }

DelaySystem parse_system(const json& doc) {
  const std::string root = "$";
  if (!doc.is_object()) throw ConfigError(root, "expected an object");
  reject_unknown(doc, root, {"alpha", "delay", "M", "N", "phi", "forcing", "horizon", "truncation"});

  DelaySystem sys;
  sys.alpha = number(require(doc, root, "alpha"), "$.alpha");
  if (!(sys.alpha > 0.0 && sys.alpha < 1.0)) throw ConfigError("$.alpha", "must lie in (0, 1)");
  sys.delay = integer(require(doc, root, "delay"), "$.delay");
  if (sys.delay < 1) throw ConfigError("$.delay", "must be at least 1");
  sys.horizon = integer(require(doc, root, "horizon"), "$.horizon");
  if (sys.horizon < 1) throw ConfigError("$.horizon", "must be at least 1");

  sys.m = parse_matrix(require(doc, root, "M"), "$.M");
  sys.n = parse_matrix(require(doc, root, "N"), "$.N");
  if (sys.n.rows() != sys.m.rows()) {
    throw ConfigError("$.N", "dimension " + std::to_string(sys.n.rows()) + " differs from M (" +
                                 std::to_string(sys.m.rows()) + ")");
  }
  const int n = sys.dimension();
  sys.phi = series_of(require(doc, root, "phi"), "$.phi", 1 - sys.delay, sys.delay, n);
  if (doc.contains("forcing")) sys.forcing = forcing_of(doc["forcing"], "$.forcing", n, sys.horizon);
  if (doc.contains("truncation")) sys.policy = policy_of(doc["truncation"], "$.truncation");
  return sys;
}

DelaySystem load_system(const std::string& file) { return parse_system(read_json_file(file)); }

}  // namespace fracdelay::cli
