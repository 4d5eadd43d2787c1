#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "fracdelay/solver.hpp"

namespace fracdelay::cli {

/// Schema violation; the message starts with the JSON path of the offending
/// field, e.g. "$.phi[1][0]: expected a number".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Reads and parses a whole file. Throws ConfigError on I/O or JSON syntax
/// errors.
nlohmann::json read_json_file(const std::string& file);

/// System description:
///
///   {
///     "alpha": 0.5, "delay": 2, "horizon": 40,
///     "M": [[...], ...], "N": [[...], ...],
///     "phi": [[...], ...],                  // delay rows, k = 1 - r .. 0
///     "forcing": {"type": "zero"}
///              | {"type": "constant", "value": [...]}
///              | {"type": "table", "values": [[...], ...]},   // k = 1 .. K
///     "truncation": {"tol": 1e-12, "i_max": 500, "window": 3, "divergence_growth": 10}
///   }
///
/// "forcing" and "truncation" are optional. A 1x1 system may give vectors as
/// plain numbers. Unknown keys are rejected.
DelaySystem parse_system(const nlohmann::json& doc);
DelaySystem load_system(const std::string& file);

/// Square matrix as a row-major 2-D array; `path` names it in errors.
SquareMatrix parse_matrix(const nlohmann::json& value, const std::string& path);
SquareMatrix load_matrix(const std::string& file);

}  // namespace fracdelay::cli
