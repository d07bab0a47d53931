#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "risread/harness.hpp"

namespace risread {

enum class ConfigErrorKind {
  MissingFile,       // config file absent or unreadable
  TypeMismatch,      // value fails to parse or is out of domain
  UnknownKey,        // key not in the schema
  InconsistentAxes,  // cross-key violation (axes, baseline modes, geometry)
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ConfigErrorKind kind() const { return kind_; }

 private:
  ConfigErrorKind kind_;
};

struct RunConfig {
  ExperimentSpec spec;
  // Canonical resolved key=value view of `spec`; feeding these back through
  // parse_config reproduces the identical spec (manifest replay).
  std::map<std::string, std::string> values;
};

// Precedence: built-in defaults, then the file, then RISREAD_* environment
// variables, then explicit overrides (last wins).
RunConfig parse_config(
    const std::optional<std::string>& path,
    const std::vector<std::pair<std::string, std::string>>& overrides,
    bool apply_env = true);

// Canonical key=value view of a spec (string values round-trip exactly).
std::map<std::string, std::string> config_values(const ExperimentSpec& spec);

// Canonical key=value lines for a spec, one per line, schema order.
std::string config_text(const ExperimentSpec& spec);

const std::vector<std::string>& config_keys();

}  // namespace risread
