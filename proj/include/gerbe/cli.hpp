#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "gerbe/errors.hpp"

namespace gerbe::cli {

using json = nlohmann::json;

/// Configuration problem; `key` is the dotted path of the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what) : Error(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct Scenario {
  std::string command;
  json params = json::object();  // complete, defaults filled in
  std::int64_t seed = 0;
  std::string output_path;
};

struct CheckRecord {
  std::string name;
  std::string status;  // pass, fail or indeterminate
  double residual = 0.0;
  double tolerance = 0.0;
  std::string comparison = "<=";  // residual <= tolerance, or >= for rates
  double runtime_ms = 0.0;
};

struct Report {
  Scenario scenario;
  std::vector<CheckRecord> checks;
  json data = json::object();
  double runtime_ms = 0.0;

  bool passed() const;
  /// Canonical text: sorted keys, two-space indent, trailing newline. The
  /// scenario echo omits output_path; runtimes appear only with `timings`.
  std::string serialize(bool timings) const;
};

const std::vector<std::string>& command_names();

/// Full schema with defaults, one entry per command.
json schema();

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// ConfigError naming the key.
Scenario parse_scenario(const std::string& text);
Scenario scenario_from_json(const json& doc);
/// Scenario for `command` with every parameter at its default.
Scenario default_scenario(const std::string& command);

/// Runs the checks of the scenario's command in a fixed order.
Report run(const Scenario& s);

/// SHA-256 of the canonical scenario (output_path excluded), hex.
std::string config_hash(const Scenario& s);

std::string version();

}  // namespace gerbe::cli
