#pragma once

// Line-oriented scenario files:
//
//   # comment
//   [laser-loss]
//   lambda0_nm = 1053
//   sigma_cm   = 0.01
//
// Dimensioned keys carry their unit as a suffix and are converted to the
// internal units (cm, cm^-1, s, J, K, W) when parsed.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace collapse::cli {

enum class ScenarioKind { energy_gain, laser_loss, excitation, cosmology, superposition, fock_sim, validate };
std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_kind(std::string_view label);
const std::vector<ScenarioKind>& all_kinds();

struct ConfigValue {
  std::string raw;              // text after '='
  std::vector<double> numbers;  // converted to internal units; empty for strings
  std::size_t line = 0;
  [[nodiscard]] bool is_number() const { return numbers.size() == 1; }
};

struct ConfigError {
  std::size_t line = 0;  // 0 when the error is not tied to a line
  std::string message;
  [[nodiscard]] std::string to_string() const;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::validate;
  /// Canonical key (unit suffix stripped) to value.
  std::map<std::string, ConfigValue> values;
  /// Original key = raw value lines, in file order.
  std::vector<std::pair<std::string, std::string>> echo;

  [[nodiscard]] bool has(const std::string& key) const { return values.count(key) != 0; }
  /// Throws std::out_of_range if absent, std::invalid_argument if not a single number.
  [[nodiscard]] double number(const std::string& key) const;
  [[nodiscard]] double number_or(const std::string& key, double fallback) const;
  [[nodiscard]] std::vector<double> list(const std::string& key) const;
  [[nodiscard]] std::string text_or(const std::string& key, const std::string& fallback) const;
};

struct ParseResult {
  std::optional<ScenarioConfig> config;
  std::vector<ConfigError> errors;
  [[nodiscard]] bool ok() const { return config.has_value() && errors.empty(); }
};

/// Parses and validates; on failure every problem found is listed.
ParseResult parse_config(std::string_view text);

class ConfigParseError : public std::runtime_error {
 public:
  explicit ConfigParseError(std::vector<ConfigError> errors);
  [[nodiscard]] const std::vector<ConfigError>& errors() const { return errors_; }

 private:
  std::vector<ConfigError> errors_;
};

/// parse_config, throwing ConfigParseError on any error.
ScenarioConfig parse_config_or_throw(std::string_view text);
ScenarioConfig load_config_file(const std::string& path);

/// Documented keys of a kind as "stem[_unit|...]: description" lines.
std::vector<std::string> describe_keys(ScenarioKind kind);

}  // namespace collapse::cli
