#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "dwx/kernel.hpp"
#include "dwx/potential.hpp"

namespace dwx {

enum class ValueType { boolean, integer, real, text, real_list };

const char* value_type_name(ValueType t);

using ConfigValue = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

struct KeyInfo {
  std::string key;
  ValueType type;
  std::string default_text;  // empty: required or resolved per scenario
  std::string doc;
};

// Every accepted key, in documentation order.
const std::vector<KeyInfo>& known_keys();

const std::vector<std::string>& scenario_names();

// scan.param values a scenario accepts; the first is its default.
const std::vector<std::string>& scan_params(const std::string& scenario);

struct ScenarioConfig {
  std::map<std::string, ConfigValue> values;  // every known key, defaults filled in
  std::map<std::string, int> lines;           // line of each key set in the text

  const std::string& scenario() const { return text("scenario"); }
  bool flag(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  double real(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  const std::vector<double>& list(const std::string& key) const;
  bool has_scan() const;

  Grid grid() const;
  DoubleWellSpec wells() const;
  InteractionKernel kernel() const;
};

// Flat "key = value" lines, '#' comments. Throws unknown-key, type-mismatch,
// missing-required or invalid-value, each naming key and line.
ScenarioConfig parse_config(const std::string& text);

// Semantic checks: grid, wells and kernel for the base config and every
// scan point. Throws invalid-value or the module error that failed.
void validate_config(const ScenarioConfig& cfg);

struct ScanPoint {
  DoubleWellSpec spec;
  InteractionKernel kernel;
};

// Base geometry and kernel with the scan parameter set to value.
ScanPoint apply_scan_value(const ScenarioConfig& cfg, double value);

}  // namespace dwx
