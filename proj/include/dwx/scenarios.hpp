#pragma once

#include <string>
#include <vector>

#include "dwx/config.hpp"
#include "dwx/output.hpp"

namespace dwx {

struct ScenarioReport {
  std::string stem;           // file name stem
  Json summary;               // scenario, params, results, fits, status[, error]
  std::vector<Table> tables;  // each becomes <stem>_<name>.csv
  int exit_code = 0;          // 0 ok, 3 numerical failure
};

// Every known key with its resolved value.
Json resolved_params(const ScenarioConfig& cfg);

// Runs a validated config. Numerical failures are reported in the summary,
// never thrown.
ScenarioReport run_scenario(const ScenarioConfig& cfg);

// Creates out_dir if needed and writes every table and the summary.
// Returns the paths written.
std::vector<std::string> write_report(const ScenarioReport& report, const std::string& out_dir);

}  // namespace dwx
