#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dwx {

using Points = std::vector<std::pair<double, double>>;

enum class FitModel { exponential, power_law };

const char* model_name(FitModel m);

struct FitResult {
  FitModel model = FitModel::exponential;
  double rate_or_exponent = 0.0;  // exponential: rate = -slope; power: exponent = slope
  double intercept = 0.0;         // of the log-space line
  double r_squared = 0.0;
  double window_min = 0.0;
  double window_max = 0.0;
  std::size_t points = 0;
};

// Least squares on (x, ln y).
FitResult fit_exponential(const Points& pts);
// Least squares on (ln x, ln y).
FitResult fit_power(const Points& pts);

// Linear-interpolated abscissa where curve1 - curve2 changes sign, over the
// shared x-window. Both curves are evaluated on the union of their abscissae.
double crossover(const Points& curve1, const Points& curve2);

using Observables = std::vector<std::pair<std::string, double>>;

struct ScanRow {
  double value = 0.0;
  Observables observables;
  std::optional<std::string> error;  // "code: message" when the row failed
  std::string error_code;
};

struct ScanTable {
  std::string parameter;
  std::vector<ScanRow> rows;

  bool ok() const;
  std::size_t failures() const;
};

// Runs fn for every value, in order. A throwing row is recorded and the scan
// continues. Values must be strictly monotone.
ScanTable scan(const std::string& parameter, const std::vector<double>& values,
               const std::function<Observables(double)>& fn);

}  // namespace dwx
