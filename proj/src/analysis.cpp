#include "dwx/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dwx/error.hpp"

namespace dwx {

const char* model_name(FitModel m) { return m == FitModel::exponential ? "exponential" : "power_law"; }

namespace {

FitResult line_fit(Points pts, FitModel model) {
  // sorting makes the result independent of input order
  std::sort(pts.begin(), pts.end());
  const double n = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (!(sxx > 0.0)) throw Error(Errc::invalid_argument, "fit needs at least two distinct abscissae");
  const double slope = sxy / sxx;
  const double icpt = my - slope * mx;
  double ssr = 0.0;
  for (const auto& [x, y] : pts) {
    const double r = y - (icpt + slope * x);
    ssr += r * r;
  }
  FitResult f;
  f.model = model;
  f.rate_or_exponent = model == FitModel::exponential ? -slope : slope;
  f.intercept = icpt;
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  f.points = pts.size();
  return f;
}

void need_points(const Points& pts) {
  if (pts.size() < 5)
    throw Error(Errc::too_few_points, "fit needs at least 5 points, got " + std::to_string(pts.size()));
}

std::pair<double, double> window(const Points& pts) {
  double lo = pts.front().first, hi = lo;
  for (const auto& p : pts) {
    lo = std::min(lo, p.first);
    hi = std::max(hi, p.first);
  }
  return {lo, hi};
}

double interpolate(const Points& sorted, double x) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x, [](const auto& p, double v) { return p.first < v; });
  if (it == sorted.end()) return sorted.back().second;
  if (it->first == x || it == sorted.begin()) return it->second;
  const auto& b = *it;
  const auto& a = *(it - 1);
  return a.second + (b.second - a.second) * (x - a.first) / (b.first - a.first);
}

}  // namespace

FitResult fit_exponential(const Points& pts) {
  need_points(pts);
  Points lg;
  for (const auto& [x, y] : pts) {
    if (!(y > 0.0)) throw Error(Errc::nonpositive_input, "exponential fit needs y > 0");
    lg.emplace_back(x, std::log(y));
  }
  FitResult f = line_fit(lg, FitModel::exponential);
  std::tie(f.window_min, f.window_max) = window(pts);
  return f;
}

FitResult fit_power(const Points& pts) {
  need_points(pts);
  Points lg;
  for (const auto& [x, y] : pts) {
    if (!(x > 0.0) || !(y > 0.0)) throw Error(Errc::nonpositive_input, "power fit needs x > 0 and y > 0");
    lg.emplace_back(std::log(x), std::log(y));
  }
  FitResult f = line_fit(lg, FitModel::power_law);
  std::tie(f.window_min, f.window_max) = window(pts);
  return f;
}

double crossover(const Points& curve1, const Points& curve2) {
  if (curve1.size() < 2 || curve2.size() < 2) throw Error(Errc::no_crossing, "curves need at least two points");
  Points c1 = curve1, c2 = curve2;
  std::sort(c1.begin(), c1.end());
  std::sort(c2.begin(), c2.end());
  const double lo = std::max(c1.front().first, c2.front().first);
  const double hi = std::min(c1.back().first, c2.back().first);
  if (!(hi > lo)) throw Error(Errc::no_crossing, "curves share no x-window");
  std::vector<double> xs;
  for (const auto* c : {&c1, &c2})
    for (const auto& p : *c)
      if (p.first >= lo && p.first <= hi) xs.push_back(p.first);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> diff;
  for (double x : xs) diff.push_back(interpolate(c1, x) - interpolate(c2, x));
  if (std::all_of(diff.begin(), diff.end(), [](double d) { return d == 0.0; }))
    throw Error(Errc::multiple_crossings, "curves coincide over the whole window");

  std::vector<double> roots;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (diff[i] == 0.0) {
      // touching zero counts once, at the point itself
      if (i == 0 || diff[i - 1] != 0.0) roots.push_back(xs[i]);
      continue;
    }
    if (i + 1 < xs.size() && diff[i + 1] != 0.0 && (diff[i] > 0.0) != (diff[i + 1] > 0.0))
      roots.push_back(xs[i] + (xs[i + 1] - xs[i]) * diff[i] / (diff[i] - diff[i + 1]));
  }
  if (roots.empty()) throw Error(Errc::no_crossing, "curve1 - curve2 keeps its sign over the window");
  if (roots.size() > 1) {
    std::ostringstream os;
    os << roots.size() << " sign changes of curve1 - curve2";
    throw Error(Errc::multiple_crossings, os.str());
  }
  return roots.front();
}

bool ScanTable::ok() const { return failures() == 0; }

std::size_t ScanTable::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ScanRow& r) { return r.error.has_value(); }));
}

ScanTable scan(const std::string& parameter, const std::vector<double>& values,
               const std::function<Observables(double)>& fn) {
  if (values.empty()) throw Error(Errc::empty_values, "scan over '" + parameter + "' has no values");
  if (values.size() > 1) {
    const bool up = values[1] > values[0];
    for (std::size_t i = 1; i < values.size(); ++i)
      if (up ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1]))
        throw Error(Errc::invalid_argument, "scan values for '" + parameter + "' must be strictly monotone");
  }
  ScanTable t;
  t.parameter = parameter;
  for (double v : values) {
    ScanRow row;
    row.value = v;
    try {
      row.observables = fn(v);
    } catch (const Error& e) {
      row.error = e.what();
      row.error_code = errc_name(e.code());
    } catch (const std::exception& e) {
      row.error = e.what();
      row.error_code = "internal";
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace dwx
