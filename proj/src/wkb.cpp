#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "dwx/error.hpp"
#include "dwx/single_particle.hpp"

namespace dwx {

namespace {

constexpr int kScan = 20000;
constexpr int kSimpson = 4000;

// Refines a bracket [lo, hi] in which f changes sign.
double bisect(const auto& f, double lo, double hi) {
  const bool lo_pos = f(lo) > 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) > 0.0) == lo_pos) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double wkb_exponent(const DoubleWellSpec& spec, double E) {
  validate_spec(spec);
  const double top = potential_value(spec, barrier_midpoint(spec));
  const double eps = 1e-12 * std::max(1.0, std::abs(top));
  if (E > top + eps) {
    std::ostringstream os;
    os << "E = " << E << " lies above the barrier top " << top;
    throw Error(Errc::no_barrier, os.str());
  }
  if (E >= top - eps) return 0.0;

  auto f = [&](double x) { return potential_value(spec, x) - E; };
  const double lo = std::min(spec.center_a, spec.center_b);
  const double hi = std::max(spec.center_a, spec.center_b);
  std::vector<double> crossings;
  double prev_x = lo;
  bool prev_pos = f(lo) > 0.0;
  for (int i = 1; i <= kScan; ++i) {
    const double x = lo + (hi - lo) * i / kScan;
    const bool pos = f(x) > 0.0;
    if (pos != prev_pos) crossings.push_back(bisect(f, prev_x, x));
    prev_x = x;
    prev_pos = pos;
  }
  if (crossings.empty()) throw Error(Errc::no_barrier, "U - E never becomes positive between the wells");
  if (crossings.size() != 2) {
    std::ostringstream os;
    os << "U - E changes sign " << crossings.size() << " times between the wells";
    throw Error(Errc::turning_point_ambiguity, os.str());
  }
  const double x1 = crossings[0], x2 = crossings[1];
  // x = x1 + (x2 - x1)(1 - cos th)/2 removes the square-root endpoint behaviour
  auto g = [&](double th) {
    const double x = x1 + 0.5 * (x2 - x1) * (1.0 - std::cos(th));
    return std::sqrt(2.0 * std::max(0.0, f(x))) * 0.5 * (x2 - x1) * std::sin(th);
  };
  const double a = std::numbers::pi / kSimpson;
  double s = g(0.0) + g(std::numbers::pi);
  for (int i = 1; i < kSimpson; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a * i);
  return s * a / 3.0;
}

}  // namespace dwx
