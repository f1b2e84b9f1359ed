#include "dwx/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dwx/error.hpp"

namespace dwx {

namespace {

double well_value(WellShape shape, double center, double depth, double width, double x) {
  if (depth == 0.0) return 0.0;
  if (shape == WellShape::square) {
    // small slack so translated copies sample identically despite rounding
    const double slack = 1e-9 * std::max(1.0, width);
    return std::abs(x - center) <= 0.5 * width + slack ? -depth : 0.0;
  }
  const double sigma = 0.5 * width;
  const double u = (x - center) / sigma;
  return -depth * std::exp(-0.5 * u * u);
}

bool a_is_left(const DoubleWellSpec& s) { return s.center_a <= s.center_b; }

}  // namespace

const char* shape_name(WellShape s) { return s == WellShape::square ? "square" : "gaussian"; }

void validate_spec(const DoubleWellSpec& s) {
  if (!(s.width_a > 0.0) || !(s.width_b > 0.0))
    throw Error(Errc::invalid_argument, "well widths must be positive");
  if (s.depth_a < 0.0 || s.depth_b < 0.0)
    throw Error(Errc::invalid_argument, "well depths must be non-negative");
  if (!(std::abs(s.center_a - s.center_b) > 0.5 * (s.width_a + s.width_b))) {
    std::ostringstream os;
    os << "wells overlap: |center_a - center_b| = " << std::abs(s.center_a - s.center_b)
       << " <= (width_a + width_b)/2 = " << 0.5 * (s.width_a + s.width_b);
    throw Error(Errc::invalid_argument, os.str());
  }
}

double potential_value(const DoubleWellSpec& s, double x) {
  return well_value(s.shape, s.center_a, s.depth_a, s.width_a, x) +
         well_value(s.shape, s.center_b, s.depth_b, s.width_b, x);
}

void check_margin(const DoubleWellSpec& s, const Grid& g) {
  const double margin = 5.0 * std::max(s.width_a, s.width_b);
  const double lo = std::min(s.center_a - 0.5 * s.width_a, s.center_b - 0.5 * s.width_b);
  const double hi = std::max(s.center_a + 0.5 * s.width_a, s.center_b + 0.5 * s.width_b);
  const double tol = 1e-9 * std::max(1.0, margin);
  if (lo - g.x_min < margin - tol || g.x_max - hi < margin - tol) {
    std::ostringstream os;
    os << "wells span [" << lo << ", " << hi << "] but need a margin of " << margin
       << " inside box [" << g.x_min << ", " << g.x_max << "]";
    throw Error(Errc::well_outside_box, os.str());
  }
}

Vec sample_potential(const DoubleWellSpec& s, const Grid& g) {
  validate_spec(s);
  check_margin(s, g);
  Vec u(static_cast<Eigen::Index>(g.n));
  for (std::size_t i = 0; i < g.n; ++i) u[static_cast<Eigen::Index>(i)] = potential_value(s, g.x(i));
  return u;
}

double inner_edge_a(const DoubleWellSpec& s) {
  return a_is_left(s) ? s.center_a + 0.5 * s.width_a : s.center_a - 0.5 * s.width_a;
}

double inner_edge_b(const DoubleWellSpec& s) {
  return a_is_left(s) ? s.center_b - 0.5 * s.width_b : s.center_b + 0.5 * s.width_b;
}

double barrier_midpoint(const DoubleWellSpec& s) {
  if (s.shape == WellShape::square) return 0.5 * (inner_edge_a(s) + inner_edge_b(s));
  // gaussian: bisection on dU/dx between the centres
  auto slope = [&](double x) {
    double sa = 0.5 * s.width_a, sb = 0.5 * s.width_b;
    double ua = (x - s.center_a) / sa, ub = (x - s.center_b) / sb;
    return s.depth_a * ua / sa * std::exp(-0.5 * ua * ua) + s.depth_b * ub / sb * std::exp(-0.5 * ub * ub);
  };
  double lo = std::min(s.center_a, s.center_b), hi = std::max(s.center_a, s.center_b);
  // slope > 0 just right of the left centre, < 0 just left of the right centre
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (slope(mid) > 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

DoubleWellSpec only_well_a(DoubleWellSpec s) {
  s.depth_b = 0.0;
  return s;
}

DoubleWellSpec only_well_b(DoubleWellSpec s) {
  s.depth_a = 0.0;
  return s;
}

DoubleWellSpec with_separation(DoubleWellSpec s, double d) {
  s.center_a = -0.5 * d;
  s.center_b = 0.5 * d;
  return s;
}

DoubleWellSpec with_barrier_width(DoubleWellSpec s, double w) {
  const double mid = 0.5 * (inner_edge_a(s) + inner_edge_b(s));
  const double sgn = a_is_left(s) ? 1.0 : -1.0;
  s.center_a = mid - sgn * (0.5 * w + 0.5 * s.width_a);
  s.center_b = mid + sgn * (0.5 * w + 0.5 * s.width_b);
  return s;
}

}  // namespace dwx
