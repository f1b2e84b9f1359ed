#include "dwx/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dwx/error.hpp"

namespace dwx {

double Grid::x(std::size_t i) const {
  if (i + 1 == n) return x_max;
  return x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(n - 1);
}

Vec Grid::points() const {
  Vec p(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) p[static_cast<Eigen::Index>(i)] = x(i);
  return p;
}

double Grid::norm(const Vec& f) const { return std::sqrt(inner(f, f)); }

std::size_t Grid::nearest_index(double pos) const {
  double r = std::round((pos - x_min) / h);
  r = std::clamp(r, 0.0, static_cast<double>(n - 1));
  return static_cast<std::size_t>(r);
}

bool Grid::same_as(const Grid& other) const {
  return n == other.n && x_min == other.x_min && x_max == other.x_max;
}

Grid build_grid(double x_min, double x_max, std::int64_t n) {
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    std::ostringstream os;
    os << "x_max (" << x_max << ") must exceed x_min (" << x_min << ")";
    throw Error(Errc::invalid_extent, os.str());
  }
  if (n < 3) throw Error(Errc::too_few_points, "grid needs at least 3 points, got " + std::to_string(n));
  Grid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n = static_cast<std::size_t>(n);
  g.h = (x_max - x_min) / static_cast<double>(n - 1);
  return g;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!a.same_as(b)) throw Error(Errc::grid_mismatch, "orbitals live on different grids");
}

}  // namespace dwx
