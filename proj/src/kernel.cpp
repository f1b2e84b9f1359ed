#include "dwx/kernel.hpp"

#include <cmath>

#include "dwx/error.hpp"

namespace dwx {

void validate_kernel(const InteractionKernel& k) {
  if (!(k.softening > 0.0)) throw Error(Errc::invalid_argument, "kernel softening must be positive");
  if (!std::isfinite(k.lambda)) throw Error(Errc::invalid_argument, "kernel strength must be finite");
}

double kernel_value(const InteractionKernel& k, double x, double xp) {
  const double r = x - xp;
  return k.lambda / std::sqrt(r * r + k.softening * k.softening);
}

std::vector<double> kernel_row(const InteractionKernel& k, const Grid& g) {
  std::vector<double> row(g.n);
  for (std::size_t m = 0; m < g.n; ++m) {
    const double r = g.h * static_cast<double>(m);
    row[m] = k.lambda / std::sqrt(r * r + k.softening * k.softening);
  }
  return row;
}

}  // namespace dwx
