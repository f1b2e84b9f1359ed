#pragma once

#include <vector>

#include "dwx/grid.hpp"

namespace dwx {

// Softened Coulomb interaction lambda / sqrt((x - x')^2 + s^2).
// lambda > 0 is repulsive, lambda < 0 attractive.
struct InteractionKernel {
  double lambda = 1.0;
  double softening = 1.0;
};

void validate_kernel(const InteractionKernel& k);

double kernel_value(const InteractionKernel& k, double x, double xp);

// V(m*h) for m = 0..n-1. On a uniform grid V(x_i, x_j) = row[|i-j|].
std::vector<double> kernel_row(const InteractionKernel& k, const Grid& grid);

}  // namespace dwx
