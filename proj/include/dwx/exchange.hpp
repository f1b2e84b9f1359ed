#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dwx/kernel.hpp"
#include "dwx/single_particle.hpp"

namespace dwx {

struct CoulombElement {
  double value = 0.0;
  std::optional<double> separation;
};

// phi(x_i) = h * sum_j V(x_i, x_j) w_j
Vec kernel_convolve(const Vec& w, const Grid& grid, const InteractionKernel& k);

// Double Riemann sum h^2 sum_ij f1 f2 (x_i) V f3 f4 (x_j).
CoulombElement coulomb_matrix_element(const Orbital& f1, const Orbital& f2, const Orbital& f3, const Orbital& f4,
                                      const InteractionKernel& k);

struct ExchangeField {
  Grid grid;
  Vec values;
};

// K(x) = sum_q psi_q(x) * integral psi_q(x') V(x, x') target(x') dx'
ExchangeField exchange_source(const std::vector<Orbital>& occupied, const Orbital& target, const InteractionKernel& k);

struct ExchangeScanRow {
  double d = 0.0;
  double G = 0.0;          // element(psi2, psi1a; psi1b, psi2)
  double G_control = 0.0;  // element(psi2, psi2; psi1b, psi2)
  double t1 = 0.0;
  double E1a = 0.0;
  double r1 = 0.0;         // rms radius of psi1a
};

// Rebuilds the wells at -d/2, +d/2 for every separation. psi1a/psi1b come
// from the doublet starting at pair_level; psi2 is the lower member of the
// doublet starting at spectator_level, (psi2a + psi2b)/sqrt(2).
std::vector<ExchangeScanRow> exchange_distance_scan(const DoubleWellSpec& base, const Grid& grid,
                                                    const std::vector<double>& separations, std::size_t pair_level,
                                                    std::size_t spectator_level, const InteractionKernel& k);

// Sign changes of psi among points with |psi| > 1e-6 max|psi|.
int node_count(const Orbital& psi);

struct CoherenceTerm {
  double contribution = 0.0;
  int nodes = 0;
  int sign_product = 0;  // sign of psi_q near the target times sign near the probe
};

struct CoherenceResult {
  std::vector<CoherenceTerm> terms;
  double total = 0.0;
};

// Splits <probe|K> into one term per external orbital.
CoherenceResult coherence_projection(const std::vector<Orbital>& externals, const Orbital& target,
                                     const Orbital& probe, const InteractionKernel& k);

// Copy shifted by `points` grid cells (positive moves right), zero filled.
Orbital translate(const Orbital& psi, std::int64_t points, const std::string& label);

}  // namespace dwx
