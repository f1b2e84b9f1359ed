#pragma once

#include <vector>

#include "dwx/exchange.hpp"

namespace dwx {

struct HFMixResult {
  Vec delta_psi;                    // grid values, orthogonal to psi1a
  double G = 0.0;                   // <psi1b|K>
  double B_G1_projected = 0.0;      // <psi1b|delta_psi>
  double B_G1_perturbative = 0.0;   // G / (E1b - E1a)
  double residual = 0.0;
};

struct HFOptions {
  bool check_regime = true;  // |G| <= 0.1 |E1a - E1b|
  double tol = 1e-10;
};

// Frozen-spectator linear response: K = exchange_source({psi2}, psi1a) and
// (H - E1a) delta_psi = K with psi1a deflated.
HFMixResult solve_hf_mixing(const Hamiltonian1D& H, const LocalizedPair& pair1, const Orbital& psi2,
                            const InteractionKernel& k, const HFOptions& opt = {});

struct TailRow {
  double x = 0.0;
  double bare = 0.0;       // |psi1| of the bare ground state
  double exchange = 0.0;   // |psi1a + delta_psi|
  double predicted = 0.0;  // |phi psi2 / (E2 - E1a) + B_G1 psi1b|
};

struct TailComparison {
  std::vector<TailRow> rows;
  double region_start = 0.0;
  double region_end = 0.0;
  double midpoint = 0.0;  // barrier midpoint; the bare tail is textbook up to here
  double r1 = 0.0;
  double E1a = 0.0;
  double E2 = 0.0;
  HFMixResult mix;
};

// Tails between 5 r1 beyond well a's inner edge and well b's inner edge.
// The bare tail is the localised psi1a; psi2 is the third eigenstate.
TailComparison compare_tails(const DoubleWellSpec& spec, const Grid& grid, const InteractionKernel& k);

// (x, |psi1(x)|) with or without the exchange correction.
std::vector<std::pair<double, double>> tail_profile(const DoubleWellSpec& spec, const Grid& grid, bool with_exchange,
                                                    const InteractionKernel& k);

struct EscapeLevel {
  double energy = 0.0;
  double t = 0.0;
  double G = 0.0;
  double amp_bare = 0.0;
  double amp_exchange = 0.0;
};

struct EscapeResult {
  double P_bare = 0.0;
  double P_exchange = 0.0;
  double enhancement = 0.0;
  double E1a = 0.0;
  double spectator_energy = 0.0;
  double spectator_weight_a = 0.0;
  std::size_t bound_levels_b = 0;
  std::vector<EscapeLevel> levels;
};

struct EscapeOptions {
  double bandwidth = 0.5;
  std::size_t max_levels = 120;
};

// Leak of psi1a into a wide well b, summed over well-b levels within the
// band, with and without the exchange channel.
EscapeResult wide_b_escape(const DoubleWellSpec& spec, const Grid& grid, const InteractionKernel& k,
                           const EscapeOptions& opt = {});

}  // namespace dwx
