#pragma once

#include <optional>
#include <vector>

#include "dwx/exchange.hpp"

namespace dwx {

enum class Sector { antisymmetric, symmetric };

const char* sector_name(Sector s);

// Ordered grid pairs i < j (antisymmetric) or i <= j (symmetric).
struct TwoBodySpace {
  std::size_t n = 0;
  Sector sector = Sector::antisymmetric;

  std::size_t dim() const;
  std::size_t index(std::size_t i, std::size_t j) const;
};

struct TwoBodyState {
  Grid grid;
  Sector sector = Sector::antisymmetric;
  Vec coefficients;  // unit Euclidean norm over the ordered pairs
  double energy = 0.0;
};

// h(x1) + h(x2) + V(x1, x2) on the sector-reduced basis. Requires n <= 512.
LinearOperator build_two_body(const DoubleWellSpec& spec, const Grid& grid, const InteractionKernel& k, Sector sector);

// Psi(x1, x2) on the full product grid with h^2 sum Psi^2 = 1.
Mat expand(const TwoBodyState& s);

// Sector coefficients of the (anti)symmetrised product f(x1) g(x2), normalised.
Vec product_state(const Orbital& f, const Orbital& g, Sector sector);

struct TwoBodySolveOptions {
  std::size_t k = 4;
  double tol = 1e-10;
  int max_restarts = 50;
  std::size_t krylov_dim = 0;
  std::optional<Vec> start;
  std::uint64_t seed = 12345;
};

std::vector<TwoBodyState> two_body_lowest(const DoubleWellSpec& spec, const Grid& grid, const InteractionKernel& k,
                                          Sector sector, const TwoBodySolveOptions& opt = {});

struct ReducedDensity {
  Mat rho;                  // rho(x_i, x_j)
  Vec occupations;          // descending
  std::vector<Orbital> natural_orbitals;
};

ReducedDensity one_body_rdm(const TwoBodyState& s);

// Probability beyond the barrier midpoint for the natural orbital that lies
// closest to span(psi1a, psi1b) inside the occupied natural-orbital subspace.
double well_b_occupation(const TwoBodyState& s, const LocalizedPair& pair1, const DoubleWellSpec& spec);

// Squared overlap of the state with span(configs) (configs need not be orthogonal).
double configuration_weight(const TwoBodyState& s, const std::vector<Vec>& configs);

struct StrongCouplingResult {
  double t_eff = 0.0;
  double Q = 0.0;         // (Q_aa - K_aa) - (Q_ab - K_ab)
  double Q_direct = 0.0;  // Q_aa - Q_ab
  double Q_aa = 0.0;      // element(psi1a, psi1a; psi2a, psi2a)
  double Q_ab = 0.0;      // element(psi1a, psi1a; psi2b, psi2b)
  double K_aa = 0.0;      // element(psi1a, psi2a; psi2a, psi1a)
  double K_ab = 0.0;      // element(psi1a, psi2b; psi2b, psi1a)
  double t2 = 0.0;
  double G = 0.0;          // element(psi2a, psi1a; psi1b, psi2b)
  double G_crossed = 0.0;  // element(psi2b, psi1a; psi1b, psi2a)
  double predicted = 0.0;  // t2^2 |G| / Q^2
  double weight_low = 0.0;
  double weight_high = 0.0;
};

struct StrongCouplingOptions {
  std::size_t states = 8;
  double tol = 1e-10;
  std::size_t krylov_dim = 0;
  int max_restarts = 50;
  std::uint64_t seed = 2024;  // perturbs the start vector
};

// Antisymmetric sector, symmetric wells.
StrongCouplingResult strong_coupling_amplitude(const DoubleWellSpec& spec, const Grid& grid,
                                               const InteractionKernel& k, const StrongCouplingOptions& opt = {});

}  // namespace dwx
