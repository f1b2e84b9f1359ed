#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dwx/eigensolve.hpp"
#include "dwx/potential.hpp"

namespace dwx {

// Real orbital sampled on a grid, normalised with the grid inner product.
struct Orbital {
  Grid grid;
  Vec values;
  double energy = 0.0;
  std::string label;
  double rms_radius = 0.0;

  double mean_x() const;
};

// Builds an orbital and fills rms_radius. With normalize set the values are
// rescaled to unit grid norm first.
Orbital make_orbital(const Grid& grid, Vec values, double energy, std::string label, bool normalize = false);

// H = -1/2 d^2/dx^2 + U on the grid, 3-point stencil, Dirichlet walls.
class Hamiltonian1D {
 public:
  Hamiltonian1D(Grid grid, Vec potential);

  const Grid& grid() const { return grid_; }
  const Vec& potential() const { return potential_; }
  LinearOperator op() const;
  Vec apply(const Vec& f) const;
  double element(const Vec& f, const Vec& g) const;  // <f|H|g>

 private:
  Grid grid_;
  Vec potential_;
};

Hamiltonian1D make_hamiltonian(const DoubleWellSpec& spec, const Grid& grid);

struct WellSolution {
  DoubleWellSpec spec;
  Hamiltonian1D hamiltonian;
  std::vector<Orbital> states;  // ascending energy, labelled "0", "1", ...
  std::vector<std::string> warnings;
};

WellSolution solve_wells(const DoubleWellSpec& spec, const Grid& grid, std::size_t k);

struct LocalizedPair {
  Orbital psi_a;
  Orbital psi_b;
  double E_a = 0.0;
  double E_b = 0.0;
  double t = 0.0;
};

// Rotates two doublet members into orbitals localised in well a and well b
// by diagonalising x inside their span. next_energy, when given, is the
// level above the doublet and is used for the gap check.
LocalizedPair localize_doublet(const Hamiltonian1D& H, const DoubleWellSpec& spec, const Orbital& lower,
                               const Orbital& upper, std::optional<double> next_energy = std::nullopt,
                               const std::string& level = "1");

// Doublet formed by states[first] and states[first + 1].
LocalizedPair localize_level(const WellSolution& sol, std::size_t first, const std::string& level = "1");

// Under-barrier action: integral of sqrt(2(U - E)) between the turning points.
double wkb_exponent(const DoubleWellSpec& spec, double E);

// t / (E_a - E_b); requires t <= 0.1 |E_a - E_b|.
double perturbative_mixing_direct(const LocalizedPair& pair);

// h * sum of psi^2 over points beyond x0 (to the right when right is set).
double probability_beyond(const Orbital& psi, double x0, bool right);

// Orbital of the same grid with values set to a + c*b and relabelled.
Orbital combine(const Orbital& a, double ca, const Orbital& b, double cb, const std::string& label);

}  // namespace dwx
