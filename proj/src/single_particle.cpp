#include "dwx/single_particle.hpp"

#include <cmath>
#include <sstream>

#include "dwx/error.hpp"

namespace dwx {

double Orbital::mean_x() const {
  const Vec x = grid.points();
  return grid.h * values.cwiseProduct(values).dot(x);
}

Orbital make_orbital(const Grid& grid, Vec values, double energy, std::string label, bool normalize) {
  if (static_cast<std::size_t>(values.size()) != grid.n)
    throw Error(Errc::grid_mismatch, "orbital values do not match the grid size");
  if (normalize) {
    const double nrm = grid.norm(values);
    if (!(nrm > 0.0)) throw Error(Errc::invalid_argument, "cannot normalise a zero orbital");
    values /= nrm;
  }
  Orbital o{grid, std::move(values), energy, std::move(label), 0.0};
  const Vec x = grid.points();
  const Vec rho = o.values.cwiseProduct(o.values);
  const double norm = grid.h * rho.sum();
  const double mx = grid.h * rho.dot(x) / norm;
  const double mx2 = grid.h * rho.dot(x.cwiseProduct(x)) / norm;
  o.rms_radius = std::sqrt(std::max(0.0, mx2 - mx * mx));
  return o;
}

Hamiltonian1D::Hamiltonian1D(Grid grid, Vec potential) : grid_(grid), potential_(std::move(potential)) {
  if (static_cast<std::size_t>(potential_.size()) != grid_.n)
    throw Error(Errc::grid_mismatch, "potential does not match the grid size");
}

LinearOperator Hamiltonian1D::op() const {
  const double inv_h2 = 1.0 / (grid_.h * grid_.h);
  Tridiagonal t;
  t.diag = potential_.array() + inv_h2;
  t.off = Vec::Constant(potential_.size() - 1, -0.5 * inv_h2);
  return tridiagonal_operator(std::move(t));
}

Vec Hamiltonian1D::apply(const Vec& f) const {
  const double inv_h2 = 1.0 / (grid_.h * grid_.h);
  const Eigen::Index n = f.size();
  Vec out = (potential_.array() + inv_h2).matrix().cwiseProduct(f);
  out.head(n - 1) -= 0.5 * inv_h2 * f.tail(n - 1);
  out.tail(n - 1) -= 0.5 * inv_h2 * f.head(n - 1);
  return out;
}

double Hamiltonian1D::element(const Vec& f, const Vec& g) const { return grid_.h * f.dot(apply(g)); }

Hamiltonian1D make_hamiltonian(const DoubleWellSpec& spec, const Grid& grid) {
  return Hamiltonian1D(grid, sample_potential(spec, grid));
}

WellSolution solve_wells(const DoubleWellSpec& spec, const Grid& grid, std::size_t k) {
  WellSolution sol{spec, make_hamiltonian(spec, grid), {}, {}};
  auto pairs = lowest_eigenpairs(sol.hamiltonian.op(), k);
  const double scale = 1.0 / std::sqrt(grid.h);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    sol.states.push_back(make_orbital(grid, pairs[i].vector * scale, pairs[i].energy, std::to_string(i)));
    if (pairs[i].energy >= 0.0) {
      std::ostringstream os;
      os << "level " << i << " has E = " << pairs[i].energy << " >= 0 (not bound on this box)";
      sol.warnings.push_back(os.str());
    }
  }
  return sol;
}

namespace {

// Positive at the well centre; when the orbital has a node there, the first
// significant lobe from the left is made positive instead.
void fix_sign(Vec& v, const Grid& g, double center) {
  const double peak = v.cwiseAbs().maxCoeff();
  const double at_center = v[static_cast<Eigen::Index>(g.nearest_index(center))];
  double s = at_center;
  if (std::abs(at_center) < 1e-3 * peak) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (std::abs(v[i]) > 0.1 * peak) {
        s = v[i];
        break;
      }
  }
  if (s < 0.0) v = -v;
}

}  // namespace

LocalizedPair localize_doublet(const Hamiltonian1D& H, const DoubleWellSpec& spec, const Orbital& lower,
                               const Orbital& upper, std::optional<double> next_energy, const std::string& level) {
  require_same_grid(lower.grid, upper.grid);
  require_same_grid(lower.grid, H.grid());
  const Grid& g = H.grid();
  if (next_energy) {
    const double split = std::abs(upper.energy - lower.energy);
    const double gap = *next_energy - std::max(upper.energy, lower.energy);
    if (!(gap > 10.0 * split)) {
      std::ostringstream os;
      os << "gap to next level " << gap << " does not exceed 10x the doublet splitting " << split;
      throw Error(Errc::not_a_doublet, os.str());
    }
  }
  const Vec x = g.points();
  Eigen::Matrix2d X;
  X(0, 0) = g.h * lower.values.cwiseProduct(x).dot(lower.values);
  X(1, 1) = g.h * upper.values.cwiseProduct(x).dot(upper.values);
  X(0, 1) = X(1, 0) = g.h * lower.values.cwiseProduct(x).dot(upper.values);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(X);
  const Eigen::Matrix2d R = es.eigenvectors();
  Vec left = R(0, 0) * lower.values + R(1, 0) * upper.values;
  Vec right = R(0, 1) * lower.values + R(1, 1) * upper.values;

  const bool a_left = spec.center_a <= spec.center_b;
  Vec va = a_left ? left : right;
  Vec vb = a_left ? right : left;
  fix_sign(va, g, spec.center_a);
  fix_sign(vb, g, spec.center_b);

  LocalizedPair p;
  p.E_a = H.element(va, va);
  p.E_b = H.element(vb, vb);
  p.t = -H.element(va, vb);
  if (p.t < 0.0) {
    vb = -vb;
    p.t = -p.t;
  }
  p.psi_a = make_orbital(g, std::move(va), p.E_a, level + "a");
  p.psi_b = make_orbital(g, std::move(vb), p.E_b, level + "b");
  return p;
}

LocalizedPair localize_level(const WellSolution& sol, std::size_t first, const std::string& level) {
  if (first + 1 >= sol.states.size())
    throw Error(Errc::invalid_argument, "doublet index beyond the solved states");
  std::optional<double> next;
  if (first + 2 < sol.states.size()) next = sol.states[first + 2].energy;
  return localize_doublet(sol.hamiltonian, sol.spec, sol.states[first], sol.states[first + 1], next, level);
}

double perturbative_mixing_direct(const LocalizedPair& p) {
  if (p.t == 0.0) return 0.0;
  const double delta = p.E_a - p.E_b;
  if (!(std::abs(p.t) <= 0.1 * std::abs(delta))) {
    std::ostringstream os;
    os << "t = " << p.t << " is not small against |E_a - E_b| = " << std::abs(delta);
    throw Error(Errc::non_perturbative, os.str());
  }
  return p.t / delta;
}

double probability_beyond(const Orbital& psi, double x0, bool right) {
  double s = 0.0;
  for (std::size_t i = 0; i < psi.grid.n; ++i) {
    const double xi = psi.grid.x(i);
    if (right ? xi > x0 : xi < x0) s += psi.values[static_cast<Eigen::Index>(i)] * psi.values[static_cast<Eigen::Index>(i)];
  }
  return psi.grid.h * s;
}

Orbital combine(const Orbital& a, double ca, const Orbital& b, double cb, const std::string& label) {
  require_same_grid(a.grid, b.grid);
  return make_orbital(a.grid, ca * a.values + cb * b.values, 0.0, label);
}

}  // namespace dwx
