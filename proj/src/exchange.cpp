#include "dwx/exchange.hpp"

#include <cmath>
#include <sstream>

#include "dwx/error.hpp"

namespace dwx {

Vec kernel_convolve(const Vec& w, const Grid& g, const InteractionKernel& k) {
  validate_kernel(k);
  const auto row = kernel_row(k, g);
  const auto n = static_cast<std::ptrdiff_t>(g.n);
  Vec out(n);
  const double* wp = w.data();
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::ptrdiff_t j = 0; j < i; ++j) s += row[static_cast<std::size_t>(i - j)] * wp[j];
    for (std::ptrdiff_t j = i; j < n; ++j) s += row[static_cast<std::size_t>(j - i)] * wp[j];
    out[i] = g.h * s;
  }
  return out;
}

CoulombElement coulomb_matrix_element(const Orbital& f1, const Orbital& f2, const Orbital& f3, const Orbital& f4,
                                      const InteractionKernel& k) {
  require_same_grid(f1.grid, f2.grid);
  require_same_grid(f1.grid, f3.grid);
  require_same_grid(f1.grid, f4.grid);
  const Grid& g = f1.grid;
  const Vec phi = kernel_convolve(f3.values.cwiseProduct(f4.values), g, k);
  return {g.h * f1.values.cwiseProduct(f2.values).dot(phi), std::nullopt};
}

ExchangeField exchange_source(const std::vector<Orbital>& occupied, const Orbital& target, const InteractionKernel& k) {
  ExchangeField f{target.grid, Vec::Zero(static_cast<Eigen::Index>(target.grid.n))};
  validate_kernel(k);
  for (const auto& q : occupied) {
    require_same_grid(q.grid, target.grid);
    const Vec phi = kernel_convolve(q.values.cwiseProduct(target.values), target.grid, k);
    f.values += q.values.cwiseProduct(phi);
  }
  return f;
}

std::vector<ExchangeScanRow> exchange_distance_scan(const DoubleWellSpec& base, const Grid& grid,
                                                    const std::vector<double>& separations, std::size_t pair_level,
                                                    std::size_t spectator_level, const InteractionKernel& k) {
  validate_kernel(k);
  std::vector<ExchangeScanRow> rows;
  for (double d : separations) {
    const DoubleWellSpec spec = with_separation(base, d);
    const std::size_t need = std::max(pair_level, spectator_level) + 3;
    const WellSolution sol = solve_wells(spec, grid, need);
    const LocalizedPair p1 = localize_level(sol, pair_level, "1");
    const LocalizedPair p2 = localize_level(sol, spectator_level, "2");
    const double r = 1.0 / std::sqrt(2.0);
    const Orbital psi2 = combine(p2.psi_a, r, p2.psi_b, r, "2");
    ExchangeScanRow row;
    row.d = d;
    row.G = coulomb_matrix_element(psi2, p1.psi_a, p1.psi_b, psi2, k).value;
    row.G_control = coulomb_matrix_element(psi2, psi2, p1.psi_b, psi2, k).value;
    row.t1 = p1.t;
    row.E1a = p1.E_a;
    row.r1 = p1.psi_a.rms_radius;
    rows.push_back(row);
  }
  return rows;
}

int node_count(const Orbital& psi) {
  const double peak = psi.values.cwiseAbs().maxCoeff();
  const double floor = 1e-6 * peak;
  int nodes = 0;
  int last = 0;
  for (Eigen::Index i = 0; i < psi.values.size(); ++i) {
    const double v = psi.values[i];
    if (std::abs(v) <= floor) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++nodes;
    last = s;
  }
  return nodes;
}

namespace {

int weighted_sign(const Vec& f, const Vec& weight) {
  const double s = f.dot(weight.cwiseAbs());
  return s > 0.0 ? 1 : (s < 0.0 ? -1 : 0);
}

}  // namespace

CoherenceResult coherence_projection(const std::vector<Orbital>& externals, const Orbital& target,
                                     const Orbital& probe, const InteractionKernel& k) {
  require_same_grid(target.grid, probe.grid);
  const Grid& g = target.grid;
  for (std::size_t i = 0; i < externals.size(); ++i) {
    require_same_grid(externals[i].grid, g);
    for (std::size_t j = 0; j <= i; ++j) {
      const double ov = g.inner(externals[i].values, externals[j].values);
      const double want = i == j ? 1.0 : 0.0;
      if (std::abs(ov - want) > 1e-6) {
        std::ostringstream os;
        os << "<ext" << i << "|ext" << j << "> = " << ov;
        throw Error(Errc::non_orthonormal, os.str());
      }
    }
  }
  CoherenceResult out;
  for (const auto& q : externals) {
    CoherenceTerm term;
    const Vec phi = kernel_convolve(q.values.cwiseProduct(target.values), g, k);
    term.contribution = g.h * probe.values.dot(q.values.cwiseProduct(phi));
    term.nodes = node_count(q);
    term.sign_product = weighted_sign(q.values, target.values) * weighted_sign(q.values, probe.values);
    out.total += term.contribution;
    out.terms.push_back(term);
  }
  return out;
}

Orbital translate(const Orbital& psi, std::int64_t points, const std::string& label) {
  const auto n = static_cast<std::int64_t>(psi.grid.n);
  Vec v = Vec::Zero(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t src = i - points;
    if (src >= 0 && src < n) v[i] = psi.values[src];
  }
  return make_orbital(psi.grid, std::move(v), psi.energy, label);
}

}  // namespace dwx
