#include "dwx/hartree_fock.hpp"

#include <cmath>
#include <sstream>

#include "dwx/error.hpp"

namespace dwx {

HFMixResult solve_hf_mixing(const Hamiltonian1D& H, const LocalizedPair& pair1, const Orbital& psi2,
                            const InteractionKernel& k, const HFOptions& opt) {
  const Grid& g = H.grid();
  require_same_grid(g, pair1.psi_a.grid);
  require_same_grid(g, psi2.grid);
  const double n2 = g.inner(psi2.values, psi2.values);
  if (std::abs(n2 - 1.0) > 1e-8) throw Error(Errc::invalid_argument, "psi2 is not normalised");

  const ExchangeField K = exchange_source({psi2}, pair1.psi_a, k);
  HFMixResult r;
  r.G = g.inner(pair1.psi_b.values, K.values);
  const double delta = pair1.E_b - pair1.E_a;
  if (opt.check_regime && !(std::abs(r.G) <= 0.1 * std::abs(delta))) {
    std::ostringstream os;
    os << "|G| = " << std::abs(r.G) << " exceeds 0.1 |E1a - E1b| = " << 0.1 * std::abs(delta);
    throw Error(Errc::non_perturbative, os.str());
  }
  r.B_G1_perturbative = r.G / delta;
  r.delta_psi = Vec::Zero(static_cast<Eigen::Index>(g.n));
  if (K.values.cwiseAbs().maxCoeff() == 0.0) return r;

  const double sh = std::sqrt(g.h);
  ShiftedSolveOptions so;
  so.tol = opt.tol;
  const auto sol = shifted_solve(H.op(), pair1.E_a, sh * K.values, {sh * pair1.psi_a.values}, so);
  r.delta_psi = sol.x / sh;
  r.residual = sol.residual;
  r.B_G1_projected = g.inner(pair1.psi_b.values, r.delta_psi);
  return r;
}

TailComparison compare_tails(const DoubleWellSpec& spec, const Grid& grid, const InteractionKernel& k) {
  const WellSolution sol = solve_wells(spec, grid, 4);
  const LocalizedPair p1 = localize_level(sol, 0);
  const Orbital& psi2 = sol.states[2];
  const Vec& bare = p1.psi_a.values;

  TailComparison tc;
  HFOptions opt;
  opt.check_regime = false;
  tc.mix = solve_hf_mixing(sol.hamiltonian, p1, psi2, k, opt);
  tc.r1 = p1.psi_a.rms_radius;
  tc.E1a = p1.E_a;
  tc.E2 = psi2.energy;

  const double dir = spec.center_b > spec.center_a ? 1.0 : -1.0;
  tc.region_start = inner_edge_a(spec) + dir * 5.0 * tc.r1;
  tc.region_end = inner_edge_b(spec);
  tc.midpoint = barrier_midpoint(spec);
  const Vec with = p1.psi_a.values + tc.mix.delta_psi;
  const Vec phi = kernel_convolve(psi2.values.cwiseProduct(p1.psi_a.values), grid, k);
  const double gap = psi2.energy - p1.E_a;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    if ((x - tc.region_start) * dir <= 0.0 || (tc.region_end - x) * dir <= 0.0) continue;
    const auto ii = static_cast<Eigen::Index>(i);
    const double local = phi[ii] * psi2.values[ii] / gap;
    tc.rows.push_back({x, std::abs(bare[ii]), std::abs(with[ii]), std::abs(local + tc.mix.B_G1_projected * p1.psi_b.values[ii])});
  }
  if (tc.rows.empty()) {
    std::ostringstream os;
    os << "no grid points between " << tc.region_start << " and " << tc.region_end;
    throw Error(Errc::region_empty, os.str());
  }
  return tc;
}

std::vector<std::pair<double, double>> tail_profile(const DoubleWellSpec& spec, const Grid& grid, bool with_exchange,
                                                    const InteractionKernel& k) {
  const TailComparison tc = compare_tails(spec, grid, k);
  std::vector<std::pair<double, double>> out;
  out.reserve(tc.rows.size());
  for (const auto& r : tc.rows) out.emplace_back(r.x, with_exchange ? r.exchange : r.bare);
  return out;
}

EscapeResult wide_b_escape(const DoubleWellSpec& spec, const Grid& grid, const InteractionKernel& k,
                           const EscapeOptions& opt) {
  if (spec.width_b < 20.0 * spec.width_a) {
    std::ostringstream os;
    os << "width_b = " << spec.width_b << " is below 20 * width_a = " << 20.0 * spec.width_a;
    throw Error(Errc::invalid_argument, os.str());
  }
  const Hamiltonian1D H = make_hamiltonian(spec, grid);
  const WellSolution iso_a = solve_wells(only_well_a(spec), grid, 1);
  const WellSolution iso_b = solve_wells(only_well_b(spec), grid, opt.max_levels);
  const WellSolution full = solve_wells(spec, grid, opt.max_levels);

  EscapeResult res;
  for (const auto& s : iso_b.states)
    if (s.energy < 0.0) ++res.bound_levels_b;
  if (res.bound_levels_b < 20) {
    std::ostringstream os;
    os << "well b holds " << res.bound_levels_b << " bound levels, need at least 20";
    throw Error(Errc::insufficient_levels, os.str());
  }

  Vec pa = iso_a.states[0].values;
  if (pa[static_cast<Eigen::Index>(grid.nearest_index(spec.center_a))] < 0.0) pa = -pa;
  const Orbital psi1a = make_orbital(grid, pa, 0.0, "1a");
  res.E1a = H.element(pa, pa);

  // spectator: bound full-problem state, not psi1a itself, with most weight in well a
  Vec in_a = Vec::Zero(static_cast<Eigen::Index>(grid.n));
  for (std::size_t i = 0; i < grid.n; ++i)
    if (std::abs(grid.x(i) - spec.center_a) <= spec.width_a) in_a[static_cast<Eigen::Index>(i)] = 1.0;
  int best = -1;
  double best_w = -1.0;
  for (std::size_t i = 0; i < full.states.size(); ++i) {
    const auto& s = full.states[i];
    if (s.energy >= 0.0) break;
    const double ov = grid.inner(s.values, pa);
    if (ov * ov > 0.5) continue;
    const double w = grid.h * s.values.cwiseProduct(s.values).dot(in_a);
    if (w > best_w) {
      best_w = w;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw Error(Errc::insufficient_levels, "no bound spectator state besides psi1a");
  const Orbital& psi2 = full.states[static_cast<std::size_t>(best)];
  res.spectator_energy = psi2.energy;
  res.spectator_weight_a = best_w;

  const ExchangeField K = exchange_source({psi2}, psi1a, k);
  for (const auto& s : iso_b.states) {
    if (s.energy >= 0.0) break;
    Vec f = s.values - grid.inner(pa, s.values) * pa;
    f /= grid.norm(f);
    const double Ek = H.element(f, f);
    if (std::abs(Ek - res.E1a) > opt.bandwidth) continue;
    EscapeLevel lv;
    lv.energy = Ek;
    lv.t = -H.element(pa, f);
    lv.G = grid.inner(f, K.values);
    lv.amp_bare = lv.t / (Ek - res.E1a);
    lv.amp_exchange = (lv.t + lv.G) / (Ek - res.E1a);
    res.P_bare += lv.amp_bare * lv.amp_bare;
    res.P_exchange += lv.amp_exchange * lv.amp_exchange;
    res.levels.push_back(lv);
  }
  if (res.levels.empty()) throw Error(Errc::insufficient_levels, "no well-b level within the band around E1a");
  res.enhancement = res.P_bare > 0.0 ? res.P_exchange / res.P_bare : 0.0;
  return res;
}

}  // namespace dwx
