#include "dwx/two_particle.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "dwx/error.hpp"

namespace dwx {

const char* sector_name(Sector s) { return s == Sector::antisymmetric ? "antisymmetric" : "symmetric"; }

std::size_t TwoBodySpace::dim() const {
  return sector == Sector::antisymmetric ? n * (n - 1) / 2 : n * (n + 1) / 2;
}

std::size_t TwoBodySpace::index(std::size_t i, std::size_t j) const {
  if (sector == Sector::antisymmetric) return i * n - i * (i + 1) / 2 + (j - i - 1);
  return i * n - (i * (i + 1)) / 2 + j;
}

namespace {

constexpr std::size_t kMaxPoints = 512;

struct TwoBodyAction {
  TwoBodySpace space;
  std::vector<std::size_t> row_start;  // index(i, first j of row i)
  Vec diag;
  double off = 0.0;

  std::size_t at(std::size_t i, std::size_t j) const {
    const std::size_t first = space.sector == Sector::antisymmetric ? i + 1 : i;
    return row_start[i] + (j - first);
  }

  void operator()(const Vec& c, Vec& y) const {
    const std::size_t n = space.n;
    const bool sym = space.sector == Sector::symmetric;
    const double o = off;
    const double o2 = off * std::sqrt(2.0);
    y.resize(c.size());
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t first = sym ? i : i + 1;
      for (std::size_t j = first; j < n; ++j) {
        const std::size_t idx = row_start[i] + (j - first);
        double s = diag[static_cast<Eigen::Index>(idx)] * c[static_cast<Eigen::Index>(idx)];
        if (sym && i == j) {
          double nb = 0.0;
          if (i >= 1) nb += c[static_cast<Eigen::Index>(at(i - 1, i))];
          if (i + 1 < n) nb += c[static_cast<Eigen::Index>(at(i, i + 1))];
          y[static_cast<Eigen::Index>(idx)] = s + o2 * nb;
          continue;
        }
        if (i >= 1) s += o * c[static_cast<Eigen::Index>(at(i - 1, j))];
        if (i + 1 < j) s += o * c[static_cast<Eigen::Index>(at(i + 1, j))];
        else if (sym) s += o2 * c[static_cast<Eigen::Index>(at(j, j))];
        if (j - 1 > i) s += o * c[static_cast<Eigen::Index>(at(i, j - 1))];
        else if (sym) s += o2 * c[static_cast<Eigen::Index>(at(i, i))];
        if (j + 1 < n) s += o * c[static_cast<Eigen::Index>(at(i, j + 1))];
        y[static_cast<Eigen::Index>(idx)] = s;
      }
    }
  }
};

}  // namespace

LinearOperator build_two_body(const DoubleWellSpec& spec, const Grid& grid, const InteractionKernel& k, Sector sector) {
  if (grid.n > kMaxPoints) {
    std::ostringstream os;
    os << "two-body grid has " << grid.n << " points, limit is " << kMaxPoints;
    throw Error(Errc::too_large, os.str());
  }
  validate_kernel(k);
  const Vec U = sample_potential(spec, grid);
  const auto vrow = kernel_row(k, grid);
  auto act = std::make_shared<TwoBodyAction>();
  act->space = {grid.n, sector};
  act->row_start.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i)
    act->row_start[i] = sector == Sector::antisymmetric ? (i + 1 < grid.n ? act->space.index(i, i + 1) : act->space.dim())
                                                        : act->space.index(i, i);
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  act->off = -0.5 * inv_h2;
  act->diag.resize(static_cast<Eigen::Index>(act->space.dim()));
  for (std::size_t i = 0; i < grid.n; ++i) {
    const std::size_t first = sector == Sector::antisymmetric ? i + 1 : i;
    for (std::size_t j = first; j < grid.n; ++j)
      act->diag[static_cast<Eigen::Index>(act->at(i, j))] =
          2.0 * inv_h2 + U[static_cast<Eigen::Index>(i)] + U[static_cast<Eigen::Index>(j)] + vrow[j - i];
  }
  const std::size_t dim = act->space.dim();
  return LinearOperator(dim, [act](const Vec& in, Vec& out) { (*act)(in, out); });
}

Mat expand(const TwoBodyState& s) {
  const std::size_t n = s.grid.n;
  const TwoBodySpace sp{n, s.sector};
  const double h = s.grid.h;
  const double r2 = 1.0 / (std::sqrt(2.0) * h);
  Mat psi = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (s.sector == Sector::symmetric)
      psi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = s.coefficients[static_cast<Eigen::Index>(sp.index(i, i))] / h;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = s.coefficients[static_cast<Eigen::Index>(sp.index(i, j))] * r2;
      psi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      psi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = s.sector == Sector::symmetric ? v : -v;
    }
  }
  return psi;
}

Vec product_state(const Orbital& f, const Orbital& g, Sector sector) {
  require_same_grid(f.grid, g.grid);
  const std::size_t n = f.grid.n;
  const TwoBodySpace sp{n, sector};
  const double h = f.grid.h;
  const double sgn = sector == Sector::symmetric ? 1.0 : -1.0;
  Vec c(static_cast<Eigen::Index>(sp.dim()));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (sector == Sector::symmetric) c[static_cast<Eigen::Index>(sp.index(i, i))] = h * 2.0 * f.values[ii] * g.values[ii];
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      // c_ij = sqrt(2) h Psi(i, j) for the unnormalised Psi = f g +- g f
      c[static_cast<Eigen::Index>(sp.index(i, j))] =
          std::sqrt(2.0) * h * (f.values[ii] * g.values[jj] + sgn * g.values[ii] * f.values[jj]);
    }
  }
  const double nrm = c.norm();
  if (!(nrm > 0.0)) throw Error(Errc::invalid_argument, "product state vanishes in this sector");
  return c / nrm;
}

std::vector<TwoBodyState> two_body_lowest(const DoubleWellSpec& spec, const Grid& grid, const InteractionKernel& k,
                                          Sector sector, const TwoBodySolveOptions& opt) {
  const LinearOperator op = build_two_body(spec, grid, k, sector);
  SolverOptions so;
  so.tol = opt.tol;
  so.max_restarts = opt.max_restarts;
  so.krylov_dim = opt.krylov_dim;
  so.start = opt.start;
  so.seed = opt.seed;
  const auto pairs = lowest_eigenpairs(op, opt.k, so);
  std::vector<TwoBodyState> out;
  for (const auto& p : pairs) out.push_back({grid, sector, p.vector, p.energy});
  return out;
}

ReducedDensity one_body_rdm(const TwoBodyState& s) {
  const Mat psi = expand(s);
  const double h = s.grid.h;
  ReducedDensity r;
  r.rho = 2.0 * h * psi * psi.transpose();
  r.rho = 0.5 * (r.rho + r.rho.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(h * r.rho);
  const auto n = es.eigenvalues().size();
  r.occupations.resize(n);
  const double inv_sqrt_h = 1.0 / std::sqrt(h);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = n - 1 - i;
    r.occupations[i] = es.eigenvalues()[src];
    Vec v = es.eigenvectors().col(src) * inv_sqrt_h;
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    if (v[big] < 0.0) v = -v;
    r.natural_orbitals.push_back(make_orbital(s.grid, std::move(v), r.occupations[i], "no" + std::to_string(i)));
  }
  return r;
}

double well_b_occupation(const TwoBodyState& s, const LocalizedPair& pair1, const DoubleWellSpec& spec) {
  const ReducedDensity rdm = one_body_rdm(s);
  const Grid& g = s.grid;
  std::vector<std::size_t> occ;
  for (Eigen::Index i = 0; i < rdm.occupations.size(); ++i)
    if (rdm.occupations[i] >= 0.5) occ.push_back(static_cast<std::size_t>(i));
  if (occ.empty()) occ.push_back(0);
  const auto m = static_cast<Eigen::Index>(occ.size());
  Mat overlap(2, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const Vec& v = rdm.natural_orbitals[occ[static_cast<std::size_t>(c)]].values;
    overlap(0, c) = g.inner(pair1.psi_a.values, v);
    overlap(1, c) = g.inner(pair1.psi_b.values, v);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(overlap.transpose() * overlap);
  const double best = es.eigenvalues()[m - 1];
  if (best < 0.9) {
    std::ostringstream os;
    os << "best natural orbital has only " << best << " of its weight in span(psi1a, psi1b)";
    throw Error(Errc::no_identifiable_orbital, os.str());
  }
  const Vec y = es.eigenvectors().col(m - 1);
  Vec phi = Vec::Zero(static_cast<Eigen::Index>(g.n));
  for (Eigen::Index c = 0; c < m; ++c) phi += y[c] * rdm.natural_orbitals[occ[static_cast<std::size_t>(c)]].values;
  const Orbital o = make_orbital(g, std::move(phi), 0.0, "phi", true);
  return probability_beyond(o, barrier_midpoint(spec), spec.center_b > spec.center_a);
}

double configuration_weight(const TwoBodyState& s, const std::vector<Vec>& configs) {
  const auto m = static_cast<Eigen::Index>(configs.size());
  Mat S(m, m);
  Vec b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    b[i] = configs[static_cast<std::size_t>(i)].dot(s.coefficients);
    for (Eigen::Index j = 0; j < m; ++j) S(i, j) = configs[static_cast<std::size_t>(i)].dot(configs[static_cast<std::size_t>(j)]);
  }
  return b.dot(S.ldlt().solve(b));
}

StrongCouplingResult strong_coupling_amplitude(const DoubleWellSpec& spec, const Grid& grid,
                                               const InteractionKernel& k, const StrongCouplingOptions& opt) {
  const double tol = 1e-9 * std::max(1.0, std::abs(spec.center_b));
  if (std::abs(spec.center_a + spec.center_b) > tol || spec.depth_a != spec.depth_b || spec.width_a != spec.width_b)
    throw Error(Errc::invalid_argument, "strong coupling needs mirror-symmetric wells about x = 0");
  const WellSolution sol = solve_wells(spec, grid, 5);
  const LocalizedPair p1 = localize_level(sol, 0, "1");
  const LocalizedPair p2 = localize_level(sol, 2, "2");

  StrongCouplingResult r;
  r.t2 = p2.t;
  r.Q_aa = coulomb_matrix_element(p1.psi_a, p1.psi_a, p2.psi_a, p2.psi_a, k).value;
  r.Q_ab = coulomb_matrix_element(p1.psi_a, p1.psi_a, p2.psi_b, p2.psi_b, k).value;
  r.K_aa = coulomb_matrix_element(p1.psi_a, p2.psi_a, p2.psi_a, p1.psi_a, k).value;
  r.K_ab = coulomb_matrix_element(p1.psi_a, p2.psi_b, p2.psi_b, p1.psi_a, k).value;
  r.Q_direct = r.Q_aa - r.Q_ab;
  // The pair is antisymmetrised, so each configuration energy carries its
  // exchange term.
  r.Q = (r.Q_aa - r.K_aa) - (r.Q_ab - r.K_ab);
  r.G = coulomb_matrix_element(p2.psi_a, p1.psi_a, p1.psi_b, p2.psi_b, k).value;
  r.G_crossed = coulomb_matrix_element(p2.psi_b, p1.psi_a, p1.psi_b, p2.psi_a, k).value;
  if (!(std::abs(r.Q) >= 10.0 * std::max(r.t2, std::abs(r.G)))) {
    std::ostringstream os;
    os << "Q = " << r.Q << " is not >= 10 max(t2 = " << r.t2 << ", |G| = " << std::abs(r.G) << ")";
    throw Error(Errc::regime_violation, os.str());
  }
  r.predicted = r.t2 * r.t2 * std::abs(r.G) / (r.Q * r.Q);

  const Vec d_aa = product_state(p1.psi_a, p2.psi_a, Sector::antisymmetric);
  const Vec d_bb = product_state(p1.psi_b, p2.psi_b, Sector::antisymmetric);
  TwoBodySolveOptions so;
  so.k = opt.states;
  so.tol = opt.tol;
  so.krylov_dim = opt.krylov_dim;
  so.max_restarts = opt.max_restarts;
  so.seed = opt.seed;
  so.start = d_aa + 0.1 * random_vector(static_cast<std::size_t>(d_aa.size()), opt.seed) / std::sqrt(static_cast<double>(d_aa.size()));
  const auto states = two_body_lowest(spec, grid, k, Sector::antisymmetric, so);

  std::vector<std::size_t> hits;
  std::vector<double> weights;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double w = configuration_weight(states[i], {d_aa, d_bb});
    if (w >= 0.8) {
      hits.push_back(i);
      weights.push_back(w);
    }
  }
  if (hits.size() != 2) {
    std::ostringstream os;
    os << hits.size() << " of the " << states.size() << " lowest states carry >= 0.8 weight on |1a2a>, |1b2b>";
    throw Error(Errc::states_not_identifiable, os.str());
  }
  r.t_eff = 0.5 * std::abs(states[hits[1]].energy - states[hits[0]].energy);
  r.weight_low = weights[0];
  r.weight_high = weights[1];
  return r;
}

}  // namespace dwx
