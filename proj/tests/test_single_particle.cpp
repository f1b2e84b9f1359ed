#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "dwx/analysis.hpp"
#include "dwx/single_particle.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace dwx;

namespace {

DoubleWellSpec symmetric(double depth = 1.5) {
  DoubleWellSpec s;
  s.depth_a = depth;
  s.depth_b = depth;
  return s;
}

// Ground state of one isolated well, from a dense solve of the oracle matrix.
Vec isolated_ground(const DoubleWellSpec& spec, const Grid& g) {
  Vec U(g.n);
  for (std::size_t i = 0; i < g.n; ++i) U(i) = potential_value(spec, g.x(i));
  Eigen::SelfAdjointEigenSolver<Mat> es(oracle::dense_hamiltonian(U, g.h));
  Vec v = es.eigenvectors().col(0);
  return v / g.norm(v);
}

LocalizedPair manual_pair(double t, double Ea, double Eb) {
  LocalizedPair p;
  p.t = t;
  p.E_a = Ea;
  p.E_b = Eb;
  return p;
}

}  // namespace

TEST_CASE("symmetric deep wells form a doublet split by 2t") {
  const Grid g = build_grid(-30, 30, 1201);
  const auto sol = solve_wells(symmetric(2.0), g, 4);
  CHECK(sol.warnings.empty());
  const double split = sol.states[1].energy - sol.states[0].energy;
  CHECK(split > 0);
  CHECK(split < 1e-2 * (sol.states[2].energy - sol.states[1].energy));
  const auto p = localize_level(sol, 0);
  CHECK(std::abs(2 * p.t - split) <= 1e-9);
}

TEST_CASE("single well: ground state sits in well a") {
  DoubleWellSpec s;
  s.depth_b = 0.0;
  const auto sol = solve_wells(s, build_grid(-30, 30, 1201), 1);
  CHECK(std::abs(sol.states[0].mean_x() - s.center_a) <= s.width_a / 4);
}

TEST_CASE("zero-depth wells reproduce the particle in a box") {
  DoubleWellSpec s;
  s.depth_a = 0.0;
  s.depth_b = 0.0;
  const Grid g = build_grid(-20, 20, 2001);
  const auto sol = solve_wells(s, g, 5);
  const double L = g.x_max - g.x_min;
  for (int k = 0; k < 5; ++k) {
    const double exact = (k + 1) * (k + 1) * M_PI * M_PI / (2 * L * L);
    CHECK(rel_diff(sol.states[k].energy, exact) < 0.005);
  }
  CHECK(sol.warnings.size() == 5);  // every level is at E > 0
}

TEST_CASE("symmetric localisation is the +- combination") {
  const Grid g = build_grid(-20, 20, 801);
  const auto sol = solve_wells(symmetric(), g, 3);
  const auto p = localize_level(sol, 0);
  const Vec& plus = sol.states[0].values;
  const Vec& minus = sol.states[1].values;
  const Vec a = (plus + minus) / std::sqrt(2.0);
  const Vec b = (plus - minus) / std::sqrt(2.0);
  const double da = std::min((p.psi_a.values - a).norm(), (p.psi_a.values + a).norm());
  const double db = std::min((p.psi_a.values - b).norm(), (p.psi_a.values + b).norm());
  CHECK(std::min(da, db) * std::sqrt(g.h) < 1e-8);
  CHECK(std::abs(p.E_a - p.E_b) < 1e-10);
  CHECK(std::abs(p.t - 0.5 * (sol.states[1].energy - sol.states[0].energy)) < 1e-9);
}

TEST_CASE("asymmetric localisation matches the isolated-well ground states") {
  DoubleWellSpec s;
  s.depth_a = 1.6;
  s.depth_b = 1.5;
  s.center_a = -4;
  s.center_b = 4;
  const Grid g = build_grid(-20, 20, 801);
  const auto sol = solve_wells(s, g, 3);
  const auto p = localize_level(sol, 0);
  CHECK(p.t < 0.01 * std::abs(p.E_a - p.E_b));
  const Vec iso_a = isolated_ground(only_well_a(s), g);
  const Vec iso_b = isolated_ground(only_well_b(s), g);
  CHECK(std::pow(g.inner(p.psi_a.values, iso_a), 2) >= 0.99);
  CHECK(std::pow(g.inner(p.psi_b.values, iso_b), 2) >= 0.99);
}

TEST_CASE("localising a localised pair is idempotent") {
  DoubleWellSpec s;
  s.depth_a = 1.55;
  s.depth_b = 1.5;
  const Grid g = build_grid(-20, 20, 801);
  const auto sol = solve_wells(s, g, 3);
  const auto p = localize_level(sol, 0);
  const auto q = localize_doublet(sol.hamiltonian, s, p.psi_a, p.psi_b);
  CHECK((q.psi_a.values - p.psi_a.values).norm() * std::sqrt(g.h) < 1e-10);
  CHECK((q.psi_b.values - p.psi_b.values).norm() * std::sqrt(g.h) < 1e-10);
  CHECK(std::abs(q.t - p.t) < 1e-10);
}

TEST_CASE("localize_doublet rejects a non-doublet") {
  const auto sol = solve_wells(symmetric(), build_grid(-20, 20, 801), 3);
  const double crowded = sol.states[1].energy + (sol.states[1].energy - sol.states[0].energy);
  CHECK(error_of([&] { localize_doublet(sol.hamiltonian, sol.spec, sol.states[0], sol.states[1], crowded); }) ==
        Errc::not_a_doublet);
}

TEST_CASE("property: localized pair invariants") {
  for (const double depth_a : {1.5, 1.52, 1.56}) {
    DoubleWellSpec s;
    s.depth_a = depth_a;
    s.depth_b = 1.5;
    const Grid g = build_grid(-20, 20, 801);
    const auto p = localize_level(solve_wells(s, g, 3), 0);
    CHECK(std::abs(g.inner(p.psi_a.values, p.psi_b.values)) < 1e-8);
    CHECK(p.t >= 0);
    CHECK(std::abs(p.psi_a.mean_x() - s.center_a) < s.width_a / 2);
    CHECK(std::abs(p.psi_b.mean_x() - s.center_b) < s.width_b / 2);
    CHECK(std::abs(g.norm(p.psi_a.values) - 1) < 1e-10);
    CHECK(p.psi_a.rms_radius > 0);
    CHECK(p.psi_a.values(g.nearest_index(s.center_a)) > 0);
    CHECK(p.psi_b.values(g.nearest_index(s.center_b)) > 0);
  }
}

TEST_CASE("property: mirror symmetry of the localized pair") {
  for (const WellShape shape : {WellShape::square, WellShape::gaussian}) {
    DoubleWellSpec s = symmetric();
    s.shape = shape;
    const Grid g = build_grid(-20, 20, 1001);
    const auto p = localize_level(solve_wells(s, g, 3), 0);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) worst = std::max(worst, std::abs(p.psi_a.values(i) - p.psi_b.values(g.n - 1 - i)));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("wkb_exponent examples") {
  const DoubleWellSpec s = symmetric();  // square barrier of width 8 at height 0
  // each square edge carries a 1e-9 * width slack, so the sampled barrier is 8 - 4e-9
  const double w = 8.0 - 4e-9;
  for (const double E : {-0.2, -0.9, -1.4})
    CHECK(rel_diff(wkb_exponent(s, E), w * std::sqrt(-2.0 * E)) < 1e-11);
  CHECK(wkb_exponent(s, 0.0) == 0.0);
  CHECK(error_of([&] { wkb_exponent(s, 0.3); }) == Errc::no_barrier);
}

TEST_CASE("wkb_exponent on a gaussian barrier matches adaptive quadrature") {
  DoubleWellSpec s;
  s.shape = WellShape::gaussian;
  s.center_a = -2.5;
  s.center_b = 2.5;
  s.width_a = 3.0;
  s.width_b = 2.0;
  s.depth_a = 1.2;
  s.depth_b = 1.0;
  const double top = potential_value(s, barrier_midpoint(s));
  for (const double frac : {0.2, 0.5, 0.9}) {
    const double E = -frac * 1.0 + (1 - frac) * top;
    auto f = [&](double x) { return potential_value(s, x) - E; };
    const double mid = barrier_midpoint(s);
    const double x1 = oracle::bisect(f, s.center_a, mid);
    const double x2 = oracle::bisect(f, mid, s.center_b);
    const double ref =
        oracle::adaptive_simpson([&](double x) { return std::sqrt(2 * std::max(0.0, f(x))); }, x1, x2, 1e-12);
    CHECK(rel_diff(wkb_exponent(s, E), ref) < 1e-6);
  }
}

TEST_CASE("perturbative_mixing_direct examples") {
  CHECK(rel_diff(perturbative_mixing_direct(manual_pair(1e-6, -1.01, -1.0)), -1e-4) < 1e-9);
  CHECK(perturbative_mixing_direct(manual_pair(0.0, -1.01, -1.0)) == 0.0);
  CHECK(error_of([] { perturbative_mixing_direct(manual_pair(0.01, -1.01, -1.0)); }) == Errc::non_perturbative);
}

TEST_CASE("|B_t1|^2 falls with the barrier at twice the WKB rate") {
  DoubleWellSpec base;
  base.depth_a = 1.56;
  base.depth_b = 1.5;
  const Grid g = build_grid(-30, 30, 3001);
  std::vector<double> w, lnB2, S;
  for (const double width : {4.0, 5.0, 6.0, 7.0, 8.0}) {
    const auto s = with_barrier_width(base, width);
    const auto p = localize_level(solve_wells(s, g, 3), 0);
    const double B = perturbative_mixing_direct(p);
    w.push_back(width);
    lnB2.push_back(std::log(B * B));
    S.push_back(wkb_exponent(s, 0.5 * (p.E_a + p.E_b)));
  }
  const auto fitB = oracle::least_squares(w, lnB2);
  const auto fitS = oracle::least_squares(w, S);
  CHECK(std::abs(fitB.slope / (-2 * fitS.slope) - 1) <= 0.15);
}

TEST_CASE("property: log t is linear in the barrier width with the WKB slope") {
  const Grid g = build_grid(-30, 30, 3001);
  const DoubleWellSpec base = symmetric();
  Points t_pts;
  std::vector<double> w, S;
  for (double width = 2; width <= 9; width += 1) {
    const auto s = with_barrier_width(base, width);
    const auto sol = solve_wells(s, g, 3);
    const auto p = localize_level(sol, 0);
    t_pts.emplace_back(width, p.t);
    w.push_back(width);
    S.push_back(wkb_exponent(s, 0.5 * (sol.states[0].energy + sol.states[1].energy)));
  }
  const auto fit = fit_exponential(t_pts);
  CHECK(std::log10(t_pts.front().second / t_pts.back().second) >= 4);
  CHECK(fit.r_squared >= 0.999);
  const double wkb_slope = oracle::least_squares(w, S).slope;
  CHECK(std::abs(fit.rate_or_exponent / wkb_slope - 1) <= 0.10);
}

TEST_CASE("property: rms radius stable under grid refinement") {
  DoubleWellSpec s;
  s.depth_a = 1.55;
  s.depth_b = 1.5;
  const auto coarse = localize_level(solve_wells(s, build_grid(-20, 20, 801), 3), 0);
  const auto fine = localize_level(solve_wells(s, build_grid(-20, 20, 1601), 3), 0);
  CHECK(rel_diff(coarse.psi_a.rms_radius, fine.psi_a.rms_radius) <= 0.02);
}
