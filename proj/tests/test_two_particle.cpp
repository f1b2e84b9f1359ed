#include <doctest.h>

#include <cmath>

#include "dwx/hartree_fock.hpp"
#include "dwx/two_particle.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace dwx;

namespace {

DoubleWellSpec small_wells() {
  DoubleWellSpec s;
  s.center_a = -2;
  s.center_b = 2;
  s.width_a = 1;
  s.width_b = 1;
  s.depth_a = 1.3;
  s.depth_b = 1.0;
  return s;
}

DoubleWellSpec medium_wells() {
  DoubleWellSpec s;
  s.center_a = -3;
  s.center_b = 3;
  s.depth_a = 1.2;
  s.depth_b = 1.0;
  return s;
}

struct Exact {
  double occupation = 0.0;
  double B_t1 = 0.0;
  double B_G1 = 0.0;
};

// Ground configuration det(psi0, psi2) followed through the interacting
// spectrum, compared with the perturbative admixture of psi1b.
Exact exact_vs_hf(const DoubleWellSpec& spec, const Grid& g, double lambda) {
  const InteractionKernel k{lambda, 1.0};
  const auto sol = solve_wells(spec, g, 4);
  const auto p1 = localize_level(sol, 0);
  const auto hf = solve_hf_mixing(sol.hamiltonian, p1, sol.states[2], k);
  const Vec det = product_state(sol.states[0], sol.states[2], Sector::antisymmetric);
  TwoBodySolveOptions o;
  o.start = det;
  const auto states = two_body_lowest(spec, g, k, Sector::antisymmetric, o);
  std::size_t best = 0;
  for (std::size_t i = 1; i < states.size(); ++i)
    if (configuration_weight(states[i], {det}) > configuration_weight(states[best], {det})) best = i;
  CHECK(configuration_weight(states[best], {det}) > 0.9);
  return {well_b_occupation(states[best], p1, spec), perturbative_mixing_direct(p1), hf.B_G1_projected};
}

DoubleWellSpec weak_spec() {
  DoubleWellSpec s;
  s.center_a = -4;
  s.center_b = 4;
  s.depth_a = 1.402;
  s.depth_b = 1.4;
  return s;
}

DoubleWellSpec strong_spec(double center) {
  DoubleWellSpec s;
  s.center_a = -center;
  s.center_b = center;
  s.depth_a = 2.3;
  s.depth_b = 2.3;
  return s;
}

double mat_rel(const Mat& a, const Mat& b) { return (a - b).norm() / std::max(a.norm(), b.norm()); }

}  // namespace

TEST_CASE("non-interacting sectors: E1 + E2 and 2 E1") {
  const auto s = medium_wells();
  const Grid g = build_grid(-14, 14, 100);
  const auto sol = solve_wells(s, g, 2);
  const auto anti = two_body_lowest(s, g, {0.0, 1.0}, Sector::antisymmetric);
  const auto sym = two_body_lowest(s, g, {0.0, 1.0}, Sector::symmetric);
  CHECK(std::abs(anti[0].energy - (sol.states[0].energy + sol.states[1].energy)) <= 1e-6);
  CHECK(std::abs(sym[0].energy - 2 * sol.states[0].energy) <= 1e-6);
}

TEST_CASE("sector spaces and size limit") {
  TwoBodySpace a{5, Sector::antisymmetric}, b{5, Sector::symmetric};
  CHECK(a.dim() == 10);
  CHECK(b.dim() == 15);
  CHECK(a.index(0, 1) == 0);
  CHECK(a.index(3, 4) == 9);
  CHECK(b.index(4, 4) == 14);
  DoubleWellSpec s;
  CHECK(error_of([&] { build_two_body(s, build_grid(-60, 60, 513), {1, 1}, Sector::antisymmetric); }) ==
        Errc::too_large);
}

TEST_CASE("property: sector spectra equal the full-product spectrum at n = 24") {
  const auto s = small_wells();
  const Grid g = build_grid(-8, 8, 24);
  for (const double lambda : {0.0, 0.7, -0.4}) {
    const InteractionKernel k{lambda, 1.0};
    const auto fp = oracle::full_product(s, g, k);
    const Vec full = oracle::eigenvalues(fp.H);
    Vec both(full.size());
    Eigen::Index at = 0;
    for (const Sector sec : {Sector::antisymmetric, Sector::symmetric}) {
      const Vec mine = oracle::eigenvalues(build_two_body(s, g, k, sec).to_dense());
      const Vec ref = oracle::sector_spectrum(fp, sec == Sector::symmetric);
      REQUIRE(mine.size() == ref.size());
      CHECK((mine - ref).cwiseAbs().maxCoeff() <= 1e-8);
      both.segment(at, mine.size()) = mine;
      at += mine.size();
    }
    std::sort(both.data(), both.data() + both.size());
    CHECK((both - full).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("reduced density of non-interacting ground states") {
  const auto s = medium_wells();
  const Grid g = build_grid(-14, 14, 48);
  const auto anti = two_body_lowest(s, g, {0.0, 1.0}, Sector::antisymmetric);
  const auto ra = one_body_rdm(anti[0]);
  CHECK(std::abs(ra.occupations(0) - 1) <= 1e-6);
  CHECK(std::abs(ra.occupations(1) - 1) <= 1e-6);
  CHECK(std::abs(ra.occupations(2)) <= 1e-6);
  const auto sym = two_body_lowest(s, g, {0.0, 1.0}, Sector::symmetric);
  const auto rs = one_body_rdm(sym[0]);
  CHECK(std::abs(rs.occupations(0) - 2) <= 1e-6);
  CHECK(std::abs(rs.occupations(1)) <= 1e-6);
}

TEST_CASE("property: state and density invariants with interaction") {
  const auto s = medium_wells();
  const Grid g = build_grid(-14, 14, 48);
  for (const double lambda : {0.3, 1.5}) {
    for (const Sector sec : {Sector::antisymmetric, Sector::symmetric}) {
      TwoBodySolveOptions o;
      o.k = 3;
      const auto states = two_body_lowest(s, g, {lambda, 1.0}, sec, o);
      for (const auto& st : states) {
        CHECK(std::abs(st.coefficients.norm() - 1) <= 1e-10);
        const Mat psi = expand(st);
        CHECK(std::abs(g.h * g.h * psi.squaredNorm() - 1) <= 1e-10);
        const double sign = sec == Sector::antisymmetric ? -1.0 : 1.0;
        CHECK(mat_rel(psi, sign * psi.transpose()) <= 1e-8);
        const auto rdm = one_body_rdm(st);
        CHECK(std::abs(rdm.rho.trace() * g.h - 2) <= 1e-8);
        CHECK(mat_rel(rdm.rho, rdm.rho.transpose()) <= 1e-10);
        if (sec == Sector::antisymmetric) {
          CHECK(rdm.occupations(0) <= 1 + 1e-8);
          CHECK(rdm.occupations.minCoeff() >= -1e-8);
        }
        for (Eigen::Index i = 1; i < rdm.occupations.size(); ++i)
          CHECK(rdm.occupations(i - 1) >= rdm.occupations(i));
      }
    }
  }
}

TEST_CASE("property: sectors are mutually orthogonal") {
  const auto s = medium_wells();
  const Grid g = build_grid(-14, 14, 60);
  TwoBodySolveOptions o;
  o.k = 3;
  const auto anti = two_body_lowest(s, g, {0.8, 1.0}, Sector::antisymmetric, o);
  const auto sym = two_body_lowest(s, g, {0.8, 1.0}, Sector::symmetric, o);
  for (const auto& a : anti)
    for (const auto& b : sym) CHECK(std::abs(g.h * g.h * expand(a).cwiseProduct(expand(b)).sum()) <= 1e-12);
}

TEST_CASE("property: ground energy does not decrease with repulsion") {
  const auto s = medium_wells();
  const Grid g = build_grid(-14, 14, 40);
  for (const Sector sec : {Sector::antisymmetric, Sector::symmetric}) {
    double prev = -INFINITY;
    for (const double lambda : {0.0, 0.1, 0.3, 0.6, 1.0, 2.0}) {
      const double e = two_body_lowest(s, g, {lambda, 1.0}, sec)[0].energy;
      CHECK(e >= prev - 1e-10);
      prev = e;
    }
  }
}

TEST_CASE("configuration weight and product states") {
  const auto s = medium_wells();
  const Grid g = build_grid(-14, 14, 60);
  const auto sol = solve_wells(s, g, 3);
  const Vec det = product_state(sol.states[0], sol.states[1], Sector::antisymmetric);
  CHECK(std::abs(det.norm() - 1) <= 1e-12);
  const auto anti = two_body_lowest(s, g, {0.0, 1.0}, Sector::antisymmetric);
  CHECK(configuration_weight(anti[0], {det}) >= 1 - 1e-8);
  CHECK(error_of([&] { product_state(sol.states[0], sol.states[0], Sector::antisymmetric); }) ==
        Errc::invalid_argument);
}

TEST_CASE("well-b occupation follows the perturbative admixture") {
  const Grid g = build_grid(-15, 15, 256);
  // psi1a picks up -B_t1 psi1b from tunneling and B_G1 psi1b from exchange
  std::vector<double> mismatch;
  for (const double lambda : {0.0, 0.003, 0.01}) {
    const auto e = exact_vs_hf(weak_spec(), g, lambda);
    const double predicted = std::pow(e.B_G1 - e.B_t1, 2);
    if (lambda == 0.0) CHECK(std::abs(e.occupation / (e.B_t1 * e.B_t1) - 1) <= 0.15);
    CHECK(std::abs(e.occupation / predicted - 1) <= 0.15);
    mismatch.push_back(std::abs(e.occupation / predicted - 1));
  }
  // the discrepancy grows smoothly as lambda leaves the weak window
  CHECK(mismatch[0] <= mismatch[1]);
  CHECK(mismatch[1] <= mismatch[2]);
  CHECK(mismatch[2] - mismatch[1] <= 4 * (mismatch[1] - mismatch[0]) + 0.05);
}

TEST_CASE("G-dominated regime: occupation set by B_G1, not t1") {
  DoubleWellSpec s;
  s.center_a = -8;
  s.center_b = 8;
  s.depth_a = 1.3002;
  s.depth_b = 1.3;
  const auto e = exact_vs_hf(s, build_grid(-19, 19, 256), 0.001);
  REQUIRE(std::abs(e.B_G1) >= 10 * std::abs(e.B_t1));
  CHECK(std::abs(e.occupation / (e.B_G1 * e.B_G1) - 1) <= 0.30);
  CHECK(e.occupation >= 100 * e.B_t1 * e.B_t1);
}

TEST_CASE("well_b_occupation needs an orbital near the 1-doublet") {
  DoubleWellSpec s = medium_wells();
  s.depth_a = s.depth_b;
  const Grid g = build_grid(-14, 14, 60);
  const auto sol = solve_wells(s, g, 4);
  const auto p1 = localize_level(sol, 0);
  // both particles pushed into level 2: nothing lives near span(psi1a, psi1b)
  const auto p2 = localize_level(sol, 2, "2");
  TwoBodyState st;
  st.grid = g;
  st.sector = Sector::antisymmetric;
  st.coefficients = product_state(p2.psi_a, p2.psi_b, Sector::antisymmetric);
  CHECK(error_of([&] { well_b_occupation(st, p1, s); }) == Errc::no_identifiable_orbital);
}

TEST_CASE("strong coupling: wider level-2 barrier shuts the channel") {
  const InteractionKernel k{0.001, 1.0};
  const auto narrow = strong_coupling_amplitude(strong_spec(7), build_grid(-18, 18, 160), k);
  const auto wide = strong_coupling_amplitude(strong_spec(9), build_grid(-20, 20, 178), k);
  CHECK(narrow.Q > 0);
  CHECK(narrow.t_eff >= 0);
  CHECK(narrow.weight_low >= 0.8);
  CHECK(narrow.weight_high >= 0.8);
  CHECK(wide.t2 < 0.1 * narrow.t2);
  CHECK(wide.t_eff < 0.01 * narrow.t_eff);
  CHECK(narrow.t_eff / narrow.predicted > 1.0 / 3);
  CHECK(narrow.t_eff / narrow.predicted < 3);
}

TEST_CASE("strong coupling errors") {
  DoubleWellSpec asym = strong_spec(7);
  asym.depth_a = 2.4;
  CHECK(error_of([&] { strong_coupling_amplitude(asym, build_grid(-18, 18, 160), {0.001, 1.0}); }) ==
        Errc::invalid_argument);
  // a weak kernel leaves Q below t2
  CHECK(error_of([&] { strong_coupling_amplitude(strong_spec(7), build_grid(-18, 18, 120), {1e-6, 1.0}); }) ==
        Errc::regime_violation);
}
