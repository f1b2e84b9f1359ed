#include "dwx/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>

#include "dwx/analysis.hpp"
#include "dwx/error.hpp"
#include "dwx/hartree_fock.hpp"
#include "dwx/two_particle.hpp"

namespace dwx {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string strip_code(const std::string& what, const std::string& code) {
  const std::string prefix = code + ": ";
  return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

Json error_json(const std::string& code, const std::string& message) {
  Json j;
  j["code"] = code;
  j["message"] = message;
  return j;
}

Json error_json(const Error& e) {
  const std::string code = errc_name(e.code());
  return error_json(code, strip_code(e.what(), code));
}

Json fit_json(const std::string& name, const FitResult& f) {
  Json j;
  j["name"] = name;
  j["model"] = model_name(f.model);
  j[f.model == FitModel::exponential ? "rate" : "exponent"] = json_number(f.rate_or_exponent);
  j["intercept"] = json_number(f.intercept);
  j["r_squared"] = json_number(f.r_squared);
  j["window_min"] = json_number(f.window_min);
  j["window_max"] = json_number(f.window_max);
  j["points"] = f.points;
  return j;
}

// Runs a fit; a fit that cannot be made is reported, not fatal.
std::optional<FitResult> try_fit(Json& fits, const std::string& name, const std::function<FitResult()>& f) {
  try {
    FitResult r = f();
    fits.push_back(fit_json(name, r));
    return r;
  } catch (const Error& e) {
    Json j;
    j["name"] = name;
    j["error"] = error_json(e);
    fits.push_back(j);
    return std::nullopt;
  }
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit line_fit(const Points& pts) {
  Mat A(static_cast<Eigen::Index>(pts.size()), 2);
  Vec y(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    A(static_cast<Eigen::Index>(i), 0) = pts[i].first;
    A(static_cast<Eigen::Index>(i), 1) = 1.0;
    y[static_cast<Eigen::Index>(i)] = pts[i].second;
  }
  const Vec c = A.colPivHouseholderQr().solve(y);
  const double ss_res = (A * c - y).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
  return {c[0], c[1], ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0};
}

double observable(const ScanRow& r, const std::string& name) {
  for (const auto& [k, v] : r.observables)
    if (k == name) return v;
  return std::nan("");
}

Points column(const ScanTable& t, const std::string& x, const std::string& y,
              const std::function<bool(const ScanRow&)>& keep = nullptr) {
  Points p;
  for (const auto& r : t.rows)
    if (!r.error && (!keep || keep(r))) p.emplace_back(x.empty() ? r.value : observable(r, x), observable(r, y));
  return p;
}

Points abs_y(Points p) {
  for (auto& q : p) q.second = std::abs(q.second);
  return p;
}

Table to_table(const std::string& name, const ScanTable& t) {
  Table out;
  out.name = name;
  out.columns.push_back(t.parameter);
  const ScanRow* first_ok = nullptr;
  for (const auto& r : t.rows)
    if (!r.error) {
      first_ok = &r;
      break;
    }
  if (first_ok)
    for (const auto& [k, v] : first_ok->observables) out.columns.push_back(k);
  out.columns.push_back("error");
  for (const auto& r : t.rows) {
    std::vector<Cell> row{r.value};
    for (std::size_t i = 1; i + 1 < out.columns.size(); ++i)
      row.emplace_back(r.error ? std::nan("") : r.observables[i - 1].second);
    row.emplace_back(r.error ? *r.error : std::string());
    out.rows.push_back(std::move(row));
  }
  return out;
}

struct Context {
  explicit Context(const ScenarioConfig& c) : cfg(c) {}

  const ScenarioConfig& cfg;
  Json results = Json::object();
  Json fits = Json::array();
  std::vector<Table> tables;
  std::deque<ScanTable> scans;  // stable references

  ScanTable& run_scan(const std::string& name, const std::function<Observables(double)>& fn) {
    scans.push_back(scan(cfg.text("scan.param"), cfg.list("scan.values"), fn));
    tables.push_back(to_table(name, scans.back()));
    return scans.back();
  }
};

SolverOptions solver_options(const ScenarioConfig& cfg) {
  SolverOptions so;
  so.tol = cfg.real("solver.tol");
  so.krylov_dim = static_cast<std::size_t>(cfg.integer("solver.krylov_dim"));
  so.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
  return so;
}

HFOptions hf_options(const ScenarioConfig& cfg) {
  HFOptions o;
  o.check_regime = cfg.flag("hf.check_regime");
  o.tol = cfg.real("solver.tol");
  return o;
}

std::size_t as_size(std::int64_t v) { return static_cast<std::size_t>(v); }

void run_spectrum(Context& c) {
  const ScenarioConfig& cfg = c.cfg;
  const Grid g = cfg.grid();
  const std::string pot = cfg.text("spectrum.potential");
  const std::size_t levels = as_size(cfg.integer("spectrum.levels"));
  const double omega = cfg.real("spectrum.omega");
  const double center = 0.5 * (g.x_min + g.x_max);
  Vec U = Vec::Zero(static_cast<Eigen::Index>(g.n));
  if (pot == "double-well") U = sample_potential(cfg.wells(), g);
  if (pot == "harmonic")
    for (std::size_t i = 0; i < g.n; ++i) {
      const double dx = g.x(i) - center;
      U[static_cast<Eigen::Index>(i)] = 0.5 * omega * omega * dx * dx;
    }
  const Hamiltonian1D H(g, U);
  const auto pairs = lowest_eigenpairs(H.op(), levels, solver_options(cfg));

  Table t;
  t.name = "levels";
  t.columns = {"level", "energy"};
  const bool ref = pot != "double-well";
  if (ref) t.columns.insert(t.columns.end(), {"reference", "deviation"});
  const double L = g.x_max - g.x_min;
  double worst = 0.0;
  Json energies = Json::array();
  Json unbound = Json::array();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double E = pairs[k].energy;
    energies.push_back(json_number(E));
    std::vector<Cell> row{static_cast<double>(k), E};
    if (ref) {
      const double kk = static_cast<double>(k + 1);
      const double e0 = pot == "box" ? kk * kk * kPi * kPi / (2.0 * L * L) : omega * (static_cast<double>(k) + 0.5);
      // relative for the box, absolute for the oscillator
      const double dev = pot == "box" ? (E - e0) / e0 : E - e0;
      worst = std::max(worst, std::abs(dev));
      row.insert(row.end(), {e0, dev});
    }
    if (pot == "double-well" && E >= 0.0) unbound.push_back(k);
    t.rows.push_back(std::move(row));
  }
  c.results["energies"] = energies;
  if (pot == "box") c.results["max_relative_deviation"] = json_number(worst);
  if (pot == "harmonic") c.results["max_absolute_deviation"] = json_number(worst);
  if (pot == "double-well") c.results["unbound_levels"] = unbound;
  c.tables.push_back(std::move(t));
}

void run_tunneling(Context& c) {
  const ScenarioConfig& cfg = c.cfg;
  const Grid g = cfg.grid();
  const std::size_t level = as_size(cfg.integer("tunneling.level"));
  const ScanTable& t = c.run_scan("scan", [&](double v) -> Observables {
    const DoubleWellSpec s = apply_scan_value(cfg, v).spec;
    const WellSolution sol = solve_wells(s, g, level + 3);
    const LocalizedPair p = localize_level(sol, level);
    const double split = sol.states[level + 1].energy - sol.states[level].energy;
    return {{"barrier", inner_edge_b(s) - inner_edge_a(s)},
            {"separation", s.center_b - s.center_a},
            {"t", p.t},
            {"splitting", split},
            {"E_a", p.E_a},
            {"E_b", p.E_b},
            {"wkb_exponent", wkb_exponent(s, 0.5 * (p.E_a + p.E_b))}};
  });
  const std::string x = cfg.text("scan.param") == "well.barrier" ? "barrier" : "separation";
  const auto fit = try_fit(c.fits, "t_exponential", [&] { return fit_exponential(column(t, x, "t")); });
  const Points S = column(t, x, "wkb_exponent");
  if (S.size() >= 2) {
    const LineFit lf = line_fit(S);
    c.results["wkb_slope"] = json_number(lf.slope);
    if (fit) c.results["rate_over_wkb_slope"] = json_number(fit->rate_or_exponent / lf.slope);
  }
  const Points tt = column(t, x, "t");
  if (!tt.empty()) {
    double lo = tt.front().second, hi = lo, mis = 0.0;
    for (const auto& [a, b] : tt) {
      lo = std::min(lo, b);
      hi = std::max(hi, b);
    }
    for (const auto& r : t.rows)
      if (!r.error) mis = std::max(mis, std::abs(observable(r, "splitting") - 2.0 * observable(r, "t")) /
                                            observable(r, "splitting"));
    c.results["t_decades"] = json_number(lo > 0.0 ? std::log10(hi / lo) : std::nan(""));
    c.results["max_splitting_vs_2t_mismatch"] = json_number(mis);
  }
}

void run_exchange(Context& c) {
  const ScenarioConfig& cfg = c.cfg;
  const Grid g = cfg.grid();
  const DoubleWellSpec base = cfg.wells();
  const InteractionKernel k = cfg.kernel();
  const std::size_t pl = as_size(cfg.integer("exchange.pair_level"));
  const std::size_t sl = as_size(cfg.integer("exchange.spectator_level"));
  const ScanTable& t = c.run_scan("scan", [&](double d) -> Observables {
    const ExchangeScanRow r = exchange_distance_scan(base, g, {d}, pl, sl, k).front();
    return {{"G", r.G},       {"abs_G", std::abs(r.G)},  {"G_d2", r.G * d * d}, {"G_d3", r.G * d * d * d},
            {"G_control", r.G_control}, {"t1", r.t1}, {"E1a", r.E1a}, {"r1", r.r1}};
  });

  double r1 = 0.0, dmax = 0.0;
  for (const auto& r : t.rows)
    if (!r.error) {
      r1 = std::max(r1, observable(r, "r1"));
      dmax = std::max(dmax, r.value);
    }
  const double lo = 5.0 * r1;
  c.results["power_window_min"] = json_number(lo);
  auto in_window = [&](const ScanRow& r) { return r.value >= lo; };
  try_fit(c.fits, "G_power", [&] { return fit_power(abs_y(column(t, "", "G", in_window))); });
  try_fit(c.fits, "control_power", [&] { return fit_power(abs_y(column(t, "", "G_control", in_window))); });

  // |G| d^2 over the last half decade of the window
  double gmin = INFINITY, gmax = 0.0;
  for (const auto& r : t.rows)
    if (!r.error && r.value >= lo && r.value >= dmax / std::sqrt(10.0)) {
      const double v = std::abs(observable(r, "G_d2"));
      gmin = std::min(gmin, v);
      gmax = std::max(gmax, v);
    }
  c.results["G_d2_variation_last_half_decade"] = json_number(gmax > 0.0 ? gmax / gmin - 1.0 : std::nan(""));

  Points lt, lg;
  for (const auto& r : t.rows) {
    if (r.error) continue;
    if (observable(r, "t1") > 0.0) lt.emplace_back(r.value, std::log(observable(r, "t1")));
    if (observable(r, "abs_G") > 0.0) lg.emplace_back(r.value, std::log(observable(r, "abs_G")));
  }
  try {
    const double ds = crossover(lt, lg);
    c.results["crossover"] = json_number(ds);
    try_fit(c.fits, "t1_below_crossover", [&] {
      return fit_exponential(column(t, "", "t1", [&](const ScanRow& r) { return r.value < ds; }));
    });
    try_fit(c.fits, "G_above_crossover", [&] {
      return fit_power(abs_y(column(t, "", "G", [&](const ScanRow& r) { return r.value > ds; })));
    });
  } catch (const Error& e) {
    c.results["crossover"] = nullptr;
    c.results["crossover_error"] = error_json(e);
  }
}

void run_hf_mix(Context& c) {
  const ScenarioConfig& cfg = c.cfg;
  const Grid g = cfg.grid();
  const DoubleWellSpec spec = cfg.wells();
  const std::size_t sp = as_size(cfg.integer("hf.spectator_state"));
  const WellSolution sol = solve_wells(spec, g, std::max<std::size_t>(4, sp + 1));
  const LocalizedPair p1 = localize_level(sol, 0);
  const Orbital& psi2 = sol.states[sp];
  const double Bt = perturbative_mixing_direct(p1);
  const double gap_ratio = (sol.states[2].energy - sol.states[1].energy) / std::abs(p1.E_a - p1.E_b);
  c.results["E1a"] = json_number(p1.E_a);
  c.results["E1b"] = json_number(p1.E_b);
  c.results["t1"] = json_number(p1.t);
  c.results["B_t1"] = json_number(Bt);
  c.results["gap_ratio"] = json_number(gap_ratio);

  const ScanTable& t = c.run_scan("scan", [&](double lam) -> Observables {
    const InteractionKernel k = apply_scan_value(cfg, lam).kernel;
    const HFMixResult r = solve_hf_mixing(sol.hamiltonian, p1, psi2, k, hf_options(cfg));
    return {{"G", r.G},
            {"B_G1_projected", r.B_G1_projected},
            {"B_G1_perturbative", r.B_G1_perturbative},
            {"ratio", r.B_G1_perturbative != 0.0 ? r.B_G1_projected / r.B_G1_perturbative : std::nan("")},
            {"residual", r.residual},
            {"overlap_psi1a", g.inner(p1.psi_a.values, r.delta_psi)}};
  });
  double rmin = INFINITY, rmax = -INFINITY;
  for (const auto& r : t.rows)
    if (!r.error && std::isfinite(observable(r, "ratio"))) {
      rmin = std::min(rmin, observable(r, "ratio"));
      rmax = std::max(rmax, observable(r, "ratio"));
    }
  c.results["ratio_min"] = json_number(rmin);
  c.results["ratio_max"] = json_number(rmax);

  const TailComparison tc = compare_tails(spec, g, cfg.kernel());
  Table tail;
  tail.name = "tail";
  tail.columns = {"x", "bare", "exchange", "predicted"};
  Points bare;
  double worst = 0.0;
  std::size_t tracked = 0;
  for (const auto& r : tc.rows) {
    tail.rows.push_back({r.x, r.bare, r.exchange, r.predicted});
    if (r.x <= tc.midpoint) bare.emplace_back(r.x, r.bare);
    if (r.exchange >= 10.0 * r.bare && r.predicted > 0.0) {
      worst = std::max(worst, std::abs(std::log(r.exchange / r.predicted)));
      ++tracked;
    }
  }
  c.tables.push_back(std::move(tail));
  Json tj;
  tj["kernel_lambda"] = json_number(cfg.real("kernel.lambda"));
  tj["region_start"] = json_number(tc.region_start);
  tj["region_end"] = json_number(tc.region_end);
  tj["midpoint"] = json_number(tc.midpoint);
  tj["E2"] = json_number(tc.E2);
  tj["expected_bare_rate"] = json_number(std::sqrt(2.0 * std::abs(tc.E1a)));
  tj["edge_factor"] = json_number(tc.rows.back().exchange / tc.rows.back().bare);
  tj["tracked_points"] = tracked;
  tj["tracking_max_abs_log_ratio"] = json_number(tracked ? worst : std::nan(""));
  c.results["tail"] = tj;
  try_fit(c.fits, "tail_bare_exponential", [&] { return fit_exponential(bare); });
}

void run_exact(Context& c) {
  const ScenarioConfig& cfg = c.cfg;
  const Grid g = cfg.grid();
  const std::size_t sp = as_size(cfg.integer("hf.spectator_state"));
  c.run_scan("scan", [&](double v) -> Observables {
    const ScanPoint pt = apply_scan_value(cfg, v);
    const WellSolution sol = solve_wells(pt.spec, g, std::max<std::size_t>(4, sp + 1));
    const LocalizedPair p1 = localize_level(sol, 0);
    const Orbital& psi2 = sol.states[sp];
    const double Bt = perturbative_mixing_direct(p1);
    const HFMixResult hf = solve_hf_mixing(sol.hamiltonian, p1, psi2, pt.kernel, hf_options(cfg));

    const Vec det = product_state(sol.states[0], psi2, Sector::antisymmetric);
    TwoBodySolveOptions o;
    o.k = as_size(cfg.integer("two_body.states"));
    o.tol = cfg.real("solver.tol");
    o.krylov_dim = as_size(cfg.integer("solver.krylov_dim"));
    o.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
    o.start = det;
    const auto states = two_body_lowest(pt.spec, g, pt.kernel, Sector::antisymmetric, o);
    std::size_t best = 0;
    double bw = -1.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const double w = configuration_weight(states[i], {det});
      if (w > bw) {
        bw = w;
        best = i;
      }
    }
    const double occ = well_b_occupation(states[best], p1, pt.spec);
    const double amp = hf.B_G1_projected - Bt;
    const double pred = amp * amp;
    return {{"state", static_cast<double>(best)},
            {"config_weight", bw},
            {"energy", states[best].energy},
            {"occupation", occ},
            {"B_t1", Bt},
            {"B_G1", hf.B_G1_projected},
            {"predicted", pred},
            {"occupation_over_predicted", occ / pred},
            {"occupation_over_B_t1_sq", occ / (Bt * Bt)}};
  });
}

void run_strong(Context& c) {
  const ScenarioConfig& cfg = c.cfg;
  const Grid g = cfg.grid();
  const ScanTable& t = c.run_scan("scan", [&](double v) -> Observables {
    const ScanPoint pt = apply_scan_value(cfg, v);
    StrongCouplingOptions o;
    o.states = std::max<std::size_t>(8, as_size(cfg.integer("two_body.states")));
    o.tol = cfg.real("solver.tol");
    o.krylov_dim = as_size(cfg.integer("solver.krylov_dim"));
    o.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
    const StrongCouplingResult r = strong_coupling_amplitude(pt.spec, g, pt.kernel, o);
    return {{"t_eff", r.t_eff},         {"Q", r.Q},         {"Q_direct", r.Q_direct}, {"Q_aa", r.Q_aa},
            {"Q_ab", r.Q_ab},           {"K_aa", r.K_aa},   {"K_ab", r.K_ab},         {"t2", r.t2},
            {"G", r.G},                 {"G_crossed", r.G_crossed}, {"predicted", r.predicted},
            {"ratio", r.t_eff / r.predicted}, {"weight_low", r.weight_low}, {"weight_high", r.weight_high}};
  });
  try_fit(c.fits, "t_eff_vs_Q", [&] { return fit_power(column(t, "Q", "t_eff")); });
  double lo = INFINITY, hi = 0.0;
  for (const auto& r : t.rows)
    if (!r.error) {
      lo = std::min(lo, observable(r, "ratio"));
      hi = std::max(hi, observable(r, "ratio"));
    }
  c.results["ratio_spread"] = json_number(hi > 0.0 ? hi / lo : std::nan(""));
}

void run_coherence(Context& c) {
  const ScenarioConfig& cfg = c.cfg;
  const Grid g = cfg.grid();
  const InteractionKernel k = cfg.kernel();
  const WellSolution sol = solve_wells(cfg.wells(), g, 4);
  const LocalizedPair p1 = localize_level(sol, 0);
  const LocalizedPair p2 = localize_level(sol, 2, "2");
  const auto cells = cfg.integer("coherence.cells");
  const auto step = static_cast<std::int64_t>(std::llround(cfg.real("coherence.spacing") / g.h));

  Vec tv = Vec::Zero(static_cast<Eigen::Index>(g.n)), pv = tv;
  for (std::int64_t j = 0; j < cells; ++j) {
    tv += translate(p1.psi_a, j * step, "").values;
    pv += translate(p1.psi_b, j * step, "").values;
  }
  const double norm = std::sqrt(static_cast<double>(cells));
  const Orbital target = make_orbital(g, tv / norm, 0.0, "target");
  const Orbital probe = make_orbital(g, pv / norm, 0.0, "probe");
  const Orbital& ext = sol.states[2];

  const double c1 = coherence_projection({ext}, target, probe, k).total;
  c.results["c1"] = json_number(c1);
  const ScanTable& t = c.run_scan("scan", [&](double v) -> Observables {
    std::vector<Orbital> e;
    for (std::int64_t q = 0; q < static_cast<std::int64_t>(v); ++q)
      e.push_back(translate(ext, q * step, "ext" + std::to_string(q)));
    const CoherenceResult r = coherence_projection(e, target, probe, k);
    return {{"total", r.total}, {"total_over_N_c1", r.total / (v * c1)}};
  });
  const Points pts = column(t, "", "total");
  if (pts.size() >= 2) {
    const LineFit lf = line_fit(pts);
    Json j;
    j["slope"] = json_number(lf.slope);
    j["intercept"] = json_number(lf.intercept);
    j["r_squared"] = json_number(lf.r_squared);
    c.results["linear_fit"] = j;
    double dev = 0.0;
    for (const auto& r : t.rows)
      if (!r.error) dev = std::max(dev, std::abs(observable(r, "total_over_N_c1") - 1.0));
    c.results["max_linearity_deviation"] = json_number(dev);
  }

  // level-1 doublet members, 0 and 1 nodes, acting on the level-2 pair
  const CoherenceResult pair = coherence_projection({sol.states[0], sol.states[1]}, p2.psi_a, p2.psi_b, k);
  Table st;
  st.name = "sign_pair";
  st.columns = {"orbital", "nodes", "contribution", "sign_product"};
  for (std::size_t i = 0; i < 2; ++i)
    st.rows.push_back({static_cast<double>(i), static_cast<double>(pair.terms[i].nodes), pair.terms[i].contribution,
                       static_cast<double>(pair.terms[i].sign_product)});
  c.tables.push_back(std::move(st));
  c.results["sign_pair_opposite"] = pair.terms[0].contribution * pair.terms[1].contribution < 0.0;
}

void run_wide_b(Context& c) {
  const ScenarioConfig& cfg = c.cfg;
  const Grid g = cfg.grid();
  EscapeOptions o;
  o.bandwidth = cfg.real("wide.bandwidth");
  o.max_levels = as_size(cfg.integer("wide.max_levels"));
  Table lv;
  lv.name = "levels";
  lv.columns = {"barrier", "energy", "t", "G", "amp_bare", "amp_exchange"};
  const ScanTable& t = c.run_scan("scan", [&](double v) -> Observables {
    const ScanPoint pt = apply_scan_value(cfg, v);
    const EscapeResult r = wide_b_escape(pt.spec, g, pt.kernel, o);
    for (const auto& l : r.levels) lv.rows.push_back({v, l.energy, l.t, l.G, l.amp_bare, l.amp_exchange});
    return {{"P_bare", r.P_bare},
            {"P_exchange", r.P_exchange},
            {"enhancement", r.enhancement},
            {"E1a", r.E1a},
            {"spectator_energy", r.spectator_energy},
            {"spectator_weight_a", r.spectator_weight_a},
            {"bound_levels_b", static_cast<double>(r.bound_levels_b)},
            {"levels_in_band", static_cast<double>(r.levels.size())}};
  });
  c.tables.push_back(std::move(lv));
  Points e = column(t, "", "enhancement");
  std::sort(e.begin(), e.end());
  bool mono = e.size() >= 2;
  for (std::size_t i = 1; i < e.size(); ++i) mono = mono && e[i].second > e[i - 1].second;
  c.results["enhancement_monotone"] = mono;
  if (!e.empty()) c.results["enhancement_at_widest"] = json_number(e.back().second);
}

const std::map<std::string, std::function<void(Context&)>>& runners() {
  static const std::map<std::string, std::function<void(Context&)>> m = {
      {"spectrum", run_spectrum},     {"tunneling-scan", run_tunneling}, {"exchange-scan", run_exchange},
      {"hf-mix", run_hf_mix},         {"exact-compare", run_exact},      {"strong-coupling", run_strong},
      {"coherence", run_coherence},   {"wide-b", run_wide_b},
  };
  return m;
}

}  // namespace

Json resolved_params(const ScenarioConfig& cfg) {
  Json p = Json::object();
  for (const auto& k : known_keys()) {
    const ConfigValue& v = cfg.values.at(k.key);
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, double>) {
            p[k.key] = json_number(x);
          } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            Json a = Json::array();
            for (double d : x) a.push_back(json_number(d));
            p[k.key] = a;
          } else {
            p[k.key] = x;
          }
        },
        v);
  }
  return p;
}

ScenarioReport run_scenario(const ScenarioConfig& cfg) {
  ScenarioReport rep;
  rep.stem = cfg.text("output.prefix");
  Context c(cfg);
  Json error;
  try {
    runners().at(cfg.scenario())(c);
  } catch (const Error& e) {
    error = error_json(e);
  } catch (const std::exception& e) {
    error = error_json("internal", e.what());
  }
  if (error.is_null()) {
    Json rows = Json::array();
    std::size_t total = 0;
    for (const auto& s : c.scans)
      for (const auto& r : s.rows) {
        ++total;
        if (!r.error) continue;
        Json j;
        j["value"] = json_number(r.value);
        j["code"] = r.error_code;
        j["message"] = strip_code(*r.error, r.error_code);
        rows.push_back(j);
      }
    if (!rows.empty()) {
      error = error_json("scan-row-failure", std::to_string(rows.size()) + " of " + std::to_string(total) +
                                                 " scan rows failed");
      error["rows"] = rows;
    }
  }

  rep.summary["scenario"] = cfg.scenario();
  rep.summary["params"] = resolved_params(cfg);
  rep.summary["results"] = c.results;
  rep.summary["fits"] = c.fits;
  rep.summary["status"] = error.is_null() ? "ok" : "failed";
  if (!error.is_null()) rep.summary["error"] = error;
  rep.tables = std::move(c.tables);
  rep.exit_code = error.is_null() ? 0 : 3;
  return rep;
}

std::vector<std::string> write_report(const ScenarioReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> paths;
  for (const auto& t : report.tables) {
    const std::string p = (fs::path(out_dir) / (report.stem + "_" + t.name + ".csv")).string();
    write_file(p, to_csv(t));
    paths.push_back(p);
  }
  const std::string p = (fs::path(out_dir) / (report.stem + ".json")).string();
  write_file(p, to_json_text(report.summary));
  paths.push_back(p);
  return paths;
}

}  // namespace dwx
