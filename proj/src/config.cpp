#include "dwx/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "dwx/error.hpp"

namespace dwx {

const char* value_type_name(ValueType t) {
  switch (t) {
    case ValueType::boolean: return "boolean";
    case ValueType::integer: return "integer";
    case ValueType::real: return "real";
    case ValueType::text: return "string";
    case ValueType::real_list: return "comma-separated real list";
  }
  return "?";
}

const std::vector<KeyInfo>& known_keys() {
  static const std::vector<KeyInfo> keys = {
      {"scenario", ValueType::text, "", "required; one of the scenario names"},
      {"seed", ValueType::integer, "12345", "seed for random Lanczos start vectors"},
      {"grid.x_min", ValueType::real, "-30", "left box wall"},
      {"grid.x_max", ValueType::real, "30", "right box wall"},
      {"grid.n", ValueType::integer, "2001", "grid points, endpoints included"},
      {"well.shape", ValueType::text, "square", "square or gaussian"},
      {"well.center_a", ValueType::real, "-5", "center of well a"},
      {"well.center_b", ValueType::real, "5", "center of well b"},
      {"well.depth_a", ValueType::real, "1", "depth of well a (>= 0)"},
      {"well.depth_b", ValueType::real, "1", "depth of well b (>= 0)"},
      {"well.width_a", ValueType::real, "2", "width of well a (gaussian: 2 sigma)"},
      {"well.width_b", ValueType::real, "2", "width of well b"},
      {"kernel.lambda", ValueType::real, "1", "interaction strength, negative for attraction"},
      {"kernel.softening", ValueType::real, "1", "softening length s in lambda / sqrt(r^2 + s^2)"},
      {"scan.param", ValueType::text, "",
       "well.barrier, well.separation, kernel.lambda, kernel.softening or coherence.n; default per scenario"},
      {"scan.values", ValueType::real_list, "", "scan values, strictly monotone; required except for spectrum "
                                                "and coherence (default 1,2,4,8)"},
      {"solver.tol", ValueType::real, "1e-10", "eigen and linear solver tolerance"},
      {"solver.krylov_dim", ValueType::integer, "0", "Lanczos subspace size, 0 = automatic"},
      {"spectrum.potential", ValueType::text, "double-well", "double-well, box or harmonic"},
      {"spectrum.levels", ValueType::integer, "5", "number of levels"},
      {"spectrum.omega", ValueType::real, "1", "harmonic frequency, centred on the box middle"},
      {"tunneling.level", ValueType::integer, "0", "index of the lower member of the doublet"},
      {"exchange.pair_level", ValueType::integer, "0", "doublet giving psi1a, psi1b"},
      {"exchange.spectator_level", ValueType::integer, "2", "doublet giving the spectator psi2"},
      {"hf.spectator_state", ValueType::integer, "2", "eigenstate index used as psi2"},
      {"hf.check_regime", ValueType::boolean, "true", "reject |G| > 0.1 |E1a - E1b|"},
      {"two_body.states", ValueType::integer, "4", "two-particle states to compute"},
      {"coherence.cells", ValueType::integer, "8", "translated copies of the double well"},
      {"coherence.spacing", ValueType::real, "30", "translation between cells, a multiple of the grid step"},
      {"wide.bandwidth", ValueType::real, "0.5", "well-b levels within this distance of E1a are summed"},
      {"wide.max_levels", ValueType::integer, "120", "eigenstates computed for the wide well"},
      {"output.dir", ValueType::text, ".", "output directory, overridden by --out-dir"},
      {"output.prefix", ValueType::text, "", "file name stem, default the scenario name"},
  };
  return keys;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"spectrum",        "tunneling-scan", "exchange-scan", "hf-mix",
                                                 "exact-compare",   "strong-coupling", "coherence",    "wide-b"};
  return names;
}

const std::vector<std::string>& scan_params(const std::string& scenario) {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"spectrum", {}},
      {"tunneling-scan", {"well.barrier", "well.separation"}},
      {"exchange-scan", {"well.separation"}},
      {"hf-mix", {"kernel.lambda"}},
      {"exact-compare", {"kernel.lambda", "well.barrier"}},
      {"strong-coupling", {"kernel.softening", "kernel.lambda", "well.barrier"}},
      {"coherence", {"coherence.n"}},
      {"wide-b", {"well.barrier"}},
  };
  static const std::vector<std::string> none;
  auto it = table.find(scenario);
  return it == table.end() ? none : it->second;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(const std::string& key, int line) {
  std::ostringstream os;
  os << "'" << key << "'";
  if (line > 0) os << " (line " << line << ")";
  return os.str();
}

const KeyInfo* find_key(const std::string& key) {
  for (const auto& k : known_keys())
    if (k.key == key) return &k;
  return nullptr;
}

bool parse_real(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e && std::isfinite(out);
}

bool parse_value(const std::string& raw, ValueType type, ConfigValue& out) {
  switch (type) {
    case ValueType::boolean:
      if (raw == "true") out = true;
      else if (raw == "false") out = false;
      else return false;
      return true;
    case ValueType::integer: {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
      if (ec != std::errc() || p != raw.data() + raw.size()) return false;
      out = v;
      return true;
    }
    case ValueType::real: {
      double v = 0.0;
      if (!parse_real(raw, v)) return false;
      out = v;
      return true;
    }
    case ValueType::text:
      if (raw.empty()) return false;
      out = raw;
      return true;
    case ValueType::real_list: {
      std::vector<double> v;
      std::stringstream ss(raw);
      std::string item;
      while (std::getline(ss, item, ',')) {
        double x = 0.0;
        if (!parse_real(trim(item), x)) return false;
        v.push_back(x);
      }
      if (v.empty() || raw.back() == ',') return false;
      out = std::move(v);
      return true;
    }
  }
  return false;
}

[[noreturn]] void fail(const ScenarioConfig& cfg, const std::string& key, const std::string& msg,
                       Errc code = Errc::invalid_value) {
  auto it = cfg.lines.find(key);
  throw Error(code, "key " + where(key, it == cfg.lines.end() ? 0 : it->second) + ": " + msg);
}

void require_positive(const ScenarioConfig& cfg, const std::string& key) {
  const double v = find_key(key)->type == ValueType::integer ? static_cast<double>(cfg.integer(key)) : cfg.real(key);
  if (!(v > 0.0)) fail(cfg, key, "must be > 0");
}

void require_nonnegative_int(const ScenarioConfig& cfg, const std::string& key) {
  if (cfg.integer(key) < 0) fail(cfg, key, "must be >= 0");
}

}  // namespace

bool ScenarioConfig::flag(const std::string& key) const { return std::get<bool>(values.at(key)); }
std::int64_t ScenarioConfig::integer(const std::string& key) const { return std::get<std::int64_t>(values.at(key)); }
double ScenarioConfig::real(const std::string& key) const { return std::get<double>(values.at(key)); }
const std::string& ScenarioConfig::text(const std::string& key) const { return std::get<std::string>(values.at(key)); }
const std::vector<double>& ScenarioConfig::list(const std::string& key) const {
  return std::get<std::vector<double>>(values.at(key));
}
bool ScenarioConfig::has_scan() const { return !scan_params(scenario()).empty(); }

Grid ScenarioConfig::grid() const { return build_grid(real("grid.x_min"), real("grid.x_max"), integer("grid.n")); }

DoubleWellSpec ScenarioConfig::wells() const {
  DoubleWellSpec s;
  s.shape = text("well.shape") == "gaussian" ? WellShape::gaussian : WellShape::square;
  s.center_a = real("well.center_a");
  s.center_b = real("well.center_b");
  s.depth_a = real("well.depth_a");
  s.depth_b = real("well.depth_b");
  s.width_a = real("well.width_a");
  s.width_b = real("well.width_b");
  return s;
}

InteractionKernel ScenarioConfig::kernel() const { return {real("kernel.lambda"), real("kernel.softening")}; }

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::stringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "line " << no << ": expected 'key = value', got '" << line << "'";
      throw Error(Errc::invalid_value, os.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    const KeyInfo* info = find_key(key);
    if (!info) throw Error(Errc::unknown_key, "key " + where(key, no) + " is not recognised");
    if (cfg.lines.count(key)) {
      std::ostringstream os;
      os << "key " << where(key, no) << " repeats line " << cfg.lines[key];
      throw Error(Errc::invalid_value, os.str());
    }
    ConfigValue v;
    if (!parse_value(raw, info->type, v))
      throw Error(Errc::type_mismatch,
                  "key " + where(key, no) + ": '" + raw + "' is not a " + value_type_name(info->type));
    cfg.values[key] = std::move(v);
    cfg.lines[key] = no;
  }

  if (!cfg.values.count("scenario"))
    throw Error(Errc::missing_required, "key " + where("scenario", no + 1) + " is required but missing at end of input");
  const std::string scen = cfg.text("scenario");
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), scen) == names.end())
    fail(cfg, "scenario", "unknown scenario '" + scen + "'");

  for (const auto& k : known_keys()) {
    if (cfg.values.count(k.key) || k.default_text.empty()) continue;
    ConfigValue v;
    parse_value(k.default_text, k.type, v);
    cfg.values[k.key] = std::move(v);
  }
  const auto& params = scan_params(scen);
  if (!cfg.values.count("scan.param")) cfg.values["scan.param"] = params.empty() ? std::string("none") : params.front();
  if (!cfg.values.count("scan.values")) {
    if (scen == "coherence")
      cfg.values["scan.values"] = std::vector<double>{1, 2, 4, 8};
    else if (params.empty())
      cfg.values["scan.values"] = std::vector<double>{};
    else
      throw Error(Errc::missing_required, "key " + where("scan.values", no + 1) + " is required for scenario '" + scen +
                                              "' but missing at end of input");
  }
  if (!cfg.values.count("output.prefix")) cfg.values["output.prefix"] = scen;
  return cfg;
}

ScanPoint apply_scan_value(const ScenarioConfig& cfg, double value) {
  ScanPoint p{cfg.wells(), cfg.kernel()};
  const std::string& param = cfg.text("scan.param");
  if (param == "well.barrier") p.spec = with_barrier_width(p.spec, value);
  else if (param == "well.separation") p.spec = with_separation(p.spec, value);
  else if (param == "kernel.lambda") p.kernel.lambda = value;
  else if (param == "kernel.softening") p.kernel.softening = value;
  return p;
}

void validate_config(const ScenarioConfig& cfg) {
  const std::string& scen = cfg.scenario();
  Grid grid;
  try {
    grid = cfg.grid();
  } catch (const Error& e) {
    fail(cfg, e.code() == Errc::too_few_points ? "grid.n" : "grid.x_max", e.what(), e.code());
  }
  const std::string shape = cfg.text("well.shape");
  if (shape != "square" && shape != "gaussian") fail(cfg, "well.shape", "must be square or gaussian");
  for (const char* k : {"solver.tol", "spectrum.levels", "spectrum.omega", "two_body.states", "coherence.cells",
                        "coherence.spacing", "wide.bandwidth", "wide.max_levels"})
    require_positive(cfg, k);
  for (const char* k : {"solver.krylov_dim", "tunneling.level", "exchange.pair_level", "exchange.spectator_level",
                        "hf.spectator_state"})
    require_nonnegative_int(cfg, k);
  const std::string pot = cfg.text("spectrum.potential");
  if (pot != "double-well" && pot != "box" && pot != "harmonic")
    fail(cfg, "spectrum.potential", "must be double-well, box or harmonic");

  const auto& params = scan_params(scen);
  const std::string& param = cfg.text("scan.param");
  if (params.empty()) {
    if (cfg.lines.count("scan.param") || cfg.lines.count("scan.values"))
      fail(cfg, cfg.lines.count("scan.param") ? "scan.param" : "scan.values",
           "scenario '" + scen + "' does not scan");
  } else if (std::find(params.begin(), params.end(), param) == params.end()) {
    std::string allowed;
    for (const auto& p : params) allowed += (allowed.empty() ? "" : ", ") + p;
    fail(cfg, "scan.param", "scenario '" + scen + "' scans one of: " + allowed);
  }
  const auto& vals = cfg.list("scan.values");
  if (!params.empty()) {
    bool up = true, down = true;
    for (std::size_t i = 1; i < vals.size(); ++i) {
      up = up && vals[i] > vals[i - 1];
      down = down && vals[i] < vals[i - 1];
    }
    if (!up && !down) fail(cfg, "scan.values", "values must be strictly monotone");
  }

  try {
    validate_kernel(cfg.kernel());
  } catch (const Error& e) {
    fail(cfg, "kernel.softening", e.what(), e.code());
  }
  if ((scen == "exact-compare" || scen == "strong-coupling") && grid.n > 512)
    fail(cfg, "grid.n", "two-particle scenarios need grid.n <= 512", Errc::too_large);

  if (scen == "spectrum" && pot != "double-well") return;
  const std::string geo_key = param.rfind("well.", 0) == 0 ? param : "well.center_a";
  auto check = [&](const DoubleWellSpec& s, const std::string& key) {
    try {
      validate_spec(s);
      check_margin(s, grid);
    } catch (const Error& e) {
      fail(cfg, key, e.what(), e.code());
    }
  };
  check(cfg.wells(), "well.center_a");
  if (!params.empty() && param != "coherence.n")
    for (double v : vals) {
      const ScanPoint p = apply_scan_value(cfg, v);
      try {
        validate_kernel(p.kernel);
      } catch (const Error& e) {
        fail(cfg, "scan.values", e.what(), e.code());
      }
      check(p.spec, geo_key == "well.center_a" ? "scan.values" : geo_key);
    }

  if (scen == "coherence") {
    const auto cells = cfg.integer("coherence.cells");
    for (double v : vals)
      if (v < 1 || v > static_cast<double>(cells) || v != std::floor(v))
        fail(cfg, "scan.values", "coherence.n values must be integers in [1, coherence.cells]");
    const double steps = cfg.real("coherence.spacing") / grid.h;
    if (std::abs(steps - std::round(steps)) > 1e-6)
      fail(cfg, "coherence.spacing", "must be a whole number of grid steps (h = " + std::to_string(grid.h) + ")");
    DoubleWellSpec last = cfg.wells();
    const double shift = static_cast<double>(cells - 1) * std::round(steps) * grid.h;
    last.center_a += shift;
    last.center_b += shift;
    check(last, "coherence.spacing");
  }
}

}  // namespace dwx
