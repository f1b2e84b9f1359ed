#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dwx/config.hpp"
#include "dwx/error.hpp"
#include "dwx/scenarios.hpp"

namespace {

// Exit 2 on any config problem, including an unreadable file.
bool load(const std::string& path, dwx::ScenarioConfig& cfg) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "config error: cannot read " << path << "\n";
    return false;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    cfg = dwx::parse_config(ss.str());
    dwx::validate_config(cfg);
  } catch (const dwx::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double-well exchange vs tunneling simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* run = app.add_subcommand("run", "run the scenario described by a config file");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out-dir", out_dir, "output directory (overrides output.dir)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "parse and check a config file");
  validate->add_option("--config", validate_path, "config file")->required();

  auto* list = app.add_subcommand("list-scenarios", "print the scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    for (const auto& n : dwx::scenario_names()) std::cout << n << "\n";
    return 0;
  }

  dwx::ScenarioConfig cfg;
  if (validate->parsed()) {
    if (!load(validate_path, cfg)) return 2;
    std::cout << "ok: " << cfg.scenario() << "\n";
    return 0;
  }

  if (!load(config_path, cfg)) return 2;
  const dwx::ScenarioReport rep = dwx::run_scenario(cfg);
  try {
    for (const auto& p : dwx::write_report(rep, out_dir.empty() ? cfg.text("output.dir") : out_dir))
      std::cout << p << "\n";
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return 1;
  }
  if (rep.exit_code != 0) std::cerr << "numerical failure: " << rep.summary["error"]["message"].get<std::string>() << "\n";
  return rep.exit_code;
}
