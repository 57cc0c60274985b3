#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "ptdyn/cli.hpp"

namespace ptdyn::cli {

int cli_main(int argc, char** argv) {
  CLI::App app{"Nonautonomous pseudo-Hermitian dynamics: spectra, sweeps, trajectories, invariant checks"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "flat key=value file; flags override it");

  // flag name -> config key
  const std::vector<std::pair<std::string, std::string>> valued = {
      {"--omega0", "omega0"},   {"--kappa", "kappa"},           {"--epsilon", "epsilon"},
      {"--alpha", "alpha"},     {"--beta", "beta"},             {"--dim", "dim"},
      {"--tmax", "tmax"},       {"--dt", "dt"},                 {"--out", "out"},
      {"--format", "format"},   {"--threads", "threads"},       {"--sweep-param", "sweep_param"},
      {"--sweep-min", "sweep_min"}, {"--sweep-max", "sweep_max"}, {"--sweep-steps", "sweep_steps"},
      {"--mu-sign", "mu_sign"}};
  std::map<std::string, std::string> given;
  std::vector<CLI::Option*> opts;
  for (const auto& [flag, key] : valued) opts.push_back(app.add_option(flag, given[key]));
  bool allow_ep = false, corrupt = false;
  auto* ep_flag = app.add_flag("--allow-ep", allow_ep, "evaluate at the exceptional point");
  auto* corrupt_flag = app.add_flag("--corrupt-metric", corrupt, "verify with rho = identity (negative control)");

  std::string command;
  for (const char* name : {"spectrum", "sweep", "evolve", "verify"})
    app.add_subcommand(name)->callback([&command, name] { command = name; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot read config file '" + config_path + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = parse_config(ss.str(), cfg);
    }
    for (std::size_t i = 0; i < valued.size(); ++i)
      if (opts[i]->count() > 0) set_key(cfg, valued[i].second, given[valued[i].second]);
    if (ep_flag->count() > 0) cfg.allow_ep = allow_ep;
    if (corrupt_flag->count() > 0) cfg.corrupt_metric = corrupt;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  const CommandResult r = run_command(command, cfg);
  if (!r.message.empty()) std::cerr << r.message << "\n";
  if (r.exit_code == kConfigError || r.exit_code == kSingular) return r.exit_code;
  if (cfg.out.empty()) {
    std::cout << r.output;
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    out << r.output;
    if (!out) {
      std::cerr << "cannot write '" << cfg.out << "'\n";
      return kConfigError;
    }
  }
  return r.exit_code;
}

}  // namespace ptdyn::cli
