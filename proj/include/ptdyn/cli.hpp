#pragma once

#include <string>
#include <vector>

#include "ptdyn/casimir_model.hpp"

namespace ptdyn::cli {

inline constexpr const char* kToolVersion = "ptdyn 1.0.0";

enum ExitCode { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kSingular = 3 };

struct RunConfig {
  double omega0 = 11.0;
  double kappa = 20.0;
  double epsilon = 0.1;
  double alpha = 1.0;
  double beta = 1.0;
  long dim = 64;
  double tmax = 10.0;
  double dt = 0.05;
  std::string sweep_param = "g";
  double sweep_min = 0.0;
  double sweep_max = 1.0;
  long sweep_steps = 100;
  std::string out;
  std::string format = "csv";
  bool allow_ep = false;
  long threads = 1;
  // negative controls for verify
  bool corrupt_metric = false;
  double mu_sign = 1.0;

  bool operator==(const RunConfig&) const = default;
};

void set_key(RunConfig& c, const std::string& key, const std::string& value);
// flat key=value lines; '#' starts a comment
RunConfig parse_config(const std::string& text, RunConfig base = {});
std::string canonical(const RunConfig& c);
void validate(const RunConfig& c);
CasimirParams params_of(const RunConfig& c);

struct CommandResult {
  int exit_code = kOk;
  std::string output;
  std::string message;
};

CommandResult cmd_spectrum(const RunConfig& c);
CommandResult cmd_sweep(const RunConfig& c);
CommandResult cmd_evolve(const RunConfig& c);
CommandResult cmd_verify(const RunConfig& c);
CommandResult run_command(const std::string& name, const RunConfig& c);

int cli_main(int argc, char** argv);

}  // namespace ptdyn::cli
