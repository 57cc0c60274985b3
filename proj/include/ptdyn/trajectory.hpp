#pragma once

#include <string>
#include <vector>

#include "ptdyn/fock_algebra.hpp"

namespace ptdyn {

enum class IntegrationStatus { Complete, Capped, StepUnderflow };

struct Trajectory {
  std::vector<double> times;
  std::vector<FockState> states;
  std::vector<double> rho_norms;
  // phases[n][k] = alpha_n(times[k]) when tracked
  std::vector<std::vector<Complex>> phases;
  IntegrationStatus status = IntegrationStatus::Complete;
  std::string message;

  std::size_t size() const { return times.size(); }
  bool complete() const { return status == IntegrationStatus::Complete; }
};

}  // namespace ptdyn
