#pragma once

// Flat-JSON scenario configuration for the CLI and the verification suite.

#include <string>

#include "rkp/model_ham.hpp"

namespace rkp {

struct ScenarioConfig {
  std::string regime = "lower";  // lower | upper | appendix
  double c = -2;
  double E0 = -0.1;
  double lam3 = 3;     // nu3 for the upper stack
  double eps0 = 0.3;
  double eps1 = 0.2;
  double eps2 = 0.2;
  double B = -4;       // D for the upper stack
  double rtol = 1e-10;
  double atol = 1e-12;
  unsigned seed = 0;
  std::string out = ".";

  StackParams params() const;
};

/// The reference scenario (c = -2, E0 = -0.1, Lambda3 = 3, B = -4) in the
/// requested regime.
ScenarioConfig scenario_r(const std::string& regime = "lower");

ScenarioConfig load_scenario(const std::string& path);
std::string scenario_json(const ScenarioConfig& cfg);

}  // namespace rkp
