#pragma once

// The acceptance suite: one result per criterion, rendered deterministically.

#include <string>
#include <vector>

#include "rkp/scenario.hpp"

namespace rkp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CriterionResult> results;
  bool all_pass = false;
};

VerifyReport run_verification(const ScenarioConfig& cfg);
std::string render_report(const VerifyReport& rep);

}  // namespace rkp
