// Acceptance gate: runs every criterion of the verification suite against
// the reference scenario and prints one pass/fail line per criterion.

#include <cstdio>
#include <iostream>

#include "rkp/verify.hpp"

int main() {
  rkp::ScenarioConfig cfg = rkp::scenario_r("lower");
  rkp::VerifyReport rep = rkp::run_verification(cfg);
  std::cout << rkp::render_report(rep);
  return rep.all_pass ? 0 : 1;
}
