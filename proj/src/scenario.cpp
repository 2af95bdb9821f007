#include "rkp/scenario.hpp"

#include <fstream>

#include <json.hpp>

namespace rkp {

StackParams ScenarioConfig::params() const {
  StackParams p;
  if (regime == "lower")
    p.regime = StackRegime::Lower;
  else if (regime == "upper")
    p.regime = StackRegime::Upper;
  else if (regime == "appendix")
    p.regime = StackRegime::Appendix;
  else
    throw DomainError("scenario: unknown regime '" + regime + "'");
  p.c = c;
  p.E0 = E0;
  p.lam3 = lam3;
  p.eps0 = eps0;
  p.eps1 = eps1;
  p.eps2 = eps2;
  p.B = B;
  return p;
}

ScenarioConfig scenario_r(const std::string& regime) {
  ScenarioConfig cfg;
  cfg.regime = regime;
  if (regime == "upper") {
    cfg.c = -1;
    cfg.E0 = -1;
    cfg.lam3 = -3;
    cfg.B = -4;
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("scenario: cannot open " + path);
  nlohmann::json j;
  in >> j;
  ScenarioConfig cfg;
  cfg.regime = j.value("regime", cfg.regime);
  cfg.c = j.value("c", cfg.c);
  cfg.E0 = j.value("E0", cfg.E0);
  cfg.lam3 = j.value("Lambda3", cfg.lam3);
  cfg.eps0 = j.value("eps0", cfg.eps0);
  cfg.eps1 = j.value("eps1", cfg.eps1);
  cfg.eps2 = j.value("eps2", cfg.eps2);
  cfg.B = j.value("B", cfg.B);
  cfg.rtol = j.value("rtol", cfg.rtol);
  cfg.atol = j.value("atol", cfg.atol);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.out = j.value("out", cfg.out);
  return cfg;
}

std::string scenario_json(const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  j["regime"] = cfg.regime;
  j["c"] = cfg.c;
  j["E0"] = cfg.E0;
  j["Lambda3"] = cfg.lam3;
  j["eps0"] = cfg.eps0;
  j["eps1"] = cfg.eps1;
  j["eps2"] = cfg.eps2;
  j["B"] = cfg.B;
  j["rtol"] = cfg.rtol;
  j["atol"] = cfg.atol;
  j["seed"] = cfg.seed;
  j["out"] = cfg.out;
  return j.dump(2) + "\n";
}

}  // namespace rkp
