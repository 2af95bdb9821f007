#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rkp/core.hpp"

namespace rkp {

/// A periodic orbit of the model flow, sampled on a uniform time grid over
/// one Hamiltonian period (last sample = first).
struct OrbitRecord {
  std::string name;  // P0, P2, P3, P3p, Q1, Q2, torus:<p>/<q>, ...
  std::vector<Vec4> samples;
  double period_H = 0;
  double period_Reeb = 0;
  std::optional<int> cz;
  bool degenerate = false;
  bool symmetric = false;
  double radius = 0;  // (x1,y1)-circle radius where applicable
};

}  // namespace rkp
