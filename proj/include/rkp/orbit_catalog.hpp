#pragma once

// Circular orbits, Hill-region radii, T_{k,l}-tori and the admissible
// (E, L) windows on each energy-level component.

#include <optional>
#include <string>
#include <vector>

#include "rkp/elements.hpp"
#include "rkp/phase.hpp"

namespace rkp {

struct CircularRoot {
  double E = 0;
  double L = 0;
  std::string label;  // retro_b, direct_b, direct_u, retro_u
};

struct CircularOrbitSet {
  double c = 0;
  std::vector<CircularRoot> roots;  // ordered by increasing E
};

struct HillRadii {
  double c = 0;
  bool connected = false;  // -3/2 < c < 0: no bounded/unbounded split
  double r_b = 0;          // < 1
  double r_u = 0;          // > 1
};

struct TorusRecord {
  int k = 0, l = 0;
  double E = 0;
  double L = 0;
  double e = 0;
  bool collision = false;
};

struct RangeWindow {
  std::string component;
  double E_lo = 0, E_hi = 0;
  double L_lo = 0, L_hi = 0;
  double E_min_seen = 0, E_max_seen = 0;
  double L_min_seen = 0, L_max_seen = 0;
  bool pass = false;
};

HillRadii hill_radii(double c);
CircularOrbitSet circular_orbits(double c);
double torus_energy(int k, int l);
std::optional<TorusRecord> torus_on_level(double c, int k, int l);
std::vector<RangeWindow> el_range_report(double c, int samples);

/// Cartesian witness of the circular orbit with radius r0 (direct or
/// retrograde), placed at angle 0.
PhaseState circular_state(double r0, bool direct);

/// Cartesian witness on the level H = c with Kepler energy E (perihelion
/// placement, L = E - c).
PhaseState level_state(double c, double E);

}  // namespace rkp
