#pragma once

// Kepler, Delaunay and Poincare element maps with the circular-orbit
// extension, the retrograde conjugation and symplecticity verification.

#include "rkp/phase.hpp"

namespace rkp {

struct KeplerElements {
  double alpha = 0;  // argument of present position, mod 2pi
  double beta = 0;   // argument of perihelion, mod 2pi (= alpha when e = 0)
  double a = 0;      // semi-major axis
  double e = 0;      // eccentricity in [0,1)
};

struct DelaunayState {
  double l = 0;  // argument of perihelion
  double k = 0;  // mean anomaly
  double L = 0;  // sqrt(a(1-e^2))
  double K = 0;  // sqrt(a)
  bool circular = false;
};

enum class PoincareRegime { Direct, Retrograde, Modified4Pi };

struct PoincareState {
  double x1 = 0;  // eta
  double x2 = 0;  // lambda (angle)
  double y1 = 0;  // xi
  double y2 = 0;  // Lambda
  PoincareRegime regime = PoincareRegime::Direct;

  Vec4 vec() const { return {x1, x2, y1, y2}; }
};

inline constexpr double kCircularTol = 1e-13;

KeplerElements kepler_map(const PhaseState& s);
DelaunayState delaunay_map(const KeplerElements& el, bool circular_ok = false);
PoincareState poincare_map(const PhaseState& s);
PhaseState poincare_inverse(const PoincareState& ps);
PoincareState retrograde_poincare(const PhaseState& s);
PhaseState retrograde_poincare_inverse(const PoincareState& ps);

/// Solves M = Ea - e sin(Ea) for the eccentric anomaly.
double solve_kepler_equation(double M, double e);

enum class MapVariant {
  Identity,
  Delaunay,           // (q,p) -> (l, k=mean anomaly, L, K)
  DelaunayTrueAnomaly,  // negative control: k = true anomaly
  Poincare,
  RetrogradePoincare,
};

/// Max-norm of J^T Omega J - Omega for the central finite-difference
/// Jacobian of the selected map at the given state.
double symplecticity_defect(MapVariant map, const PhaseState& s, double h = 1e-6,
                            double boundary_margin = 1e-3);

}  // namespace rkp
