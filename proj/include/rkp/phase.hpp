#pragma once

// Rotating-frame Cartesian dynamics: Hamiltonian, integrals, vector field,
// trajectory integration and the inertial-frame factorization.

#include <vector>

#include "rkp/core.hpp"

namespace rkp {

inline constexpr double kCollisionFloor = 1e-6;

struct PhaseState {
  double q1 = 0, q2 = 0, p1 = 0, p2 = 0;

  double r() const { return std::sqrt(q1 * q1 + q2 * q2); }
  Vec4 vec() const { return {q1, q2, p1, p2}; }
  static PhaseState from_vec(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
};

struct IntegralSet {
  double H = 0;  // total rotating-frame energy
  double E = 0;  // Kepler energy
  double L = 0;  // angular momentum
  double e = 0;  // eccentricity, valid only if real_ecc
  bool real_ecc = false;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
  long steps = 0;
  double max_defect = 0;  // max drift of H, E, L over the run
};

double eval_hamiltonian(const PhaseState& s);
IntegralSet eval_integrals(const PhaseState& s);
Vec4 vector_field(const PhaseState& s);

/// Effective potential on circular data, f(r) = -1/r - r^2/2.
inline double effective_f(double r) { return -1.0 / r - 0.5 * r * r; }

Trajectory flow(const PhaseState& s, double t_final, double rtol = 1e-10,
                double atol = 1e-12);

/// Integrates the rotating flow and the inertial Kepler flow of E from the
/// same state and compares after undoing the frame rotation; returns the
/// maximum pointwise discrepancy over [0, t_final].
double inertial_factorization_defect(const PhaseState& s, double t_final,
                                     double rtol = 1e-10, double atol = 1e-12);

/// Reflection (q1,-q2,-p1,p2); preserves H and conjugates the flow to its
/// time reversal.
inline PhaseState reflect(const PhaseState& s) { return {s.q1, -s.q2, -s.p1, s.p2}; }

/// Rotation of both q and p by angle theta (cotangent lift).
PhaseState rotate_state(const PhaseState& s, double theta);

}  // namespace rkp
