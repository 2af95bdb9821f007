#pragma once

// Conley-Zehnder indices via the moving frame X1, X2, X3 and the linearized
// transverse flow, with rotation-interval extraction; periodic-orbit
// constructors for the binding orbits, the outer level curve and resonant
// torus orbits of the model stacks.

#include "rkp/liouville.hpp"
#include "rkp/model_ham.hpp"
#include "rkp/orbit_record.hpp"

namespace rkp {

struct FrameData {
  Vec4 X1{}, X2{}, X3{};
  Vec4 X1bar{}, X2bar{};
  double kappa[3][3] = {};
};

FrameData frame(const ContactData& cd, const Vec4& z);

struct RotationInterval {
  double lo = 0, hi = 0;
  bool degenerate = false;
};

struct CzResult {
  int index = 0;
  bool degenerate = false;
};

RotationInterval rotation_interval(const ContactData& cd, const OrbitRecord& orbit,
                                   int n_init = 64);
CzResult cz_index(const RotationInterval& I, double eps = 1e-6);

/// Convenience: rotation interval + index, stored into a copy of the orbit.
OrbitRecord with_cz(const ContactData& cd, OrbitRecord orbit, int n_init = 64);

/// Binding orbits of the lower stack (period 2pi circles at the critical
/// points of H~2).
OrbitRecord binding_p2(const ContactData& cd, int n_samples = 512);
OrbitRecord binding_p3(const ContactData& cd, int n_samples = 512);
OrbitRecord binding_p3_prime(const ContactData& cd, int n_samples = 512);

/// Appendix binding orbits.
OrbitRecord binding_q1(const ContactData& cd, int n_samples = 512);
OrbitRecord binding_q2(const ContactData& cd, int n_samples = 512);

/// The outer level curve H~2 = c with vanishing (x1,y1) part.
OrbitRecord green_orbit(const ContactData& cd, int n_samples = 1024);

/// Resonant S^1-family orbit: the (x2,y2) loop around (0,Lambda3) (or its
/// rho-mirror around (4pi,Lambda3)) whose reduced period is 2pi p/q; the
/// full orbit closes after q loops (Hamiltonian period 2pi p).  Requires
/// p/q > 2 (the reduced period exceeds 4pi near the well bottom).
OrbitRecord torus_orbit(const ContactData& cd, int p, int q, bool mirrored,
                        int n_samples = 1024);

/// Reduced period of the (x2,y2) loop through (x2*, Lambda3) on level m of
/// H~2 (loop around (0, Lambda3), m in (-1+B, 1+B)).
double reduced_loop_period(const ModelHamiltonian& m, double value);

}  // namespace rkp
