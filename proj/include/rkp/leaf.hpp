#pragma once

// Explicit finite-energy leaves: axisymmetric planes and cylinders of the
// lower stack, their rho-copies, and the appendix annuli, with Hofer
// energies, puncture masses and residual audits.

#include <string>
#include <vector>

#include "rkp/liouville.hpp"
#include "rkp/model_ham.hpp"

namespace rkp {

enum class LeafCase {
  PlaneX20,
  PlaneX22Pi,
  PlaneX24Pi,
  CylY2L3,
  CylY2L3Mirror,
  Annulus,
};

std::string leaf_case_name(LeafCase c);

struct Puncture {
  std::string orbit;  // P2, P3, P3p, Q1, Q2
  int sign = 0;       // +1 positive, -1 negative
  double mass = 0;    // asymptotic action (0 => removable)
  bool removable = false;
};

struct Leaf {
  LeafCase kind = LeafCase::PlaneX20;
  double init = 0;   // y2(0) or x2(0)
  double theta = 0;  // annulus phase
  std::vector<double> s;   // parameter grid
  std::vector<double> a;   // R-component, a(0) = 0
  std::vector<double> x2;  // constant for plane cases
  std::vector<double> y2;
  std::vector<double> r;
  std::vector<double> d;   // annulus R-component offset integrand primitive
  Puncture neg_end;  // s -> -inf
  Puncture pos_end;  // s -> +inf
  double energy = 0;
};

Leaf solve_leaf(const ModelHamiltonian& m, LeafCase kind, double init);
Leaf mirror_leaf(const Leaf& leaf);
Leaf annulus_leaf(const ModelHamiltonian& m_appendix, double theta);

struct LeafAudit {
  double max_energy_residual = 0;   // |r^2/2 + K - c| over nodes
  double max_aprime_residual = 0;   // |a'(s) - pi r^2| (relative)
  double max_lambda_us = 0;         // |lambda(u_s)| at probe nodes
  double max_cr_residual = 0;       // Cauchy-Riemann defect, relative
  double min_frame_det = 0;         // positivity of the projected frame det
  bool ok = false;
};

LeafAudit leaf_audit(const ContactData& cd, const Leaf& leaf);

}  // namespace rkp
