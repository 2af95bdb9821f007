#pragma once

// Disc foliations over the near-circular window, the exact first-return map
// with its fixed-point enumeration and torus crossing counts, and assembly
// of the transverse-foliation report.

#include <string>
#include <vector>

#include "rkp/cz_index.hpp"
#include "rkp/leaf.hpp"
#include "rkp/orbit_catalog.hpp"

namespace rkp {

struct DiscLeaf {
  double c = 0, E0 = 0;
  double x2_base = 0;
  bool retro = false;
  double y2_lo = 0, y2_hi = 0;  // window, increasing
  double y2_circ = 0;           // sheet carrying the circular orbit (r = 0)
  double r_max = 0;             // disc radius at the window boundary
  double min_xdot = 0;          // transversality margin, min |1 - 1/y2^3|

  double radius(double y2) const;
  double y2_of_radius(double r) const;
};

DiscLeaf disc_leaf(double c, double E0, double x2_base);

struct ReturnMapResult {
  double x1 = 0, y1 = 0, y2 = 0;
  double T_ret = 0;
  double x1_out = 0, y1_out = 0;
  double rotation = 0;  // -T_ret mod 2pi (+T_ret for the retrograde chart)
};

ReturnMapResult return_map(const DiscLeaf& d, double x1, double y1, double y2);

/// Max discrepancy between the closed form and the Cartesian flow integrated
/// for T_ret and pulled back through the element maps.
double return_map_flow_error(const DiscLeaf& d, const ReturnMapResult& rm);

struct FixedPoint {
  double y2 = 0;
  bool origin = false;  // the circular-orbit axis point
  int k = 0, l = 0;     // resonance label for fixed circles
};

std::vector<FixedPoint> fixed_points(double c, double E0);
/// Synthetic-window variant used to exercise the resonant branch.
std::vector<FixedPoint> fixed_points_window(const DiscLeaf& d, double y2_lo,
                                            double y2_hi);

/// Closed-form transverse crossing count of one T_{k,l} orbit with the disc,
/// |l - k|; throws if the torus is absent from the level.
int crossing_count(double c, int k, int l);
/// The same count read off an integrated orbit.
int crossing_count_integrated(double c, int k, int l, double x2_base);

struct LeafEntry {
  std::string kind;
  double init = 0;
  Puncture neg, pos;
  double energy = 0;
  double margin = 0;  // transversality of the leaf to the flow
};

struct FoliationReport {
  std::string regime;  // "lower" or "appendix"
  std::vector<OrbitRecord> binding;
  std::vector<LeafEntry> leaves;
  double min_margin = 0;
  bool rho_closed = false;
};

FoliationReport assemble_report(const ContactData& cd,
                                const std::vector<OrbitRecord>& binding,
                                const std::vector<Leaf>& leaves);

struct AnnulusCoverage {
  int n = 0;
  int assigned = 0;
  double max_residual = 0;
  bool ok = false;
};

/// Checks that sampled level points are covered by the annulus family: theta
/// from (x1,y1), s from the monotone y2 profile, radius residual bounded.
AnnulusCoverage annulus_coverage(const ModelHamiltonian& m_appendix,
                                 const Leaf& annulus, int n, unsigned seed);

}  // namespace rkp
