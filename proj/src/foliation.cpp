#include "rkp/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rkp/integrate.hpp"

namespace rkp {

namespace {

// reduced Kepler Hamiltonian on the chart axis
double h2_axis(double y2) { return -1.0 / (2 * y2 * y2) - y2; }

double det4(Mat4 A) {
  double det = 1;
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
    if (A[piv][col] == 0) return 0;
    if (piv != col) {
      std::swap(A[piv], A[col]);
      det = -det;
    }
    det *= A[col][col];
    for (int r = col + 1; r < 4; ++r) {
      double f = A[r][col] / A[col][col];
      for (int cc = col; cc < 4; ++cc) A[r][cc] -= f * A[col][cc];
    }
  }
  return det;
}

double resonant_y2(int m) { return std::cbrt(m / (m - 1.0)); }

}  // namespace

double DiscLeaf::radius(double y2) const {
  double v = retro ? 2 * (h2_axis(y2) - c) : 2 * (c - h2_axis(y2));
  return std::sqrt(std::max(0.0, v));
}

double DiscLeaf::y2_of_radius(double r) const {
  // radius is monotone on the window: increasing for the direct chart,
  // decreasing for the retrograde one
  double lo = y2_lo, hi = y2_hi;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    bool below = radius(mid) < r;
    if (below == !retro)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

DiscLeaf disc_leaf(double c, double E0, double x2_base) {
  DiscLeaf d;
  d.c = c;
  d.E0 = E0;
  d.x2_base = x2_base;
  d.retro = c > -1.5;
  if (c >= 0 || c == -1.5)
    throw DomainError("disc_leaf: need c < 0, c != -3/2");
  CircularOrbitSet orbs = circular_orbits(c);
  double Eu = 0;
  bool found = false;
  std::string want = d.retro ? "retro_u" : "direct_u";
  for (const CircularRoot& r : orbs.roots)
    if (r.label == want) {
      Eu = r.E;
      found = true;
    }
  if (!found) throw DomainError("disc_leaf: no unbounded-component circular orbit");
  if (!(E0 > Eu && E0 < 0))
    throw DomainError("disc_leaf: E0 outside (E_u, 0)");
  double y_circ = 1.0 / std::sqrt(-2 * Eu);
  double y_edge = 1.0 / std::sqrt(-2 * E0);
  if (d.retro) {
    d.y2_lo = -y_edge;
    d.y2_hi = -y_circ;
    d.y2_circ = d.y2_hi;
    d.r_max = d.radius(d.y2_lo);
  } else {
    d.y2_lo = y_circ;
    d.y2_hi = y_edge;
    d.y2_circ = d.y2_lo;
    d.r_max = d.radius(d.y2_hi);
  }
  auto xdot = [](double y) { return std::fabs(1.0 - 1.0 / (y * y * y)); };
  d.min_xdot = std::min(xdot(d.y2_lo), xdot(d.y2_hi));
  return d;
}

ReturnMapResult return_map(const DiscLeaf& d, double x1, double y1, double y2) {
  if (!(y2 >= d.y2_lo - 1e-12 && y2 <= d.y2_hi + 1e-12))
    throw DomainError("return_map: y2 outside the window");
  double r = std::hypot(x1, y1);
  if (r > d.radius(y2) + 1e-9)
    throw DomainError("return_map: point outside the leaf disc");
  ReturnMapResult res;
  res.x1 = x1;
  res.y1 = y1;
  res.y2 = y2;
  double y3 = y2 * y2 * y2;
  res.T_ret = kTwoPi * y3 / (y3 - 1.0);
  double theta = d.retro ? res.T_ret : -res.T_ret;
  double rot = std::remainder(theta, kTwoPi);
  if (!d.retro && rot > 0) rot -= kTwoPi;
  if (d.retro && rot < 0) rot += kTwoPi;
  res.rotation = rot;
  res.x1_out = x1 * std::cos(theta) - y1 * std::sin(theta);
  res.y1_out = x1 * std::sin(theta) + y1 * std::cos(theta);
  return res;
}

double return_map_flow_error(const DiscLeaf& d, const ReturnMapResult& rm) {
  PoincareState ps;
  ps.x1 = rm.x1;
  ps.x2 = d.x2_base;
  ps.y1 = rm.y1;
  ps.y2 = rm.y2;
  ps.regime = d.retro ? PoincareRegime::Retrograde : PoincareRegime::Direct;
  PhaseState s0 = d.retro ? retrograde_poincare_inverse(ps) : poincare_inverse(ps);

  auto rhs = [](double, const StateN<4>& y) -> StateN<4> {
    Vec4 f = vector_field(PhaseState::from_vec({y[0], y[1], y[2], y[3]}));
    return {f[0], f[1], f[2], f[3]};
  };
  IntegratorOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  StateN<4> y = {s0.q1, s0.q2, s0.p1, s0.p2};
  y = integrate<4>(rhs, y, 0, rm.T_ret, opt);
  PhaseState s1{y[0], y[1], y[2], y[3]};
  PoincareState out = d.retro ? retrograde_poincare(s1) : poincare_map(s1);
  double err = std::fabs(out.x1 - rm.x1_out);
  err = std::max(err, std::fabs(out.y1 - rm.y1_out));
  err = std::max(err, std::fabs(out.y2 - rm.y2));
  err = std::max(err, std::fabs(angle_diff(out.x2, d.x2_base)));
  return err;
}

std::vector<FixedPoint> fixed_points_window(const DiscLeaf& d, double y2_lo,
                                            double y2_hi) {
  std::vector<FixedPoint> out;
  out.push_back({d.y2_circ, true, 0, 0});
  if (y2_hi <= 1.0) return out;  // T_ret/2pi in (0,1) there, never integral
  for (int m = 2; m <= 1'000'000; ++m) {
    double y = resonant_y2(m);
    if (y < y2_lo - 1e-9) break;  // decreasing in m
    if (y <= y2_hi + 1e-9 && y >= y2_lo - 1e-9) out.push_back({y, false, m - 1, m});
  }
  return out;
}

std::vector<FixedPoint> fixed_points(double c, double E0) {
  DiscLeaf d = disc_leaf(c, E0, 0.0);
  return fixed_points_window(d, d.y2_lo, d.y2_hi);
}

int crossing_count(double c, int k, int l) {
  auto rec = torus_on_level(c, k, l);
  if (!rec) throw DomainError("crossing_count: torus absent from the level");
  if (rec->collision)
    throw DomainError("crossing_count: collision torus, count undefined");
  return std::abs(l - k);
}

int crossing_count_integrated(double c, int k, int l, double x2_base) {
  auto rec = torus_on_level(c, k, l);
  if (!rec) throw DomainError("crossing_count: torus absent from the level");
  if (rec->collision)
    throw DomainError("crossing_count: collision torus, count undefined");
  PhaseState s0 = level_state(c, rec->E);

  auto rhs = [](double, const StateN<4>& y) -> StateN<4> {
    Vec4 f = vector_field(PhaseState::from_vec({y[0], y[1], y[2], y[3]}));
    return {f[0], f[1], f[2], f[3]};
  };
  IntegratorOptions opt;
  opt.rtol = 1e-11;
  opt.atol = 1e-13;
  opt.h_max = 0.05;  // keeps the per-step mean-longitude change well below pi

  double lam0 = poincare_map(s0).x2;
  double base = x2_base;
  // keep the section away from the start/end point (the orbit closes there)
  if (std::fabs(std::remainder(lam0 - base, kTwoPi)) < 1e-3) base += 0.5;
  double lam = lam0, prev = lam0;
  integrate<4>(rhs, {s0.q1, s0.q2, s0.p1, s0.p2}, 0, kTwoPi * l, opt,
               [&](double, const StateN<4>& y) {
                 double raw = poincare_map(PhaseState{y[0], y[1], y[2], y[3]}).x2;
                 lam += angle_diff(raw, prev);
                 prev = raw;
                 return true;
               });
  double u0 = (lam0 - base) / kTwoPi, u1 = (lam - base) / kTwoPi;
  return static_cast<int>(std::llround(std::floor(u0) - std::floor(u1)));
}

FoliationReport assemble_report(const ContactData& cd,
                                const std::vector<OrbitRecord>& binding,
                                const std::vector<Leaf>& leaves) {
  const ModelHamiltonian& m = cd.Y.model();
  FoliationReport rep;
  rep.regime = m.regime() == StackRegime::Appendix ? "appendix" : "lower";
  for (const OrbitRecord& o : binding) {
    if (!o.cz)
      throw DomainError("assemble_report: missing CZ data for " + o.name);
    rep.binding.push_back(o);
  }

  rep.min_margin = 1e300;
  for (const Leaf& leaf : leaves) {
    LeafEntry e;
    e.kind = leaf_case_name(leaf.kind);
    e.init = leaf.init;
    e.neg = leaf.neg_end;
    e.pos = leaf.pos_end;
    e.energy = leaf.energy;
    e.margin = 1e300;
    bool annulus = leaf.kind == LeafCase::Annulus;
    size_t n = leaf.s.size();
    for (size_t i = 8; i + 8 < n; i += 64) {
      double r = leaf.r[i];
      if (r < 1e-3) continue;  // parametrization degenerates near a removable end
      double ds = leaf.s[i + 1] - leaf.s[i - 1];
      double xdot = (leaf.x2[i + 1] - leaf.x2[i - 1]) / ds;
      double ydot = (leaf.y2[i + 1] - leaf.y2[i - 1]) / ds;
      double rdot = (leaf.r[i + 1] - leaf.r[i - 1]) / ds;
      for (double t : {0.07, 0.31, 0.63}) {
        Vec4 z, ut, us;
        if (annulus) {
          double th = leaf.theta;
          z = {r * std::cos(th), kTwoPi * t, r * std::sin(th), leaf.y2[i]};
          ut = {0, kTwoPi, 0, 0};
          us = {rdot * std::cos(th), 0, rdot * std::sin(th), ydot};
        } else {
          double ph = kTwoPi * t;
          z = {r * std::sin(ph), leaf.x2[i], r * std::cos(ph), leaf.y2[i]};
          ut = {kTwoPi * r * std::cos(ph), 0, -kTwoPi * r * std::sin(ph), 0};
          us = {rdot * std::sin(ph), xdot, rdot * std::cos(ph), ydot};
        }
        Vec4 xh = cd.x_h(z);
        Vec4 g = m.grad4(z);
        Mat4 A{};
        for (int row = 0; row < 4; ++row) {
          A[row][0] = us[row] / (norm(us) + 1e-300);
          A[row][1] = ut[row] / (norm(ut) + 1e-300);
          A[row][2] = xh[row] / (norm(xh) + 1e-300);
          A[row][3] = g[row] / (norm(g) + 1e-300);
        }
        e.margin = std::min(e.margin, std::fabs(det4(A)));
      }
    }
    rep.min_margin = std::min(rep.min_margin, e.margin);
    rep.leaves.push_back(e);
  }

  if (rep.regime == "appendix") {
    rep.rho_closed = true;  // theta-family is closed under the involution
  } else {
    auto mirror_kind = [](const std::string& k) -> std::string {
      if (k == "plane_x2_0") return "plane_x2_4pi";
      if (k == "plane_x2_4pi") return "plane_x2_0";
      if (k == "cyl_y2_L3") return "cyl_y2_L3_mirror";
      if (k == "cyl_y2_L3_mirror") return "cyl_y2_L3";
      return k;  // plane_x2_2pi is its own mirror
    };
    rep.rho_closed = true;
    for (const LeafEntry& e : rep.leaves) {
      std::string want = mirror_kind(e.kind);
      bool found = false;
      for (const LeafEntry& f : rep.leaves)
        if (f.kind == want) found = true;
      if (!found) rep.rho_closed = false;
    }
  }
  return rep;
}

AnnulusCoverage annulus_coverage(const ModelHamiltonian& m, const Leaf& annulus,
                                 int n, unsigned seed) {
  if (annulus.kind != LeafCase::Annulus)
    throw DomainError("annulus_coverage: annulus leaf required");
  AnnulusCoverage cov;
  cov.n = n;
  if (!std::is_sorted(annulus.y2.begin(), annulus.y2.end())) return cov;
  double c = m.level();
  std::mt19937_64 rng(seed);
  auto samples = m.sample_sigma(rng, n);
  for (const Vec4& z : samples) {
    double y2 = z[3];
    if (y2 < annulus.y2.front() - 1e-9 || y2 > annulus.y2.back() + 1e-9) continue;
    double rs = std::hypot(z[0], z[2]);
    // theta = atan2(y1, x1) and s from the monotone y2 profile are then
    // determined; the assignment is consistent iff z lies on the level
    double res = std::fabs(0.5 * rs * rs + m.h2(0.0, y2).v - c);
    cov.max_residual = std::max(cov.max_residual, res);
    if (res < 1e-8) ++cov.assigned;
  }
  cov.ok = cov.assigned == cov.n && cov.max_residual < 1e-8;
  return cov;
}

}  // namespace rkp
