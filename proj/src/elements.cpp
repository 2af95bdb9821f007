#include "rkp/elements.hpp"

#include <limits>

namespace rkp {

namespace {

struct TwoBody {
  IntegralSet ints;
  double a;
  double alpha;
  double beta;    // = alpha when e < kCircularTol
  double nu;      // true anomaly
  double mean;    // mean anomaly
  bool circular;
};

TwoBody extract(const PhaseState& s, bool want_direct) {
  IntegralSet ints = eval_integrals(s);
  if (ints.E >= 0)
    throw DomainError("kepler_map: E >= 0 (unbound state), E = " + std::to_string(ints.E));
  if (want_direct && ints.L <= 0)
    throw DomainError("kepler_map: L <= 0 (not a direct orbit), L = " + std::to_string(ints.L));
  if (!want_direct && ints.L >= 0)
    throw DomainError("retrograde map: L >= 0, L = " + std::to_string(ints.L));
  if (!ints.real_ecc || ints.e >= 1)
    throw DomainError("kepler_map: e >= 1 (not an ellipse)");
  TwoBody tb;
  tb.ints = ints;
  tb.a = -1.0 / (2.0 * ints.E);
  tb.alpha = wrap_2pi(std::atan2(s.q2, s.q1));
  tb.circular = ints.e < kCircularTol;
  if (tb.circular) {
    tb.beta = tb.alpha;
    tb.nu = 0;
    tb.mean = 0;
    return tb;
  }
  // eccentricity vector ((|p|^2 - 1/r) q - (q.p) p), norm e
  double r = s.r();
  double p2 = s.p1 * s.p1 + s.p2 * s.p2;
  double qp = s.q1 * s.p1 + s.q2 * s.p2;
  double ex = (p2 - 1.0 / r) * s.q1 - qp * s.p1;
  double ey = (p2 - 1.0 / r) * s.q2 - qp * s.p2;
  tb.beta = wrap_2pi(std::atan2(ey, ex));
  tb.nu = wrap_2pi(tb.alpha - tb.beta);
  double e = ints.e;
  // eccentric anomaly via the half-angle formula, then Kepler's equation
  double Ea = 2.0 * std::atan2(std::sqrt(1.0 - e) * std::sin(0.5 * tb.nu),
                               std::sqrt(1.0 + e) * std::cos(0.5 * tb.nu));
  tb.mean = wrap_2pi(Ea - e * std::sin(Ea));
  return tb;
}

}  // namespace

KeplerElements kepler_map(const PhaseState& s) {
  TwoBody tb = extract(s, true);
  return {tb.alpha, tb.beta, tb.a, tb.ints.e};
}

DelaunayState delaunay_map(const KeplerElements& el, bool circular_ok) {
  DelaunayState ds;
  if (el.e < kCircularTol) {
    if (!circular_ok)
      throw DomainError("argument of the perihelion is undefined for a circular orbit");
    ds.circular = true;
    ds.l = 0;
    ds.k = el.alpha;  // mean longitude survives the circular limit
    ds.L = ds.K = std::sqrt(el.a);
    return ds;
  }
  ds.l = el.beta;
  double nu = wrap_2pi(el.alpha - el.beta);
  double Ea = 2.0 * std::atan2(std::sqrt(1.0 - el.e) * std::sin(0.5 * nu),
                               std::sqrt(1.0 + el.e) * std::cos(0.5 * nu));
  ds.k = wrap_2pi(Ea - el.e * std::sin(Ea));
  ds.L = std::sqrt(el.a * (1.0 - el.e * el.e));
  ds.K = std::sqrt(el.a);
  return ds;
}

double solve_kepler_equation(double M, double e) {
  double Ea = M;
  for (int i = 0; i < 100; ++i) {
    double f = Ea - e * std::sin(Ea) - M;
    double fp = 1.0 - e * std::cos(Ea);
    double d = f / fp;
    Ea -= d;
    if (std::fabs(d) < 1e-15) break;
  }
  return Ea;
}

PoincareState poincare_map(const PhaseState& s) {
  TwoBody tb = extract(s, true);
  PoincareState ps;
  ps.regime = PoincareRegime::Direct;
  double K = std::sqrt(tb.a);
  if (tb.circular) {
    ps.x1 = ps.y1 = 0;
    ps.x2 = tb.alpha;
    ps.y2 = K;
    return ps;
  }
  double L = tb.ints.L;  // equals sqrt(a(1-e^2)) exactly for e^2 = 2EL^2+1
  double w = std::sqrt(2.0 * std::max(0.0, K - L));
  double l = tb.beta;
  ps.x1 = -w * std::sin(l);
  ps.y1 = w * std::cos(l);
  ps.x2 = wrap_2pi(l + tb.mean);
  ps.y2 = K;
  return ps;
}

PhaseState poincare_inverse(const PoincareState& ps) {
  if (ps.regime == PoincareRegime::Retrograde) return retrograde_poincare_inverse(ps);
  if (ps.y2 <= 0) throw DomainError("poincare_inverse: Lambda <= 0");
  double K = ps.y2;
  double L = K - 0.5 * (ps.x1 * ps.x1 + ps.y1 * ps.y1);
  if (L <= 0)
    throw DomainError("poincare_inverse: reconstructed e >= 1 (L = " +
                      std::to_string(L) + ")");
  double a = K * K;
  double e2 = 1.0 - (L / K) * (L / K);
  double e = std::sqrt(std::max(0.0, e2));
  double l, M;
  if (e < kCircularTol) {
    l = 0;
    M = ps.x2;
  } else {
    l = std::atan2(-ps.x1, ps.y1);
    M = ps.x2 - l;
  }
  double Ea = solve_kepler_equation(M, e);
  double r = a * (1.0 - e * std::cos(Ea));
  double se = std::sqrt(1.0 - e * e);
  // perifocal position/velocity, then rotate by the perihelion argument
  double qx = a * (std::cos(Ea) - e), qy = a * se * std::sin(Ea);
  double vs = std::sqrt(a) / r;
  double px = -vs * std::sin(Ea), py = vs * se * std::cos(Ea);
  double cl = std::cos(l), sl = std::sin(l);
  return {cl * qx - sl * qy, sl * qx + cl * qy, cl * px - sl * py, sl * px + cl * py};
}

PoincareState retrograde_poincare(const PhaseState& s) {
  PhaseState flipped = {s.q1, s.q2, -s.p1, -s.p2};
  TwoBody probe = extract(s, false);  // enforces L < 0 with a clear message
  (void)probe;
  PoincareState direct = poincare_map(flipped);
  PoincareState out = direct;
  out.y1 = -direct.y1;
  out.y2 = -direct.y2;
  out.regime = PoincareRegime::Retrograde;
  return out;
}

PhaseState retrograde_poincare_inverse(const PoincareState& ps) {
  PoincareState direct = ps;
  direct.y1 = -ps.y1;
  direct.y2 = -ps.y2;
  direct.regime = PoincareRegime::Direct;
  PhaseState s = poincare_inverse(direct);
  return {s.q1, s.q2, -s.p1, -s.p2};
}

namespace {

// Map evaluation as R^4 -> R^4 with a mask of angle components for
// wrap-aware finite differencing.
struct MapEval {
  Vec4 value;
  std::array<bool, 4> is_angle;
};

MapEval apply_map(MapVariant map, const PhaseState& s) {
  switch (map) {
    case MapVariant::Identity:
      return {s.vec(), {false, false, false, false}};
    case MapVariant::Delaunay: {
      DelaunayState d = delaunay_map(kepler_map(s));
      return {{d.l, d.k, d.L, d.K}, {true, true, false, false}};
    }
    case MapVariant::DelaunayTrueAnomaly: {
      KeplerElements el = kepler_map(s);
      DelaunayState d = delaunay_map(el);
      double nu = wrap_2pi(el.alpha - el.beta);
      return {{d.l, nu, d.L, d.K}, {true, true, false, false}};
    }
    case MapVariant::Poincare: {
      PoincareState p = poincare_map(s);
      return {p.vec(), {false, true, false, false}};
    }
    case MapVariant::RetrogradePoincare: {
      PoincareState p = retrograde_poincare(s);
      return {p.vec(), {false, true, false, false}};
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

double symplecticity_defect(MapVariant map, const PhaseState& s, double h,
                            double boundary_margin) {
  if (map != MapVariant::Identity) {
    IntegralSet ints = eval_integrals(s);
    bool retro = map == MapVariant::RetrogradePoincare;
    double Lmag = retro ? -ints.L : ints.L;
    if (!ints.real_ecc || ints.e < boundary_margin || ints.e > 1 - boundary_margin ||
        Lmag < boundary_margin)
      throw DomainError("symplecticity_defect: state too close to a boundary stratum");
  }
  // central-difference Jacobian, wrap-aware on angle outputs
  Mat4 J{};
  Vec4 z = s.vec();
  for (int j = 0; j < 4; ++j) {
    Vec4 zp = z, zm = z;
    zp[j] += h;
    zm[j] -= h;
    MapEval fp = apply_map(map, PhaseState::from_vec(zp));
    MapEval fm = apply_map(map, PhaseState::from_vec(zm));
    for (int i = 0; i < 4; ++i) {
      double d = fp.is_angle[i] ? angle_diff(fp.value[i], fm.value[i])
                                : fp.value[i] - fm.value[i];
      J[i][j] = d / (2 * h);
    }
  }
  // Omega for ordering (x1,x2,y1,y2) and form dy1^dx1 + dy2^dx2;
  // identical matrix on the (q1,q2,p1,p2) side for dp^dq.
  Mat4 Om{};
  Om[0][2] = -1;
  Om[1][3] = -1;
  Om[2][0] = 1;
  Om[3][1] = 1;
  double defect = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double acc = 0;
      for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) acc += J[i][a] * Om[i][k] * J[k][b];
      defect = std::max(defect, std::fabs(acc - Om[a][b]));
    }
  return defect;
}

}  // namespace rkp
