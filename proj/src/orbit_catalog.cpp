#include "rkp/orbit_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rkp {

namespace {

double bisect(double lo, double hi, auto&& fn, double tol = 1e-15) {
  double flo = fn(lo);
  for (int i = 0; i < 200 && hi - lo > tol * std::max(1.0, std::fabs(lo)); ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = fn(mid);
    if ((flo <= 0) == (fm <= 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double circ_poly(double E, double c) { return 2 * E * sqr(c - E) + 1; }
double circ_poly_d(double E, double c) { return 2 * sqr(c - E) - 4 * E * (c - E); }

}  // namespace

HillRadii hill_radii(double c) {
  if (c >= 0) throw DomainError("hill_radii: c >= 0 outside the bound regime");
  HillRadii out;
  out.c = c;
  if (std::fabs(c + 1.5) < 1e-14) {
    out.r_b = out.r_u = 1.0;
    return out;
  }
  if (c > -1.5) {
    out.connected = true;
    return out;
  }
  auto g = [c](double r) { return effective_f(r) - c; };
  double R = std::sqrt(-2 * c) + 2;
  out.r_b = bisect(1e-3, 1.0, g);
  out.r_u = bisect(1.0, R, g);
  // Newton polish with f'(r) = 1/r^2 - r
  for (double* r : {&out.r_b, &out.r_u})
    for (int i = 0; i < 4; ++i) *r -= g(*r) / (1.0 / sqr(*r) - *r);
  return out;
}

CircularOrbitSet circular_orbits(double c) {
  if (c >= 0 || std::fabs(c + 1.5) < 1e-14)
    throw DomainError("circular_orbits: require c < 0, c != -3/2");
  CircularOrbitSet out;
  out.c = c;
  // all roots lie in (c-1, 0): |E-c| = (-2E)^(-1/2) < 1 for E < -1/2-ish,
  // scanned generously
  double lo = c - 1.2, hi = -1e-9;
  const int n = 20000;
  double prev = circ_poly(lo, c);
  for (int i = 1; i <= n; ++i) {
    double E = lo + (hi - lo) * i / n;
    double cur = circ_poly(E, c);
    if ((prev <= 0) != (cur <= 0)) {
      double root = bisect(lo + (hi - lo) * (i - 1) / n, E,
                           [c](double x) { return circ_poly(x, c); });
      for (int it = 0; it < 6; ++it)
        root -= circ_poly(root, c) / circ_poly_d(root, c);
      out.roots.push_back({root, root - c, ""});
    }
    prev = cur;
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const CircularRoot& a, const CircularRoot& b) { return a.E < b.E; });
  if (c < -1.5) {
    if (out.roots.size() != 3)
      throw std::runtime_error("circular_orbits: expected 3 roots for c < -3/2");
    out.roots[0].label = "retro_b";
    out.roots[1].label = "direct_b";
    out.roots[2].label = "direct_u";
  } else {
    if (out.roots.size() != 1)
      throw std::runtime_error("circular_orbits: expected 1 root for -3/2 < c < 0");
    out.roots[0].label = "retro_u";
  }
  return out;
}

double torus_energy(int k, int l) {
  if (k <= 0 || l <= 0 || std::gcd(k, l) != 1)
    throw DomainError("torus_energy: k, l must be coprime positive integers");
  return -0.5 * std::pow(double(k) / double(l), 2.0 / 3.0);
}

std::optional<TorusRecord> torus_on_level(double c, int k, int l) {
  if (c >= 0) throw DomainError("torus_on_level: c >= 0");
  TorusRecord rec;
  rec.k = k;
  rec.l = l;
  rec.E = torus_energy(k, l);
  rec.L = rec.E - c;
  double e2 = 2 * rec.E * sqr(rec.L) + 1;
  if (e2 < 0 || e2 >= 1) return std::nullopt;
  rec.e = std::sqrt(e2);
  rec.collision = std::fabs(rec.L) < 1e-10;
  return rec;
}

PhaseState circular_state(double r0, bool direct) {
  double v = 1.0 / std::sqrt(r0);
  return {r0, 0, 0, direct ? v : -v};
}

PhaseState level_state(double c, double E) {
  double L = E - c;
  double e2 = 2 * E * L * L + 1;
  if (E >= 0 || e2 < 0 || e2 >= 1)
    throw DomainError("level_state: (c, E) not on an elliptic component");
  double e = std::sqrt(e2);
  double a = -1.0 / (2 * E);
  double rp = a * (1 - e);
  return {rp, 0, 0, L / rp};
}

std::vector<RangeWindow> el_range_report(double c, int samples) {
  if (c >= 0) throw DomainError("el_range_report: c >= 0");
  CircularOrbitSet circ = circular_orbits(c);
  std::vector<RangeWindow> out;
  auto scan = [&](const std::string& name, double E_lo, double E_hi, double L_lo,
                  double L_hi, bool hi_closed) {
    RangeWindow w;
    w.component = name;
    w.E_lo = E_lo;
    w.E_hi = E_hi;
    w.L_lo = L_lo;
    w.L_hi = L_hi;
    w.E_min_seen = w.L_min_seen = 1e300;
    w.E_max_seen = w.L_max_seen = -1e300;
    w.pass = true;
    for (int i = 0; i <= samples; ++i) {
      double E = E_lo + (E_hi - E_lo) * i / (samples + (hi_closed ? 0 : 1));
      double L = E - c;
      double e2 = 2 * E * L * L + 1;
      if (e2 < 1e-14 || e2 >= 1 - 1e-5) continue;  // off-component or near-collision
      IntegralSet ints = eval_integrals(level_state(c, std::min(E, -1e-9)));
      w.E_min_seen = std::min(w.E_min_seen, ints.E);
      w.E_max_seen = std::max(w.E_max_seen, ints.E);
      w.L_min_seen = std::min(w.L_min_seen, ints.L);
      w.L_max_seen = std::max(w.L_max_seen, ints.L);
      const double tol = 1e-9;
      if (ints.E < E_lo - tol || ints.E >= E_hi + tol || ints.L < L_lo - tol ||
          ints.L >= L_hi + tol)
        w.pass = false;
    }
    out.push_back(w);
  };
  if (c < -1.5) {
    scan("Sigma_b", circ.roots[0].E, circ.roots[1].E, circ.roots[0].L,
         circ.roots[1].L, true);
    scan("Sigma_u", circ.roots[2].E, 0.0, circ.roots[2].L, -c, false);
  } else {
    scan("Sigma_u", circ.roots[0].E, 0.0, circ.roots[0].L, -c, false);
  }
  return out;
}

}  // namespace rkp
