#include "rkp/model_ham.hpp"

#include <algorithm>
#include <cmath>

#include "rkp/orbit_catalog.hpp"

namespace rkp {

namespace {

struct Scalar1 {
  double v = 0, d1 = 0, d2 = 0;
};

// Kepler part -1/(2y^2) - y (lower sign) or +1/(2y^2) + y (upper sign).
Scalar1 base_h2(double y, bool upper) {
  double s = upper ? -1.0 : 1.0;
  return {s * (-0.5 / (y * y) - y), s * (1.0 / (y * y * y) - 1.0),
          s * (-3.0 / (y * y * y * y))};
}

}  // namespace

double unmodified_h(const Vec4& z) {
  return -0.5 / sqr(z[3]) - z[3] + 0.5 * (sqr(z[0]) + sqr(z[2]));
}

double b_bound(const StackParams& p) {
  if (p.regime == StackRegime::Upper) {
    double nu2 = -1.0 / std::sqrt(-2.0 * p.E0);
    double y = nu2 - p.eps0;
    double rhs = 0.5 / (y * y) + y - 0.5 * sqr(y - p.lam3) - 1.0;
    return std::min(0.0, rhs);
  }
  double y = 1.0 / std::sqrt(-2.0 * p.E0) + p.eps0;
  return -0.5 / (y * y) - y - 0.5 * sqr(y - p.lam3) - 1.0;
}

ModelHamiltonian ModelHamiltonian::build(const StackParams& in, bool validate) {
  StackParams p = in;
  bool upper = p.regime == StackRegime::Upper;
  CircularOrbitSet circ = circular_orbits(p.c);
  if (!upper) {
    const CircularRoot& du = circ.roots.back();  // direct_u
    if (validate && (p.c >= -1.5))
      throw DomainError("lower stack requires c < -3/2");
    if (validate && !(p.E0 > du.E && p.E0 < 0))
      throw DomainError("E0 outside (E_direct_u, 0): E_direct_u = " +
                        std::to_string(du.E));
    p.lam1 = 1.0 / std::sqrt(-2.0 * du.E);
    p.lam2 = 1.0 / std::sqrt(-2.0 * p.E0);
  } else {
    const CircularRoot& ru = circ.roots.front();  // retro_u
    if (validate && !(p.c > -1.5 && p.c < 0))
      throw DomainError("upper stack requires -3/2 < c < 0");
    if (validate && !(p.E0 > ru.E && p.E0 <= p.c))
      throw DomainError("E0 outside (E_retro_u, c]: E_retro_u = " +
                        std::to_string(ru.E));
    p.lam1 = -1.0 / std::sqrt(-2.0 * ru.E);   // nu1
    p.lam2 = -1.0 / std::sqrt(-2.0 * p.E0);   // nu2
  }
  if (validate) {
    if (!upper && !(p.lam3 > p.lam2))
      throw DomainError("Lambda3 must exceed Lambda2 = " + std::to_string(p.lam2));
    if (upper && !(p.lam3 < p.lam2))
      throw DomainError("nu3 must lie below nu2 = " + std::to_string(p.lam2));
    double gap = upper ? p.lam2 - p.lam3 : p.lam3 - p.lam2;
    if (!(p.eps0 > 0 && p.eps0 < 0.5 * gap))
      throw DomainError("eps0 outside (0, (gap)/2), gap = " + std::to_string(gap));
    double bb = b_bound(p);
    if (!(p.B < bb))
      throw DomainError((upper ? std::string("D") : std::string("B")) +
                        " fails the strict bound by Delta = " +
                        std::to_string(p.B - bb));
    if (p.regime != StackRegime::Appendix) {
      if (!(p.eps1 > 0 && p.eps1 < 1.0))
        throw DomainError("eps1 outside (0, 1)");
      if (!(p.eps2 > 0 && p.eps2 < kPi))
        throw DomainError("eps2 outside (0, pi)");
    }
  }
  ModelHamiltonian m;
  m.p_ = p;
  if (!upper) {
    m.f_ = SmoothStep{p.lam2 + p.eps0, p.lam2 + 2 * p.eps0};
  } else {
    m.f_ = SmoothStep{p.lam2 - 2 * p.eps0, p.lam2 - p.eps0};  // flipped below
  }
  m.g_ = SmoothStep{-2 * p.eps1, -p.eps1};
  return m;
}

double ModelHamiltonian::level() const {
  return p_.regime == StackRegime::Upper ? -p_.c : p_.c;
}

// K = (1-f) * base + f * (1/2 (y2-lam3)^2 - cos(x2/2) + B)
Scalar2 ModelHamiltonian::interp_k(double x2, double y2) const {
  bool upper = p_.regime == StackRegime::Upper;
  Scalar1 base = base_h2(y2, upper);
  SmoothValue fs = f_(y2);
  double f = fs.v, f1 = fs.d1, f2 = fs.d2;
  if (upper) {  // non-increasing interpolation: 1 below the zone, 0 above
    f = 1 - f;
    f1 = -f1;
    f2 = -f2;
  }
  double dy = y2 - p_.lam3;
  double Q = 0.5 * dy * dy - std::cos(0.5 * x2) + p_.B;
  double Qx = 0.5 * std::sin(0.5 * x2);
  double Qxx = 0.25 * std::cos(0.5 * x2);
  Scalar2 out;
  out.v = (1 - f) * base.v + f * Q;
  out.g[0] = f * Qx;
  out.g[1] = (1 - f) * base.d1 + f * dy + f1 * (Q - base.v);
  out.h[0][0] = f * Qxx;
  out.h[0][1] = out.h[1][0] = f1 * Qx;
  out.h[1][1] = (1 - f) * base.d2 + f * 1.0 + 2 * f1 * (dy - base.d1) +
                f2 * (Q - base.v);
  return out;
}

// K~ = (1-g) G + g K with G the quadratic well at (0, lam3)
Scalar2 ModelHamiltonian::ktilde(double x2, double y2) const {
  Scalar2 K = interp_k(x2, y2);
  SmoothValue gs = g_(x2);
  double g = gs.v, g1 = gs.d1, g2 = gs.d2;
  if (g >= 1.0 && g1 == 0)
    return K;
  double dy = y2 - p_.lam3;
  double G = 0.5 * x2 * x2 + 0.5 * dy * dy;
  Scalar2 out;
  out.v = (1 - g) * G + g * K.v;
  out.g[0] = (1 - g) * x2 + g * K.g[0] + g1 * (K.v - G);
  out.g[1] = (1 - g) * dy + g * K.g[1];
  out.h[0][0] = (1 - g) * 1.0 + g * K.h[0][0] + 2 * g1 * (K.g[0] - x2) +
                g2 * (K.v - G);
  out.h[0][1] = out.h[1][0] = g * K.h[0][1] + g1 * (K.g[1] - dy);
  out.h[1][1] = (1 - g) * 1.0 + g * K.h[1][1];
  return out;
}

Scalar2 ModelHamiltonian::h2(double x2, double y2) const {
  if (p_.regime == StackRegime::Appendix) {
    Scalar1 base = base_h2(y2, false);
    SmoothValue fs = f_(y2);
    double dy = y2 - p_.lam3;
    double V = 0.5 * dy * dy + p_.B;
    Scalar2 out;
    out.v = (1 - fs.v) * base.v + fs.v * V;
    out.g[1] = (1 - fs.v) * base.d1 + fs.v * dy + fs.d1 * (V - base.v);
    out.h[1][1] = (1 - fs.v) * base.d2 + fs.v * 1.0 + 2 * fs.d1 * (dy - base.d1) +
                  fs.d2 * (V - base.v);
    return out;
  }
  // symmetrize about x2 = 2pi: both stacks are exactly even there
  bool flip = x2 > kTwoPi;
  Scalar2 out = ktilde(flip ? 2 * kTwoPi - x2 : x2, y2);
  if (flip) {
    out.g[0] = -out.g[0];
    out.h[0][1] = -out.h[0][1];
    out.h[1][0] = -out.h[1][0];
  }
  return out;
}

double ModelHamiltonian::value4(const Vec4& z) const {
  return 0.5 * (sqr(z[0]) + sqr(z[2])) + h2(z[1], z[3]).v;
}

Vec4 ModelHamiltonian::grad4(const Vec4& z) const {
  Scalar2 s = h2(z[1], z[3]);
  return {z[0], s.g[0], z[2], s.g[1]};
}

Mat4 ModelHamiltonian::hess4(const Vec4& z) const {
  Scalar2 s = h2(z[1], z[3]);
  Mat4 H{};
  H[0][0] = 1;
  H[2][2] = 1;
  H[1][1] = s.h[0][0];
  H[1][3] = H[3][1] = s.h[0][1];
  H[3][3] = s.h[1][1];
  return H;
}

double ModelHamiltonian::lambda_max(double x2) const {
  if (p_.regime == StackRegime::Upper)
    throw DomainError("lambda_max: lower/appendix stacks only");
  double c = p_.c;
  double y;
  if (p_.regime == StackRegime::Appendix) {
    y = p_.lam3 + std::sqrt(2 * (c - p_.B));
    for (int i = 0; i < 6; ++i) {
      Scalar2 s = h2(0, y);
      y -= (s.v - c) / s.g[1];
    }
    return y;
  }
  y = p_.lam3 + std::sqrt(2 * (c - p_.B + std::cos(0.5 * x2)));
  for (int i = 0; i < 8; ++i) {
    Scalar2 s = interp_k(x2, y);
    y -= (s.v - c) / s.g[1];
  }
  return y;
}

Vec4 ModelHamiltonian::rho(const Vec4& z) {
  return {-z[0], 2 * kTwoPi - z[1], z[2], z[3]};
}

Vec4 ModelHamiltonian::project_sigma(Vec4 z, double tol) const {
  double lvl = level();
  for (int i = 0; i < 60; ++i) {
    double v = value4(z) - lvl;
    if (std::fabs(v) < tol) return z;
    Vec4 g = grad4(z);
    double gn = dot(g, g);
    if (gn < 1e-14) throw DomainError("project_sigma: vanishing gradient");
    z = z - (v / gn) * g;
  }
  throw DomainError("project_sigma: Newton failed to converge");
}

std::vector<Vec4> ModelHamiltonian::sample_sigma(std::mt19937_64& rng, int n) const {
  bool upper = p_.regime == StackRegime::Upper;
  double rmax = std::sqrt(2 * (level() - p_.B + 1.0)) + 0.3;
  double x2lo, x2hi, y2lo, y2hi;
  if (p_.regime == StackRegime::Appendix) {
    x2lo = 0;
    x2hi = kTwoPi;
    y2lo = 0.8;
    y2hi = p_.lam3 + rmax;
  } else if (!upper) {
    x2lo = -3 * p_.eps1;
    x2hi = 2 * kTwoPi + 3 * p_.eps1;
    y2lo = 0.8;
    y2hi = p_.lam3 + rmax;
  } else {
    x2lo = -3 * p_.eps1;
    x2hi = 2 * kTwoPi + 3 * p_.eps1;
    y2lo = p_.lam3 - rmax;
    y2hi = -0.4;
  }
  std::uniform_real_distribution<double> ux(x2lo, x2hi), uy(y2lo, y2hi),
      ur(-rmax, rmax);
  std::vector<Vec4> out;
  int attempts = 0;
  while ((int)out.size() < n && attempts < 1000 * n) {
    ++attempts;
    Vec4 z = {ur(rng), ux(rng), ur(rng), uy(rng)};
    try {
      z = project_sigma(z);
    } catch (const DomainError&) {
      continue;
    }
    if (z[1] < x2lo || z[1] > x2hi || z[3] < y2lo || z[3] > y2hi) continue;
    out.push_back(z);
  }
  if ((int)out.size() < n)
    throw std::runtime_error("sample_sigma: acceptance rate too low");
  return out;
}

CriticalPointReport critical_points(const ModelHamiltonian& m) {
  CriticalPointReport rep;
  const StackParams& p = m.params();
  if (p.regime == StackRegime::Appendix) {
    rep.minimum_line = true;
    rep.points.push_back({0, p.lam3, m.h2(0, p.lam3).v, 0});
    return rep;
  }
  bool upper = p.regime == StackRegime::Upper;
  double x2lo = -3 * p.eps1, x2hi = 2 * kTwoPi + 3 * p.eps1;
  // |y2| = 1 carries the critical circle of the unmodified Kepler factor,
  // outside the stack's window; search strictly above it
  double y2lo = upper ? p.lam3 - 3 : 1.05;
  double y2hi = upper ? -1.05 : p.lam3 + 3;
  const int nx = 40, ny = 30;
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j) {
      double x = x2lo + (x2hi - x2lo) * i / nx;
      double y = y2lo + (y2hi - y2lo) * j / ny;
      ++rep.grid_seeds;
      bool ok = true;
      for (int it = 0; it < 40; ++it) {
        Scalar2 s = m.h2(x, y);
        double det = s.h[0][0] * s.h[1][1] - s.h[0][1] * s.h[1][0];
        if (std::fabs(det) < 1e-14) {
          ok = false;
          break;
        }
        double dx = (s.h[1][1] * s.g[0] - s.h[0][1] * s.g[1]) / det;
        double dy = (-s.h[1][0] * s.g[0] + s.h[0][0] * s.g[1]) / det;
        x -= dx;
        y -= dy;
        if (std::fabs(dx) + std::fabs(dy) < 1e-13) break;
        if (x < x2lo - 1 || x > x2hi + 1 || y < y2lo - 1 || y > y2hi + 1 ||
            (!upper && y < 0.1) || (upper && y > -0.1)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if ((!upper && y <= 1 + 1e-6) || (upper && y >= -1 - 1e-6)) continue;
      Scalar2 s = m.h2(x, y);
      if (std::hypot(s.g[0], s.g[1]) > 1e-9) continue;
      bool dup = false;
      for (const CriticalPoint& cp : rep.points)
        if (std::fabs(cp.x2 - x) < 1e-6 && std::fabs(cp.y2 - y) < 1e-6) dup = true;
      if (dup) continue;
      double tr = s.h[0][0] + s.h[1][1];
      double det = s.h[0][0] * s.h[1][1] - s.h[0][1] * s.h[1][0];
      int idx = det < 0 ? 1 : (tr < 0 ? 2 : 0);
      rep.points.push_back({x, y, s.v, idx});
    }
  std::sort(rep.points.begin(), rep.points.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) { return a.x2 < b.x2; });
  return rep;
}

SignCertificate sign_certificates(const ModelHamiltonian& m, int grid,
                                  int sigma_samples, unsigned seed) {
  SignCertificate cert;
  const StackParams& p = m.params();
  bool upper = p.regime == StackRegime::Upper;
  double lam3 = p.lam3;
  // inner limit of each monotonicity window (circular-orbit side)
  double inner = p.lam1;
  double outer = upper ? lam3 - std::sqrt(2 * (m.level() - p.B + 1.0))
                       : lam3 + std::sqrt(2 * (m.level() - p.B + 1.0));
  double x2lo = p.regime == StackRegime::Appendix ? 0 : 0.0;
  double x2hi = p.regime == StackRegime::Appendix ? kTwoPi : 2 * kTwoPi;
  cert.worst_negative_zone = -1e300;
  cert.worst_positive_zone = 1e300;
  cert.pass = true;
  const double margin = 1e-3;
  for (int i = 0; i <= grid; ++i) {
    double x2 = x2lo + (x2hi - x2lo) * i / grid;
    for (int j = 0; j <= grid; ++j) {
      // inner zone: between the circular orbit and the critical line
      double edge = lam3 + (upper ? margin : -margin);
      double y2 = inner + (edge - inner) * j / grid;
      double d = m.h2(x2, y2).g[1];
      ++cert.checked;
      if (!upper) {
        cert.worst_negative_zone = std::max(cert.worst_negative_zone, d);
        if (d >= 0) {
          cert.pass = false;
          cert.offending = {0, x2, 0, y2};
        }
      } else {
        // y2 runs downward from nu1 toward nu3: H~2_y2 > 0 below nu3
        cert.worst_positive_zone = std::min(cert.worst_positive_zone, d);
        if (d <= 0) {
          cert.pass = false;
          cert.offending = {0, x2, 0, y2};
        }
      }
      // outer zone: beyond the critical line
      double y2b = lam3 + (upper ? -1 : 1) * margin +
                   (outer - lam3 - (upper ? -1 : 1) * margin) * j / grid;
      double db = m.h2(x2, y2b).g[1];
      ++cert.checked;
      if (!upper) {
        cert.worst_positive_zone = std::min(cert.worst_positive_zone, db);
        if (db <= 0) {
          cert.pass = false;
          cert.offending = {0, x2, 0, y2b};
        }
      } else {
        cert.worst_negative_zone = std::max(cert.worst_negative_zone, db);
        if (db >= 0) {
          cert.pass = false;
          cert.offending = {0, x2, 0, y2b};
        }
      }
    }
    double row = std::fabs(m.h2(x2, lam3).g[1]);
    cert.critical_row_max = std::max(cert.critical_row_max, row);
    if (row > 1e-10) cert.pass = false;
  }
  std::mt19937_64 rng(seed);
  auto samples = m.sample_sigma(rng, sigma_samples);
  cert.sigma_min_y2 = 1e300;
  for (const Vec4& z : samples) cert.sigma_min_y2 = std::min(cert.sigma_min_y2, z[3]);
  if (!upper && !(cert.sigma_min_y2 > 1)) cert.pass = false;
  return cert;
}

}  // namespace rkp
