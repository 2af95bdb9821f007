#include "rkp/cz_index.hpp"

#include <algorithm>
#include <cmath>

#include "rkp/integrate.hpp"

namespace rkp {

namespace {

Vec2 rhs2(const ModelHamiltonian& m, double x2, double y2) {
  Scalar2 s = m.h2(x2, y2);
  return {s.g[1], -s.g[0]};
}

// First return time to the section through z0 perpendicular to the flow,
// oriented along the flow direction.
double return_time(const ModelHamiltonian& m, Vec2 z0, double t_max = 1e4) {
  Vec2 f0 = rhs2(m, z0[0], z0[1]);
  double fn = std::hypot(f0[0], f0[1]);
  if (fn < 1e-12) throw DomainError("return_time: starting at an equilibrium");
  f0[0] /= fn;
  f0[1] /= fn;
  auto u_of = [&](const StateN<2>& z) {
    return (z[0] - z0[0]) * f0[0] + (z[1] - z0[1]) * f0[1];
  };
  auto rhs = [&m](double, const StateN<2>& z) -> StateN<2> {
    Vec2 f = rhs2(m, z[0], z[1]);
    return {f[0], f[1]};
  };
  IntegratorOptions opt;
  opt.rtol = 1e-11;
  opt.atol = 1e-13;
  opt.h_max = 0.05;
  int phase = 0;  // 0: leave +side, 1: on -side, 2: bracketed
  const double delta = 1e-9;
  double t_prev = 0, t_hit_lo = 0;
  StateN<2> z_prev = {z0[0], z0[1]}, z_hit_lo{};
  integrate<2>(rhs, {z0[0], z0[1]}, 0, t_max, opt,
               [&](double t, const StateN<2>& z) {
                 double u = u_of(z);
                 if (phase == 0 && u > delta) phase = 1;
                 else if (phase == 1 && u < -delta) phase = 1000;
                 else if (phase == 1000 && u >= 0) {
                   t_hit_lo = t_prev;
                   z_hit_lo = z_prev;
                   phase = 2;
                   return false;
                 }
                 t_prev = t;
                 z_prev = z;
                 return true;
               });
  if (phase != 2) throw DomainError("return_time: no return before t_max");
  // bisection inside the bracketing step
  double lo = 0, hi = t_prev - t_hit_lo;
  // t_prev holds the last pre-crossing node; re-derive the top of the bracket
  // by stepping from z_hit_lo until u >= 0
  StateN<2> base = z_hit_lo;
  hi = 0.1;
  while (u_of(integrate<2>(rhs, base, 0, hi, opt)) < 0) hi *= 2;
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    if (u_of(integrate<2>(rhs, base, 0, mid, opt)) < 0)
      lo = mid;
    else
      hi = mid;
  }
  return t_hit_lo + 0.5 * (lo + hi);
}

// n+1 uniform samples of the reduced flow over [0, T], plus the analytic
// (x1, y1) circle of radius r and phase 0.
std::vector<Vec4> sample_orbit(const ModelHamiltonian& m, Vec2 start, double T,
                               double r, int n) {
  auto rhs = [&m](double, const StateN<2>& z) -> StateN<2> {
    Vec2 f = rhs2(m, z[0], z[1]);
    return {f[0], f[1]};
  };
  IntegratorOptions opt;
  opt.rtol = 1e-11;
  opt.atol = 1e-13;
  std::vector<Vec4> out;
  out.reserve(n + 1);
  StateN<2> z = {start[0], start[1]};
  out.push_back({r * std::sin(0.0), z[0], r * std::cos(0.0), z[1]});
  for (int i = 1; i <= n; ++i) {
    z = integrate<2>(rhs, z, (i - 1) * T / n, i * T / n, opt);
    double t = i * T / n;
    out.push_back({r * std::sin(t), z[0], r * std::cos(t), z[1]});
  }
  return out;
}

OrbitRecord make_circle_orbit(const ContactData& cd, const std::string& name,
                              double x2, double r, int n) {
  double lam3 = cd.Y.model().params().lam3;
  OrbitRecord o;
  o.name = name;
  o.period_H = kTwoPi;
  o.radius = r;
  o.samples.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    double t = kTwoPi * i / n;
    o.samples.push_back({r * std::sin(t), x2, r * std::cos(t), lam3});
  }
  o.period_Reeb = reeb_period(cd, o.samples, o.period_H);
  return o;
}

}  // namespace

FrameData frame(const ContactData& cd, const Vec4& z) {
  const ModelHamiltonian& m = cd.Y.model();
  Vec4 g = m.grad4(z);
  if (norm(g) < 1e-12) throw DomainError("frame: critical point of the Hamiltonian");
  FrameData fr;
  fr.X1 = {g[3], -g[2], g[1], -g[0]};
  fr.X2 = {g[1], -g[0], -g[3], g[2]};
  fr.X3 = {g[2], g[3], -g[0], -g[1]};
  Mat4 H = m.hess4(z);
  const Vec4* X[3] = {&fr.X1, &fr.X2, &fr.X3};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) acc += (*X[i])[a] * H[a][b] * (*X[j])[b];
      fr.kappa[i][j] = acc;
    }
  Vec4 R = cd.reeb(z);
  fr.X1bar = fr.X1 - cd.lambda_of(z, fr.X1) * R;
  fr.X2bar = fr.X2 - cd.lambda_of(z, fr.X2) * R;
  return fr;
}

RotationInterval rotation_interval(const ContactData& cd, const OrbitRecord& orbit,
                                   int n_init) {
  const ModelHamiltonian& m = cd.Y.model();
  double r = orbit.radius;
  double phi0 = (r > 0)
                    ? std::atan2(orbit.samples.front()[0], orbit.samples.front()[2])
                    : 0.0;
  double T = orbit.period_H;
  Vec2 start = {orbit.samples.front()[1], orbit.samples.front()[3]};

  // integrate (x2, y2) and the fundamental matrix of the kappa-ODE together
  auto rhs = [&](double t, const StateN<6>& s) -> StateN<6> {
    Vec4 z = {r * std::sin(t + phi0), s[0], r * std::cos(t + phi0), s[1]};
    Vec2 f = rhs2(m, s[0], s[1]);
    FrameData fr = frame(cd, z);
    // project the variational flow onto the (X1, X2) plane; the frame vectors
    // all have norm |grad H|, and differentiating the frame along the orbit
    // adds a pure scaling term kap03 that does not rotate directions
    Vec4 g = m.grad4(z);
    double g2 = dot(g, g);
    Mat4 H = m.hess4(z);
    double kap03 = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) kap03 += g[a] * H[a][b] * fr.X3[b];
    double m00 = (-fr.kappa[0][1] - kap03) / g2;
    double m01 = -(fr.kappa[1][1] + fr.kappa[2][2]) / g2;
    double m10 = (fr.kappa[0][0] + fr.kappa[2][2]) / g2;
    double m11 = (fr.kappa[0][1] - kap03) / g2;
    return {f[0], f[1],
            m00 * s[2] + m01 * s[4], m00 * s[3] + m01 * s[5],
            m10 * s[2] + m11 * s[4], m10 * s[3] + m11 * s[5]};
  };
  IntegratorOptions opt;
  opt.rtol = 1e-11;
  opt.atol = 1e-13;
  opt.h_max = 0.05;
  std::vector<std::array<double, 4>> path;
  path.push_back({1, 0, 0, 1});
  integrate<6>(rhs, {start[0], start[1], 1, 0, 0, 1}, 0, T, opt,
               [&](double, const StateN<6>& s) {
                 path.push_back({s[2], s[3], s[4], s[5]});
                 return true;
               });

  auto dtheta = [&path](double phi) {
    double vx = std::cos(phi), vy = std::sin(phi);
    double px = vx, py = vy;  // previous direction
    double total = 0;
    for (size_t i = 1; i < path.size(); ++i) {
      double wx = path[i][0] * vx + path[i][1] * vy;
      double wy = path[i][2] * vx + path[i][3] * vy;
      total += std::atan2(px * wy - py * wx, px * wx + py * wy);
      px = wx;
      py = wy;
    }
    return total;
  };

  double lo = 1e300, hi = -1e300;
  double arg_lo = 0, arg_hi = 0;
  for (int j = 0; j < n_init; ++j) {
    double phi = kPi * j / n_init;
    double d = dtheta(phi);
    if (d < lo) {
      lo = d;
      arg_lo = phi;
    }
    if (d > hi) {
      hi = d;
      arg_hi = phi;
    }
  }
  // golden-section refinement of both extrema
  auto refine = [&](double center, double sign) {
    double a = center - kPi / n_init, b = center + kPi / n_init;
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = sign * dtheta(x1), f2 = sign * dtheta(x2);
    for (int i = 0; i < 60 && b - a > 1e-12; ++i) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = sign * dtheta(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = sign * dtheta(x2);
      }
    }
    return sign * std::min(f1, f2) * 1.0;
  };
  lo = std::min(lo, refine(arg_lo, 1.0));
  hi = std::max(hi, -refine(arg_hi, -1.0));

  RotationInterval I;
  I.lo = lo;
  I.hi = hi;
  if (!(hi - lo < kPi))
    throw std::runtime_error("rotation_interval: width >= pi");
  double d1 = std::fabs(std::remainder(lo, kTwoPi));
  double d2 = std::fabs(std::remainder(hi, kTwoPi));
  I.degenerate = std::min(d1, d2) < 1e-6;
  return I;
}

CzResult cz_index(const RotationInterval& I, double eps) {
  // Endpoints of S^1-family orbits sit exactly on 2 pi Z; their numerical
  // error grows with the orbit period (hyperbolic shear near the separatrix),
  // so quantization snaps with a coarse tolerance while the degeneracy flag
  // keeps the tight one.  All non-degenerate orbits of the stacks keep their
  // endpoints far (> 0.5) from 2 pi Z.
  const double snap_tol = 0.05;
  auto snap = [snap_tol](double x) {
    double s = kTwoPi * std::round(x / kTwoPi);
    return std::fabs(x - s) < snap_tol ? s : x;
  };
  double lo = snap(I.lo) - eps, hi = snap(I.hi) - eps;
  CzResult res;
  res.degenerate = I.degenerate;
  long k_in = (long)std::ceil(lo / kTwoPi);
  if (kTwoPi * k_in > lo && kTwoPi * k_in < hi) {
    res.index = int(2 * k_in);
  } else {
    long k = (long)std::floor(lo / kTwoPi);
    res.index = int(2 * k + 1);
  }
  return res;
}

OrbitRecord with_cz(const ContactData& cd, OrbitRecord orbit, int n_init) {
  RotationInterval I = rotation_interval(cd, orbit, n_init);
  CzResult r = cz_index(I);
  orbit.cz = r.index;
  orbit.degenerate = r.degenerate;
  return orbit;
}

OrbitRecord binding_p2(const ContactData& cd, int n) {
  const StackParams& p = cd.Y.model().params();
  double r2 = std::sqrt(2 * (p.c - 1 - p.B));
  OrbitRecord o = make_circle_orbit(cd, "P2", kTwoPi, r2, n);
  o.symmetric = true;
  return o;
}

OrbitRecord binding_p3(const ContactData& cd, int n) {
  const StackParams& p = cd.Y.model().params();
  double r3 = std::sqrt(2 * (p.c + 1 - p.B));
  return make_circle_orbit(cd, "P3", 0.0, r3, n);
}

OrbitRecord binding_p3_prime(const ContactData& cd, int n) {
  const StackParams& p = cd.Y.model().params();
  double r3 = std::sqrt(2 * (p.c + 1 - p.B));
  return make_circle_orbit(cd, "P3p", 2 * kTwoPi, r3, n);
}

namespace {

OrbitRecord make_line_orbit(const ContactData& cd, const std::string& name,
                            double y2, int n) {
  const ModelHamiltonian& m = cd.Y.model();
  double w = m.h2(0, y2).g[1];  // x2 speed
  OrbitRecord o;
  o.name = name;
  o.period_H = kTwoPi / std::fabs(w);
  o.radius = 0;
  o.samples.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    double t = o.period_H * i / n;
    o.samples.push_back({0, w * t, 0, y2});
  }
  o.period_Reeb = reeb_period(cd, o.samples, o.period_H);
  return o;
}

}  // namespace

OrbitRecord binding_q1(const ContactData& cd, int n) {
  return make_line_orbit(cd, "Q1", cd.Y.model().params().lam1, n);
}

OrbitRecord binding_q2(const ContactData& cd, int n) {
  return make_line_orbit(cd, "Q2", cd.Y.model().lambda_max(0), n);
}

OrbitRecord green_orbit(const ContactData& cd, int n) {
  const ModelHamiltonian& m = cd.Y.model();
  Vec2 start = {0.0, m.lambda_max(0)};
  double T = return_time(m, start);
  OrbitRecord o;
  o.name = "P0";
  o.period_H = T;
  o.radius = 0;
  o.samples = sample_orbit(m, start, T, 0, n);
  o.period_Reeb = reeb_period(cd, o.samples, T);
  return o;
}

double reduced_loop_period(const ModelHamiltonian& m, double value) {
  const StackParams& p = m.params();
  double cosarg = p.B - value;
  if (!(cosarg > -1 && cosarg < 1))
    throw DomainError("reduced_loop_period: value outside (-1+B, 1+B)");
  double x2s = 2 * std::acos(cosarg);
  return return_time(m, {x2s, p.lam3});
}

OrbitRecord torus_orbit(const ContactData& cd, int p, int q, bool mirrored,
                        int n_samples) {
  const ModelHamiltonian& m = cd.Y.model();
  const StackParams& par = m.params();
  double target = kTwoPi * double(p) / double(q);
  if (!(target > 2 * kTwoPi))
    throw DomainError("torus_orbit: require p/q > 2");
  // the loop period diverges at the separatrix level 1+B; scan down from it
  // for a bracket (the period is not monotone across the splice zones)
  double hi = 1 + par.B - 1e-12, lo = hi;
  double Thi = reduced_loop_period(m, hi);
  if (!(Thi > target))
    throw DomainError("torus_orbit: p/q beyond the resolvable period range");
  bool found = false;
  for (int j = 1; j <= 160; ++j) {
    lo = 1 + par.B - 1e-12 * std::pow(1.9e12, j / 160.0);
    double T = reduced_loop_period(m, lo);
    if (T < target) {
      found = true;
      break;
    }
    hi = lo;
  }
  if (!found) throw DomainError("torus_orbit: no loop with the requested period");
  for (int i = 0; i < 90 && hi - lo > 1e-15; ++i) {
    double mid = 0.5 * (lo + hi);
    if (reduced_loop_period(m, mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  double value = 0.5 * (lo + hi);
  double r = std::sqrt(2 * (par.c - value));
  double x2s = 2 * std::acos(par.B - value);
  OrbitRecord o;
  o.name = "torus:" + std::to_string(p) + "/" + std::to_string(q) +
           (mirrored ? ":rho" : "");
  o.period_H = kTwoPi * p;
  o.radius = r;
  o.samples = sample_orbit(m, {x2s, par.lam3}, o.period_H, r, n_samples);
  if (mirrored) {
    // rho conjugates the flow with time reversal; pin the endpoints to the
    // exact image of the start point so the closure error does not double
    Vec4 z0 = ModelHamiltonian::rho(o.samples.front());
    std::reverse(o.samples.begin(), o.samples.end());
    for (Vec4& z : o.samples) z = ModelHamiltonian::rho(z);
    o.samples.front() = z0;
    o.samples.back() = z0;
  }
  o.period_Reeb = reeb_period(cd, o.samples, o.period_H);
  return o;
}

}  // namespace rkp
