#include "rkp/leaf.hpp"

#include <algorithm>
#include <cmath>

#include "rkp/cz_index.hpp"
#include "rkp/integrate.hpp"

namespace rkp {

namespace {

constexpr int kSideIntervals = 32768;
constexpr double kEqTol = 1e-9;

// scalar leaf ODE right-hand side: moving coordinate w along the line, the
// other coordinate frozen
struct LeafOde {
  const ModelHamiltonian* m;
  LeafCase kind;
  double frozen;  // x2 for plane cases, y2 (=Lambda3) for cylinders

  double operator()(double w) const {
    double c = m->level();
    Scalar2 s;
    double grad;
    if (kind == LeafCase::Annulus) {
      s = m->h2(0, w);
      double cK = c - s.v;
      return 4 * kPi * cK / (2 * cK + sqr(s.g[1]));
    }
    if (kind == LeafCase::CylY2L3 || kind == LeafCase::CylY2L3Mirror) {
      s = m->h2(w, frozen);
      grad = s.g[0];
    } else {
      s = m->h2(frozen, w);
      grad = s.g[1];
    }
    double cK = c - s.v;
    return -4 * kPi * cK * grad / (sqr(grad) + 2 * cK);
  }
};

double span_until(const LeafOde& ode, double w0, double eq, double dir) {
  // dir = +1: forward in s; -1: backward
  auto rhs = [&](double, const StateN<1>& y) -> StateN<1> {
    return {dir * ode(y[0])};
  };
  IntegratorOptions opt;
  opt.rtol = 1e-11;
  opt.atol = 1e-13;
  opt.h_max = 0.05;
  double span = 0;
  integrate<1>(rhs, {w0}, 0, 1e4, opt, [&](double t, const StateN<1>& y) {
    span = t;
    return std::fabs(y[0] - eq) >= kEqTol;
  });
  return span;
}

std::vector<double> sample_side(const LeafOde& ode, double w0, double span,
                                double dir, int n) {
  auto rhs = [&](double, const StateN<1>& y) -> StateN<1> {
    return {dir * ode(y[0])};
  };
  IntegratorOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  std::vector<double> out(n + 1);
  out[0] = w0;
  StateN<1> y = {w0};
  for (int i = 1; i <= n; ++i) {
    y = integrate<1>(rhs, y, (i - 1) * span / n, i * span / n, opt);
    out[i] = y[0];
  }
  return out;
}

// cumulative 4th-order integral of f over a uniform grid, out[0] = 0
std::vector<double> cumulative(const std::vector<double>& f, double ds) {
  size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (size_t i = 0; i + 2 < n; i += 2) {
    out[i + 1] = out[i] + ds * (5 * f[i] + 8 * f[i + 1] - f[i + 2]) / 12;
    out[i + 2] = out[i] + ds * (f[i] + 4 * f[i + 1] + f[i + 2]) / 3;
  }
  if (n % 2 == 0 && n >= 3)  // trailing interval
    out[n - 1] = out[n - 2] + ds * (5 * f[n - 1] + 8 * f[n - 2] - f[n - 3]) / 12;
  return out;
}

void fill_columns(Leaf& leaf, const ModelHamiltonian& m) {
  size_t n = leaf.s.size();
  leaf.r.resize(n);
  double c = m.level();
  for (size_t i = 0; i < n; ++i) {
    double K = m.h2(leaf.x2[i], leaf.y2[i]).v;
    leaf.r[i] = std::sqrt(std::max(0.0, 2 * (c - K)));
  }
}

}  // namespace

std::string leaf_case_name(LeafCase c) {
  switch (c) {
    case LeafCase::PlaneX20: return "plane_x2_0";
    case LeafCase::PlaneX22Pi: return "plane_x2_2pi";
    case LeafCase::PlaneX24Pi: return "plane_x2_4pi";
    case LeafCase::CylY2L3: return "cyl_y2_L3";
    case LeafCase::CylY2L3Mirror: return "cyl_y2_L3_mirror";
    case LeafCase::Annulus: return "annulus";
  }
  return "?";
}

Leaf solve_leaf(const ModelHamiltonian& m, LeafCase kind, double init) {
  const StackParams& p = m.params();
  if (kind == LeafCase::Annulus)
    throw DomainError("solve_leaf: use annulus_leaf for the appendix case");
  if (m.regime() != StackRegime::Lower)
    throw DomainError("solve_leaf: lower stack required");
  double lam3 = p.lam3;
  Leaf leaf;
  leaf.kind = kind;
  leaf.init = init;

  LeafOde ode{&m, kind, 0};
  double eq_back, eq_fwd;
  bool plane = kind == LeafCase::PlaneX20 || kind == LeafCase::PlaneX22Pi ||
               kind == LeafCase::PlaneX24Pi;
  if (plane) {
    double X = kind == LeafCase::PlaneX20 ? 0.0
               : kind == LeafCase::PlaneX22Pi ? kTwoPi
                                              : 2 * kTwoPi;
    ode.frozen = X;
    double ymax = m.lambda_max(X);
    if (!(init > p.lam1 + 1e-10 && init < ymax - 1e-10) ||
        std::fabs(init - lam3) < 1e-10)
      throw DomainError("solve_leaf: y2(0) must lie in (Lambda1,Lambda3) or "
                        "(Lambda3,Lambda_max)");
    eq_fwd = lam3;
    eq_back = init < lam3 ? p.lam1 : ymax;
  } else {
    ode.frozen = lam3;
    bool mirror = kind == LeafCase::CylY2L3Mirror;
    double lo = mirror ? kTwoPi : 0.0, hi = mirror ? 2 * kTwoPi : kTwoPi;
    if (!(init > lo + 1e-10 && init < hi - 1e-10))
      throw DomainError("solve_leaf: x2(0) outside the open cylinder window");
    eq_fwd = mirror ? 2 * kTwoPi : 0.0;
    eq_back = mirror ? kTwoPi : kTwoPi;
  }

  double span_b = span_until(ode, init, eq_back, -1.0);
  double span_f = span_until(ode, init, eq_fwd, +1.0);
  std::vector<double> back = sample_side(ode, init, span_b, -1.0, kSideIntervals);
  std::vector<double> fwd = sample_side(ode, init, span_f, +1.0, kSideIntervals);

  int n = 2 * kSideIntervals + 1;
  leaf.s.resize(n);
  leaf.x2.resize(n);
  leaf.y2.resize(n);
  for (int i = 0; i <= kSideIntervals; ++i) {
    leaf.s[i] = -span_b + span_b * i / kSideIntervals;
    double w = back[kSideIntervals - i];
    if (plane) {
      leaf.x2[i] = ode.frozen;
      leaf.y2[i] = w;
    } else {
      leaf.x2[i] = w;
      leaf.y2[i] = ode.frozen;
    }
  }
  for (int i = 1; i <= kSideIntervals; ++i) {
    leaf.s[kSideIntervals + i] = span_f * i / kSideIntervals;
    double w = fwd[i];
    if (plane) {
      leaf.x2[kSideIntervals + i] = ode.frozen;
      leaf.y2[kSideIntervals + i] = w;
    } else {
      leaf.x2[kSideIntervals + i] = w;
      leaf.y2[kSideIntervals + i] = ode.frozen;
    }
  }
  fill_columns(leaf, m);

  // R-component: a' = pi r^2, a(0) = 0, assembled per side
  leaf.a.resize(n);
  {
    std::vector<double> fb(kSideIntervals + 1), ff(kSideIntervals + 1);
    for (int i = 0; i <= kSideIntervals; ++i) {
      fb[i] = kPi * sqr(leaf.r[kSideIntervals - i]);  // walking backward
      ff[i] = kPi * sqr(leaf.r[kSideIntervals + i]);
    }
    auto cb = cumulative(fb, span_b / kSideIntervals);
    auto cf = cumulative(ff, span_f / kSideIntervals);
    for (int i = 0; i <= kSideIntervals; ++i) {
      leaf.a[kSideIntervals - i] = -cb[i];
      leaf.a[kSideIntervals + i] = cf[i];
    }
  }

  double c = m.level();
  auto mass_of = [&](double x2v, double y2v) {
    return kPi * 2 * (c - m.h2(x2v, y2v).v);
  };
  if (plane) {
    double X = ode.frozen;
    leaf.neg_end = {"", 0, mass_of(X, eq_back), true};
    std::string orb = kind == LeafCase::PlaneX20 ? "P3"
                      : kind == LeafCase::PlaneX22Pi ? "P2"
                                                     : "P3p";
    leaf.pos_end = {orb, +1, mass_of(X, eq_fwd), false};
    leaf.energy = leaf.pos_end.mass;
  } else {
    leaf.neg_end = {"P2", -1, mass_of(eq_back, lam3), false};
    leaf.pos_end = {kind == LeafCase::CylY2L3 ? "P3" : "P3p", +1,
                    mass_of(eq_fwd, lam3), false};
    leaf.energy = leaf.pos_end.mass;
  }
  return leaf;
}

Leaf mirror_leaf(const Leaf& leaf) {
  if (leaf.kind == LeafCase::Annulus)
    throw DomainError("mirror_leaf: lower-stack leaves only");
  Leaf out = leaf;
  switch (leaf.kind) {
    case LeafCase::PlaneX20: out.kind = LeafCase::PlaneX24Pi; break;
    case LeafCase::PlaneX24Pi: out.kind = LeafCase::PlaneX20; break;
    case LeafCase::PlaneX22Pi: out.kind = LeafCase::PlaneX22Pi; break;
    case LeafCase::CylY2L3: out.kind = LeafCase::CylY2L3Mirror; break;
    case LeafCase::CylY2L3Mirror: out.kind = LeafCase::CylY2L3; break;
    default: break;
  }
  for (double& x : out.x2) x = 2 * kTwoPi - x;
  auto mirror_name = [](std::string& s) {
    if (s == "P3") s = "P3p";
    else if (s == "P3p") s = "P3";
  };
  mirror_name(out.neg_end.orbit);
  mirror_name(out.pos_end.orbit);
  if (leaf.kind == LeafCase::CylY2L3 || leaf.kind == LeafCase::CylY2L3Mirror)
    out.init = 2 * kTwoPi - leaf.init;
  return out;
}

Leaf annulus_leaf(const ModelHamiltonian& m, double theta) {
  if (m.regime() != StackRegime::Appendix)
    throw DomainError("annulus_leaf: appendix stack required");
  const StackParams& p = m.params();
  Leaf leaf;
  leaf.kind = LeafCase::Annulus;
  leaf.theta = theta;
  leaf.init = p.lam3;
  double ymax = m.lambda_max(0);

  LeafOde ode{&m, LeafCase::Annulus, 0};
  double span_b = span_until(ode, p.lam3, p.lam1, -1.0);
  double span_f = span_until(ode, p.lam3, ymax, +1.0);
  std::vector<double> back = sample_side(ode, p.lam3, span_b, -1.0, kSideIntervals);
  std::vector<double> fwd = sample_side(ode, p.lam3, span_f, +1.0, kSideIntervals);
  int n = 2 * kSideIntervals + 1;
  leaf.s.resize(n);
  leaf.x2.assign(n, 0.0);
  leaf.y2.resize(n);
  for (int i = 0; i <= kSideIntervals; ++i) {
    leaf.s[i] = -span_b + span_b * i / kSideIntervals;
    leaf.y2[i] = back[kSideIntervals - i];
  }
  for (int i = 1; i <= kSideIntervals; ++i) {
    leaf.s[kSideIntervals + i] = span_f * i / kSideIntervals;
    leaf.y2[kSideIntervals + i] = fwd[i];
  }
  fill_columns(leaf, m);

  // R-component: d' = 2 pi (y2 - Lambda3)
  leaf.d.resize(n);
  {
    std::vector<double> fb(kSideIntervals + 1), ff(kSideIntervals + 1);
    for (int i = 0; i <= kSideIntervals; ++i) {
      fb[i] = kTwoPi * (leaf.y2[kSideIntervals - i] - p.lam3);
      ff[i] = kTwoPi * (leaf.y2[kSideIntervals + i] - p.lam3);
    }
    auto cb = cumulative(fb, span_b / kSideIntervals);
    auto cf = cumulative(ff, span_f / kSideIntervals);
    for (int i = 0; i <= kSideIntervals; ++i) {
      leaf.d[kSideIntervals - i] = -cb[i];
      leaf.d[kSideIntervals + i] = cf[i];
    }
  }
  leaf.a = leaf.d;

  double tau_q1 = kTwoPi * (p.lam3 - p.lam1);
  double tau_q2 = kTwoPi * std::sqrt(2 * (p.c - p.B));
  leaf.neg_end = {"Q1", +1, tau_q1, false};
  leaf.pos_end = {"Q2", +1, tau_q2, false};
  leaf.energy = tau_q1 + tau_q2;
  return leaf;
}

LeafAudit leaf_audit(const ContactData& cd, const Leaf& leaf) {
  const ModelHamiltonian& m = cd.Y.model();
  LeafAudit audit;
  size_t n = leaf.s.size();
  if (n < 64 || leaf.s.back() - leaf.s.front() < 1e-6) return audit;  // ok=false
  double c = m.level();
  bool annulus = leaf.kind == LeafCase::Annulus;

  for (size_t i = 0; i < n; ++i) {
    double K = m.h2(leaf.x2[i], leaf.y2[i]).v;
    audit.max_energy_residual = std::max(
        audit.max_energy_residual, std::fabs(0.5 * sqr(leaf.r[i]) + K - c));
  }

  // a'(s) via 5-point central differences per uniform side
  size_t mid = n / 2;
  auto check_side = [&](size_t lo, size_t hi) {
    double ds = leaf.s[lo + 1] - leaf.s[lo];
    for (size_t i = lo + 2; i + 2 <= hi; ++i) {
      double d1 = (leaf.a[i - 2] - 8 * leaf.a[i - 1] + 8 * leaf.a[i + 1] -
                   leaf.a[i + 2]) /
                  (12 * ds);
      double expect = annulus ? kTwoPi * (leaf.y2[i] - m.params().lam3)
                              : kPi * sqr(leaf.r[i]);
      audit.max_aprime_residual =
          std::max(audit.max_aprime_residual,
                   std::fabs(d1 - expect) / (1 + std::fabs(expect)));
    }
  };
  check_side(0, mid);
  check_side(mid, n - 1);

  // pointwise geometry: lambda(u_s), Cauchy-Riemann residual, frame det
  audit.min_frame_det = 1e300;
  for (size_t i = 8; i + 8 < n; i += 32) {
    double x2v = leaf.x2[i], y2v = leaf.y2[i], r = leaf.r[i];
    if (r < 1e-4) continue;  // too close to a zero of the (x1,y1) circle
    Scalar2 K = m.h2(x2v, y2v);
    double xdot, ydot;
    if (annulus) {
      LeafOde ode{&m, LeafCase::Annulus, 0};
      xdot = 0;
      ydot = ode(y2v);
    } else if (leaf.kind == LeafCase::CylY2L3 ||
               leaf.kind == LeafCase::CylY2L3Mirror) {
      LeafOde ode{&m, leaf.kind, m.params().lam3};
      xdot = ode(x2v);
      ydot = 0;
    } else {
      LeafOde ode{&m, leaf.kind, x2v};
      xdot = 0;
      ydot = ode(y2v);
    }
    double rdot = -(K.g[0] * xdot + K.g[1] * ydot) / r;
    for (double t : {0.0, 0.17, 0.35, 0.5, 0.73}) {
      Vec4 z, ut, us;
      if (annulus) {
        double th = leaf.theta;
        z = {r * std::cos(th), kTwoPi * t, r * std::sin(th), y2v};
        ut = {0, kTwoPi, 0, 0};
        us = {rdot * std::cos(th), 0, rdot * std::sin(th), ydot};
      } else {
        double ph = kTwoPi * t;
        z = {r * std::sin(ph), x2v, r * std::cos(ph), y2v};
        ut = {kTwoPi * r * std::cos(ph), 0, -kTwoPi * r * std::sin(ph), 0};
        us = {rdot * std::sin(ph), xdot, rdot * std::cos(ph), ydot};
      }
      audit.max_lambda_us =
          std::max(audit.max_lambda_us, std::fabs(cd.lambda_of(z, us)));
      FrameData fr = frame(cd, z);
      Vec4 R = cd.reeb(z);
      Vec4 put = ut - cd.lambda_of(z, ut) * R;
      Vec4 pus = us - cd.lambda_of(z, us) * R;
      // decompose put in (X1bar, X2bar), apply J X1bar = X2bar
      double g11 = dot(fr.X1bar, fr.X1bar), g12 = dot(fr.X1bar, fr.X2bar),
             g22 = dot(fr.X2bar, fr.X2bar);
      double b1 = dot(put, fr.X1bar), b2 = dot(put, fr.X2bar);
      double det = g11 * g22 - g12 * g12;
      double ca = (b1 * g22 - b2 * g12) / det;
      double cb = (-b1 * g12 + b2 * g11) / det;
      Vec4 Jput = ca * fr.X2bar + (-cb) * fr.X1bar;
      Vec4 res = pus + Jput;
      double scale = norm(pus) + norm(put) + 1e-30;
      audit.max_cr_residual = std::max(audit.max_cr_residual, norm(res) / scale);
      // det of the (x2, y2)-projections of (X2bar, X1bar); positive along leaves
      double fd = fr.X2bar[1] * fr.X1bar[3] - fr.X2bar[3] * fr.X1bar[1];
      audit.min_frame_det = std::min(audit.min_frame_det, fd);
    }
  }
  audit.ok = audit.max_energy_residual < 1e-7 && audit.max_aprime_residual < 1e-7 &&
             audit.max_lambda_us < 1e-7 && audit.max_cr_residual < 1e-7;
  return audit;
}

}  // namespace rkp
