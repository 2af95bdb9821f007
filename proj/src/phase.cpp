#include "rkp/phase.hpp"

#include <algorithm>

#include "rkp/integrate.hpp"

namespace rkp {

namespace {

void check_floor(const PhaseState& s) {
  double r = s.r();
  if (r < kCollisionFloor)
    throw DomainError("collision floor violated: |q| = " + std::to_string(r));
}

Vec4 rotating_rhs(const Vec4& z) {
  double q1 = z[0], q2 = z[1], p1 = z[2], p2 = z[3];
  double r2 = q1 * q1 + q2 * q2;
  double r3 = r2 * std::sqrt(r2);
  return {p1 + q2, p2 - q1, -q1 / r3 + p2, -q2 / r3 - p1};
}

Vec4 kepler_rhs(const Vec4& z) {
  double q1 = z[0], q2 = z[1], p1 = z[2], p2 = z[3];
  double r2 = q1 * q1 + q2 * q2;
  double r3 = r2 * std::sqrt(r2);
  return {p1, p2, -q1 / r3, -q2 / r3};
}

}  // namespace

double eval_hamiltonian(const PhaseState& s) {
  check_floor(s);
  double p2n = s.p1 * s.p1 + s.p2 * s.p2;
  return 0.5 * p2n - 1.0 / s.r() - s.p2 * s.q1 + s.p1 * s.q2;
}

IntegralSet eval_integrals(const PhaseState& s) {
  check_floor(s);
  IntegralSet out;
  double p2n = s.p1 * s.p1 + s.p2 * s.p2;
  out.E = 0.5 * p2n - 1.0 / s.r();
  out.L = s.q1 * s.p2 - s.q2 * s.p1;
  out.H = out.E - out.L;
  double e2 = 2.0 * out.E * out.L * out.L + 1.0;
  out.real_ecc = e2 >= 0;
  out.e = out.real_ecc ? std::sqrt(e2) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

Vec4 vector_field(const PhaseState& s) {
  check_floor(s);
  return rotating_rhs(s.vec());
}

Trajectory flow(const PhaseState& s, double t_final, double rtol, double atol) {
  check_floor(s);
  Trajectory traj;
  IntegralSet i0 = eval_integrals(s);
  traj.times.push_back(0);
  traj.states.push_back(s);
  IntegratorOptions opt;
  opt.rtol = rtol;
  opt.atol = atol;
  StepReport rep;
  bool collided = false;
  double t_coll = 0;
  integrate<4>(
      [](double, const Vec4& z) { return rotating_rhs(z); }, s.vec(), 0, t_final, opt,
      [&](double t, const Vec4& z) {
        PhaseState st = PhaseState::from_vec(z);
        if (st.r() < kCollisionFloor) {
          collided = true;
          t_coll = t;
          return false;
        }
        IntegralSet ii = eval_integrals(st);
        traj.max_defect = std::max({traj.max_defect, std::fabs(ii.H - i0.H),
                                    std::fabs(ii.E - i0.E), std::fabs(ii.L - i0.L)});
        traj.times.push_back(t);
        traj.states.push_back(st);
        return true;
      },
      &rep);
  if (collided)
    throw DomainError("trajectory crossed the collision floor near t = " +
                      std::to_string(t_coll));
  traj.steps = rep.n_accepted;
  return traj;
}

PhaseState rotate_state(const PhaseState& s, double theta) {
  double c = std::cos(theta), sn = std::sin(theta);
  return {c * s.q1 - sn * s.q2, sn * s.q1 + c * s.q2,
          c * s.p1 - sn * s.p2, sn * s.p1 + c * s.p2};
}

double inertial_factorization_defect(const PhaseState& s, double t_final,
                                     double rtol, double atol) {
  check_floor(s);
  IntegratorOptions opt;
  opt.rtol = rtol;
  opt.atol = atol;

  // Sample both flows on a fixed comparison grid.
  const int n = 200;
  std::vector<Vec4> rot(n + 1), kep(n + 1);
  rot[0] = kep[0] = s.vec();
  {
    Vec4 z = s.vec();
    for (int i = 1; i <= n; ++i) {
      z = integrate<4>([](double, const Vec4& y) { return rotating_rhs(y); }, z,
                       (i - 1) * t_final / n, i * t_final / n, opt);
      rot[i] = z;
    }
    z = s.vec();
    for (int i = 1; i <= n; ++i) {
      z = integrate<4>([](double, const Vec4& y) { return kepler_rhs(y); }, z,
                       (i - 1) * t_final / n, i * t_final / n, opt);
      kep[i] = z;
    }
  }
  double defect = 0;
  for (int i = 0; i <= n; ++i) {
    double t = i * t_final / n;
    // gamma(t) = exp(-it) alpha(t): rotate the inertial solution by -t
    PhaseState expect = rotate_state(PhaseState::from_vec(kep[i]), -t);
    Vec4 d = rot[i] - expect.vec();
    defect = std::max(defect, norm(d));
  }
  return defect;
}

}  // namespace rkp
