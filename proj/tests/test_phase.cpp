#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rkp/phase.hpp"

using namespace rkp;

TEST_CASE("hamiltonian and integrals on the pinned states") {
  // direct circular orbit of radius 1
  CHECK(eval_hamiltonian({1, 0, 0, 1}) == -1.5);
  // vis-viva oracle state
  PhaseState s{2, 0, 0, 0.9};
  IntegralSet is = eval_integrals(s);
  CHECK(is.E == doctest::Approx(0.5 * 0.81 - 0.5).epsilon(1e-15));
  CHECK(is.L == doctest::Approx(1.8).epsilon(1e-15));
  CHECK(is.H == doctest::Approx(is.E - is.L).epsilon(1e-15));
  CHECK(is.real_ecc);
  CHECK(is.e == doctest::Approx(std::sqrt(2 * is.E * is.L * is.L + 1)).epsilon(1e-14));
}

TEST_CASE("vector field matches the canonical equations by finite differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    PhaseState s{u(rng) + 2, u(rng), u(rng), u(rng)};
    Vec4 f = vector_field(s);
    double h = 1e-6;
    auto H = [](Vec4 z) {
      return eval_hamiltonian(PhaseState::from_vec(z));
    };
    Vec4 z = s.vec();
    // (q1,q2,p1,p2): qdot = dH/dp, pdot = -dH/dq
    for (int i = 0; i < 4; ++i) {
      Vec4 zp = z, zm = z;
      zp[i] += h;
      zm[i] -= h;
      double d = (H(zp) - H(zm)) / (2 * h);
      double expect = i < 2 ? -f[i + 2] : f[i - 2];
      CHECK(d == doctest::Approx(expect).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("flow conserves H, E, L and factorizes through the inertial frame") {
  PhaseState s{1.4, 0, 0.2, 0.95};
  Trajectory tr = flow(s, 30.0);
  CHECK(tr.max_defect < 1e-8);
  CHECK(inertial_factorization_defect(s, 30.0) < 1e-6);
}

TEST_CASE("collision detection raises a domain error") {
  PhaseState s{0.4, 0, -1.2, 0};  // radial infall
  CHECK_THROWS_AS(flow(s, 5.0), DomainError);
}

TEST_CASE("reflection is anti-symplectic for the flow direction but preserves H") {
  PhaseState s{1.3, 0.4, -0.1, 0.8};
  CHECK(eval_hamiltonian(reflect(s)) == doctest::Approx(eval_hamiltonian(s)).epsilon(1e-15));
  // conjugates the flow to its time reversal
  Trajectory fwd = flow(s, 2.0);
  PhaseState end = reflect(fwd.states.back());
  Trajectory back = flow(end, 2.0);
  PhaseState again = reflect(back.states.back());
  CHECK(again.q1 == doctest::Approx(s.q1).epsilon(1e-7));
  CHECK(again.q2 == doctest::Approx(s.q2).epsilon(1e-7).scale(1.0));
  CHECK(again.p1 == doctest::Approx(s.p1).epsilon(1e-7).scale(1.0));
  CHECK(again.p2 == doctest::Approx(s.p2).epsilon(1e-7));
}

TEST_CASE("rotation invariance of H") {
  PhaseState s{1.3, 0.4, -0.1, 0.8};
  for (double th : {0.3, 1.7, 4.0})
    CHECK(eval_hamiltonian(rotate_state(s, th)) ==
          doctest::Approx(eval_hamiltonian(s)).epsilon(1e-14));
}
