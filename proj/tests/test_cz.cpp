#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rkp/cz_index.hpp"
#include "rkp/scenario.hpp"

using namespace rkp;

namespace {

const ModelHamiltonian& lower_model() {
  static ModelHamiltonian m = ModelHamiltonian::build(scenario_r("lower").params());
  return m;
}

const ContactData& cd() {
  static ContactData c = contact_data(lower_model());
  return c;
}

}  // namespace

TEST_CASE("rotation-number quantization of the index") {
  RotationInterval above{kTwoPi + 0.1, kTwoPi + 0.3, false};
  CHECK(cz_index(above).index == 3);  // interval inside (2pi k, 2pi(k+1))
  RotationInterval across{kTwoPi - 0.1, kTwoPi + 0.1, false};
  CHECK(cz_index(across).index == 2);  // 2pi k interior
  RotationInterval tiny{0.2, 0.4, false};
  CHECK(cz_index(tiny).index == 1);
}

TEST_CASE("binding orbit indices") {
  OrbitRecord p2 = with_cz(cd(), binding_p2(cd()));
  OrbitRecord p3 = with_cz(cd(), binding_p3(cd()));
  OrbitRecord p3p = with_cz(cd(), binding_p3_prime(cd()));
  REQUIRE(p2.cz);
  REQUIRE(p3.cz);
  REQUIRE(p3p.cz);
  CHECK(*p2.cz == 2);
  CHECK(*p3.cz == 3);
  CHECK(*p3p.cz == 3);
  CHECK_FALSE(p2.degenerate);
  CHECK_FALSE(p3.degenerate);
  CHECK_FALSE(p3p.degenerate);
}

TEST_CASE("reduced loop period: 4pi at the bottom, divergent at the separatrix") {
  const ModelHamiltonian& m = lower_model();
  double B = m.params().B;
  // small loops around (0, lam3) oscillate at frequency 1/2
  double near_bottom = reduced_loop_period(m, -1 + B + 1e-3);
  CHECK(near_bottom > 4 * kPi);
  CHECK(near_bottom < 4 * kPi + 0.1);
  // larger loops cross the interpolation zones and can be faster ...
  double mid = reduced_loop_period(m, B);
  CHECK(mid > 0);
  CHECK(mid < 4 * kPi);
  // ... but the period diverges logarithmically at the saddle level 1+B
  double t3 = reduced_loop_period(m, 1 + B - 1e-3);
  double t6 = reduced_loop_period(m, 1 + B - 1e-6);
  CHECK(t3 > 15.0);
  CHECK(t6 > t3 + 5.0);
  CHECK_THROWS_AS(reduced_loop_period(m, -1 + B - 0.1), DomainError);
  CHECK_THROWS_AS(reduced_loop_period(m, 1 + B), DomainError);
}

TEST_CASE("resonant torus orbits close up with the advertised period") {
  OrbitRecord t = torus_orbit(cd(), 5, 2, false);
  CHECK(t.period_H == doctest::Approx(kTwoPi * 5).epsilon(1e-9));
  Vec4 gap = t.samples.front() - t.samples.back();
  CHECK(norm(gap) < 1e-7);
  OrbitRecord tc = with_cz(cd(), t);
  REQUIRE(tc.cz);
  CHECK(*tc.cz >= 3);

  OrbitRecord tm = with_cz(cd(), torus_orbit(cd(), 5, 2, true));
  REQUIRE(tm.cz);
  CHECK(*tm.cz == *tc.cz);
}

TEST_CASE("outer level curve carries index at least three") {
  OrbitRecord p0 = with_cz(cd(), green_orbit(cd()));
  REQUIRE(p0.cz);
  CHECK(*p0.cz >= 3);
}

TEST_CASE("appendix bindings carry an index") {
  ModelHamiltonian ap = ModelHamiltonian::build(scenario_r("appendix").params());
  ContactData cda = contact_data(ap);
  OrbitRecord q1 = with_cz(cda, binding_q1(cda));
  OrbitRecord q2 = with_cz(cda, binding_q2(cda));
  CHECK(q1.cz);
  CHECK(q2.cz);
}
