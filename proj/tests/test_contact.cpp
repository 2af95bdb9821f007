#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rkp/cz_index.hpp"
#include "rkp/liouville.hpp"
#include "rkp/scenario.hpp"

using namespace rkp;

namespace {

ModelHamiltonian lower_model() {
  return ModelHamiltonian::build(scenario_r("lower").params());
}
ModelHamiltonian appendix_model() {
  return ModelHamiltonian::build(scenario_r("appendix").params());
}

}  // namespace

TEST_CASE("liouville identity holds for both assembled fields") {
  ModelHamiltonian m = lower_model();
  LiouvilleField Y = LiouvilleField::assemble(m);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ux(0.3, 2 * kTwoPi - 0.3), uy(1.2, 5.2),
      u1(-2.0, 2.0);
  for (int i = 0; i < 40; ++i) {
    Vec4 z{u1(rng), ux(rng), u1(rng), uy(rng)};
    CHECK(liouville_defect(Y, z) < 1e-6);
  }
  ModelHamiltonian ap = appendix_model();
  LiouvilleField Yh = LiouvilleField::assemble(ap);
  for (int i = 0; i < 20; ++i) {
    Vec4 z{u1(rng), ux(rng), u1(rng), uy(rng)};
    CHECK(liouville_defect(Yh, z) < 1e-6);
  }
}

TEST_CASE("spliced field matches the explicit one where the splice is done") {
  ModelHamiltonian m = lower_model();
  LiouvilleField Y = LiouvilleField::assemble(m);
  double e2 = m.params().eps2;
  for (double x2 : {kTwoPi - 0.5 * e2, kTwoPi - 0.1 * e2, kTwoPi}) {
    Vec4 z{0.4, x2, -0.2, 2.8};
    Vec4 a = Y.ytilde(z), b = Y.y1(z);
    for (int i = 0; i < 4; ++i)
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("mirror branch makes Y globally rho-compatible") {
  // rho is anti-symplectic, so pushing Y through rho again solves the same
  // Liouville identity on x2 > 2pi
  ModelHamiltonian m = lower_model();
  LiouvilleField Y = LiouvilleField::assemble(m);
  Vec4 z{0.3, kTwoPi + 1.3, -0.5, 3.4};
  CHECK(liouville_defect(Y, z) < 1e-6);
}

TEST_CASE("transversality certificate and the sabotaged constant") {
  ModelHamiltonian m = lower_model();
  ScanResult good = transversality_scan(m, LiouvilleField::assemble(m), 3000, 0);
  CHECK(good.min_value > 0);

  StackParams bad = scenario_r("lower").params();
  bad.B = -3.7;  // violates the strict interpolation bound
  ModelHamiltonian mb = ModelHamiltonian::build(bad, false);
  ScanResult sab = transversality_scan(mb, LiouvilleField::assemble(mb), 8000, 0);
  CHECK(sab.min_value < good.min_value);
  CHECK(sab.min_value < 1e-2);
}

TEST_CASE("reeb field normalization") {
  ModelHamiltonian m = lower_model();
  ContactData cd = contact_data(m);
  std::mt19937_64 rng(8);
  auto samples = m.sample_sigma(rng, 100);
  for (const Vec4& z : samples) {
    CHECK(cd.pairing(z) > 0);
    Vec4 R = cd.reeb(z);
    CHECK(cd.lambda_of(z, R) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("binding reeb periods at the reference scenario") {
  ModelHamiltonian m = lower_model();
  ContactData cd = contact_data(m);
  OrbitRecord p2 = binding_p2(cd);
  OrbitRecord p3 = binding_p3(cd);
  CHECK(p2.period_Reeb == doctest::Approx(kTwoPi).epsilon(1e-7));
  CHECK(p3.period_Reeb == doctest::Approx(3 * kTwoPi).epsilon(1e-7));

  ModelHamiltonian ap = appendix_model();
  ContactData cda = contact_data(ap);
  OrbitRecord q1 = binding_q1(cda);
  OrbitRecord q2 = binding_q2(cda);
  CHECK(q1.period_Reeb ==
        doctest::Approx(kTwoPi * (ap.params().lam3 - ap.params().lam1)).epsilon(1e-6));
  CHECK(q2.period_Reeb == doctest::Approx(4 * kPi).epsilon(1e-6));
}

TEST_CASE("involution suite: P2 is symmetric, P3 mirrors to P3'") {
  ModelHamiltonian m = lower_model();
  ContactData cd = contact_data(m);
  OrbitRecord p2 = binding_p2(cd);
  InvolutionResult r2 = involution_suite(cd, p2);
  CHECK(r2.symmetric);
  CHECK(r2.fixed_set_hits == 2);
  CHECK(r2.mirrored.period_Reeb == doctest::Approx(p2.period_Reeb).epsilon(1e-10));

  OrbitRecord p3 = binding_p3(cd);
  InvolutionResult r3 = involution_suite(cd, p3);
  CHECK_FALSE(r3.symmetric);
  CHECK(r3.mirrored.period_Reeb == doctest::Approx(p3.period_Reeb).epsilon(1e-10));
}
