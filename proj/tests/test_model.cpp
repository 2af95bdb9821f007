#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rkp/model_ham.hpp"
#include "rkp/scenario.hpp"

using namespace rkp;

namespace {

ModelHamiltonian reference(StackRegime regime = StackRegime::Lower) {
  ScenarioConfig cfg = scenario_r(regime == StackRegime::Appendix ? "appendix"
                                  : regime == StackRegime::Upper  ? "upper"
                                                                  : "lower");
  return ModelHamiltonian::build(cfg.params());
}

}  // namespace

TEST_CASE("interpolation-constant bound and validation") {
  StackParams p = scenario_r("lower").params();
  double bound = b_bound(p);
  CHECK(bound == doctest::Approx(-3.721).epsilon(5e-3));
  CHECK(p.B < bound);
  StackParams bad = p;
  bad.B = bound + 0.01;
  CHECK_THROWS_WITH_AS(ModelHamiltonian::build(bad), doctest::Contains("bound"),
                       DomainError);
  ModelHamiltonian loose = ModelHamiltonian::build(bad, false);
  CHECK(loose.params().B == bad.B);
}

TEST_CASE("critical points, values and morse indices at the reference scenario") {
  ModelHamiltonian m = reference();
  CriticalPointReport cp = critical_points(m);
  REQUIRE(cp.points.size() == 3);
  double x2s[3] = {0, kTwoPi, 2 * kTwoPi};
  double vals[3] = {-5, -3, -5};
  int morse[3] = {0, 1, 0};
  for (int i = 0; i < 3; ++i) {
    CHECK(cp.points[i].x2 == doctest::Approx(x2s[i]).epsilon(1e-9).scale(1.0));
    CHECK(cp.points[i].y2 == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(cp.points[i].value == doctest::Approx(vals[i]).epsilon(1e-11));
    CHECK(cp.points[i].morse_index == morse[i]);
  }
}

TEST_CASE("spliced hamiltonian is symmetric about x2 = 2pi and rho-invariant") {
  ModelHamiltonian m = reference();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(-0.5, 2 * kTwoPi + 0.5), uy(0.9, 5.5),
      u1(-2.5, 2.5);
  for (int i = 0; i < 200; ++i) {
    double x2 = ux(rng), y2 = uy(rng);
    CHECK(m.h2(x2, y2).v == doctest::Approx(m.h2(2 * kTwoPi - x2, y2).v)
                                .epsilon(1e-12).scale(1.0));
    Vec4 z{u1(rng), x2, u1(rng), y2};
    CHECK(m.value4(ModelHamiltonian::rho(z)) ==
          doctest::Approx(m.value4(z)).epsilon(1e-12).scale(1.0));
    Vec4 zz = ModelHamiltonian::rho(ModelHamiltonian::rho(z));
    for (int a = 0; a < 4; ++a) CHECK(zz[a] == doctest::Approx(z[a]).scale(1.0));
  }
}

TEST_CASE("gradient and hessian match finite differences") {
  ModelHamiltonian m = reference();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ux(0.2, 2 * kTwoPi - 0.2), uy(1.1, 5.0),
      u1(-2.0, 2.0);
  for (int i = 0; i < 60; ++i) {
    Vec4 z{u1(rng), ux(rng), u1(rng), uy(rng)};
    Vec4 g = m.grad4(z);
    Mat4 H = m.hess4(z);
    double h = 1e-5;
    for (int a = 0; a < 4; ++a) {
      Vec4 zp = z, zm = z;
      zp[a] += h;
      zm[a] -= h;
      double fd = (m.value4(zp) - m.value4(zm)) / (2 * h);
      CHECK(g[a] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
      Vec4 gp = m.grad4(zp), gm = m.grad4(zm);
      for (int b = 0; b < 4; ++b)
        CHECK(H[a][b] == doctest::Approx((gp[b] - gm[b]) / (2 * h))
                             .epsilon(1e-4).scale(1.0));
    }
  }
}

TEST_CASE("closed-form outer roots") {
  ModelHamiltonian m = reference();
  const StackParams& p = m.params();
  CHECK(m.lambda_max(0) ==
        doctest::Approx(p.lam3 + std::sqrt(2 * (p.c - p.B + 1))).epsilon(1e-9));
  CHECK(std::fabs(m.h2(0, m.lambda_max(0)).v - p.c) < 1e-9);

  ModelHamiltonian ap = reference(StackRegime::Appendix);
  CHECK(ap.lambda_max(0) ==
        doctest::Approx(p.lam3 + std::sqrt(2 * (p.c - p.B))).epsilon(1e-9));
  CHECK(ap.lambda_max(0) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("appendix stack is x2-free with a line of minima") {
  ModelHamiltonian ap = reference(StackRegime::Appendix);
  CHECK(ap.h2(0.3, 2.0).v == doctest::Approx(ap.h2(5.0, 2.0).v).epsilon(1e-14));
  CriticalPointReport cp = critical_points(ap);
  CHECK(cp.minimum_line);
}

TEST_CASE("upper stack builds and mirrors the level") {
  ModelHamiltonian up = reference(StackRegime::Upper);
  CHECK(up.level() == doctest::Approx(-up.params().c));
  Vec4 z{0.1, 1.0, -0.2, up.params().lam3};
  Vec4 g = up.grad4(z);
  double h = 1e-5;
  Vec4 zp = z, zm = z;
  zp[3] += h;
  zm[3] -= h;
  CHECK(g[3] == doctest::Approx((up.value4(zp) - up.value4(zm)) / (2 * h))
                    .epsilon(1e-5).scale(1.0));
}

TEST_CASE("sigma samples lie on the level with y2 above one") {
  ModelHamiltonian m = reference();
  std::mt19937_64 rng(9);
  auto samples = m.sample_sigma(rng, 500);
  REQUIRE(samples.size() == 500);
  for (const Vec4& z : samples) {
    CHECK(std::fabs(m.value4(z) - m.level()) < 1e-8);
    CHECK(z[3] > 1.0);
  }
}

TEST_CASE("sign certificates pass at the reference scenario") {
  ModelHamiltonian m = reference();
  SignCertificate sc = sign_certificates(m, 128, 500, 1);
  CHECK(sc.pass);
  CHECK(sc.worst_negative_zone < 0);
  CHECK(sc.worst_positive_zone > 0);
  CHECK(sc.critical_row_max < 1e-8);
  CHECK(sc.sigma_min_y2 > 1);
}
