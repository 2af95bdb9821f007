#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rkp/orbit_catalog.hpp"

using namespace rkp;

namespace {

// independent scan + bisection on 2E(c-E)^2 + 1
std::vector<double> root_oracle(double c) {
  auto poly = [c](double E) { return 2 * E * (c - E) * (c - E) + 1; };
  std::vector<double> roots;
  double prev = poly(-8.0);
  for (double E = -8.0 + 1e-4; E < -1e-5; E += 1e-4) {
    double cur = poly(E);
    if (prev * cur < 0) {
      double lo = E - 1e-4, hi = E;
      for (int i = 0; i < 100; ++i) {
        double mid = 0.5 * (lo + hi);
        (poly(lo) * poly(mid) <= 0 ? hi : lo) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  return roots;
}

}  // namespace

TEST_CASE("circular orbits at c=-2: three labeled roots") {
  CircularOrbitSet set = circular_orbits(-2);
  std::vector<double> oracle = root_oracle(-2);
  REQUIRE(set.roots.size() == 3);
  REQUIRE(oracle.size() == 3);
  for (int i = 0; i < 3; ++i)
    CHECK(set.roots[i].E == doctest::Approx(oracle[i]).epsilon(1e-12));
  CHECK(set.roots[0].label == "retro_b");
  CHECK(set.roots[1].label == "direct_b");
  CHECK(set.roots[2].label == "direct_u");
  CHECK(set.roots[1].E < -0.5);
  CHECK(set.roots[2].E > -0.5);
  for (const CircularRoot& r : set.roots) {
    CHECK(r.L == doctest::Approx(r.E - set.c).epsilon(1e-12).scale(1.0));
    CHECK(std::fabs(std::fabs(r.L) - 1.0 / std::sqrt(-2 * r.E)) < 1e-9);
  }
}

TEST_CASE("single retrograde orbit between the critical value and zero") {
  CircularOrbitSet set = circular_orbits(-1);
  REQUIRE(set.roots.size() == 1);
  CHECK(set.roots[0].label == "retro_u");
  CHECK(set.roots[0].L < 0);
  CHECK(set.roots[0].E == doctest::Approx(root_oracle(-1)[0]).epsilon(1e-12));
}

TEST_CASE("hill radii solve the cubic") {
  HillRadii h = hill_radii(-2);
  CHECK_FALSE(h.connected);
  auto cubic = [](double c, double r) { return r * r * r + 2 * c * r + 2; };
  CHECK(std::fabs(cubic(-2, h.r_b)) < 1e-10);
  CHECK(std::fabs(cubic(-2, h.r_u)) < 1e-10);
  CHECK(h.r_b < 1);
  CHECK(h.r_u > 1);
  CHECK(h.r_b == doctest::Approx(0.5392).epsilon(1e-3));
  CHECK(h.r_u == doctest::Approx(1.6751).epsilon(1e-3));
}

TEST_CASE("torus energies and level membership") {
  CHECK(torus_energy(1, 9) ==
        doctest::Approx(-0.5 * std::pow(1.0 / 9.0, 2.0 / 3.0)).epsilon(1e-14));
  auto rec = torus_on_level(-2, 1, 9);
  REQUIRE(rec);
  CHECK(rec->L == doctest::Approx(rec->E + 2).epsilon(1e-12));
  CHECK(rec->e ==
        doctest::Approx(std::sqrt(2 * rec->E * rec->L * rec->L + 1)).epsilon(1e-10));
  CHECK_FALSE(rec->collision);
}

TEST_CASE("cartesian witnesses carry the advertised integrals") {
  PhaseState s = circular_state(1.3, true);
  IntegralSet is = eval_integrals(s);
  CHECK(is.E == doctest::Approx(-0.5 / 1.3).epsilon(1e-13));
  CHECK(is.L == doctest::Approx(std::sqrt(1.3)).epsilon(1e-13));

  PhaseState w = level_state(-2, -0.12);
  IntegralSet iw = eval_integrals(w);
  CHECK(iw.H == doctest::Approx(-2).epsilon(1e-12));
  CHECK(iw.E == doctest::Approx(-0.12).epsilon(1e-12));
}

TEST_CASE("admissible (E,L) windows hold on sampled orbits") {
  for (const RangeWindow& w : el_range_report(-2, 200)) {
    CHECK(w.pass);
    CHECK(w.E_min_seen >= w.E_lo - 1e-9);
    CHECK(w.E_max_seen <= w.E_hi + 1e-9);
  }
}
