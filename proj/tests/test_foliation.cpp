#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rkp/foliation.hpp"
#include "rkp/scenario.hpp"

using namespace rkp;

TEST_CASE("disc window and boundary radius at the reference window") {
  DiscLeaf d = disc_leaf(-2, -0.1, 0.0);
  CHECK_FALSE(d.retro);
  // oracle: the direct_u root of 2E(c-E)^2+1 from the catalog, window edges
  // (-2E)^(-1/2)
  CircularOrbitSet set = circular_orbits(-2);
  double Eu = set.roots.back().E;
  CHECK(d.y2_lo == doctest::Approx(1.0 / std::sqrt(-2 * Eu)).epsilon(1e-12));
  CHECK(d.y2_hi == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK(d.y2_lo == doctest::Approx(1.854).epsilon(1e-3));
  double r_edge = std::sqrt(2 * (-2 + 0.1 + std::sqrt(5.0)));
  CHECK(d.r_max == doctest::Approx(r_edge).epsilon(1e-12));
  CHECK(d.r_max == doctest::Approx(0.820).epsilon(2e-3));
  CHECK(d.radius(d.y2_lo) < 1e-7);
  CHECK(d.min_xdot > 0.1);
  CHECK(d.y2_of_radius(d.radius(2.0)) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("closed-form return map on the pinned example") {
  DiscLeaf d = disc_leaf(-2, -0.1, 0.0);
  ReturnMapResult rm = return_map(d, 0.1, 0.0, 2.0);
  CHECK(rm.T_ret == doctest::Approx(kTwoPi * 8.0 / 7.0).epsilon(1e-14));
  CHECK(rm.y2 == 2.0);
  CHECK(rm.rotation == doctest::Approx(-kTwoPi / 7.0).epsilon(1e-12));
  CHECK(std::hypot(rm.x1_out, rm.y1_out) == doctest::Approx(0.1).epsilon(1e-13));
  CHECK(rm.x1_out == doctest::Approx(0.1 * std::cos(kTwoPi / 7.0)).epsilon(1e-12));
  CHECK(rm.y1_out == doctest::Approx(-0.1 * std::sin(kTwoPi / 7.0)).epsilon(1e-12));

  ReturnMapResult fix = return_map(d, 0.0, 0.0, d.y2_lo);
  CHECK(fix.x1_out == 0.0);
  CHECK(fix.T_ret == doctest::Approx(kTwoPi * std::pow(d.y2_lo, 3) /
                                     (std::pow(d.y2_lo, 3) - 1)).epsilon(1e-12));

  CHECK_THROWS_AS(return_map(d, 1.0, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(return_map(d, 0.0, 0.0, 3.0), DomainError);
}

TEST_CASE("closed form agrees with the integrated cartesian flow") {
  DiscLeaf d = disc_leaf(-2, -0.1, 0.4);
  for (double y2 : {1.9, 2.1}) {
    ReturnMapResult rm = return_map(d, 0.2, -0.1, y2);
    CHECK(return_map_flow_error(d, rm) < 1e-8);
  }
}

TEST_CASE("retrograde disc: mirrored window, never resonant") {
  DiscLeaf d = disc_leaf(-1, -1.0, 0.0);
  CHECK(d.retro);
  CHECK(d.y2_hi < 0);
  CHECK(d.y2_lo < d.y2_hi);
  CHECK(d.min_xdot > 1.0);
  std::vector<FixedPoint> fps = fixed_points(-1, -1.0);
  REQUIRE(fps.size() == 1);
  CHECK(fps[0].origin);
  ReturnMapResult rm = return_map(d, 0.05, 0.0, 0.5 * (d.y2_lo + d.y2_hi));
  CHECK(rm.T_ret > 0);
  CHECK(rm.T_ret < kTwoPi);
  CHECK(return_map_flow_error(d, rm) < 1e-8);
}

TEST_CASE("fixed points: unique at shipped windows, resonant in the synthetic one") {
  for (double E0 : {-0.1, -0.12}) {
    std::vector<FixedPoint> fps = fixed_points(-2, E0);
    REQUIRE(fps.size() == 1);
    CHECK(fps[0].origin);
  }
  DiscLeaf d = disc_leaf(-2, -0.1, 0.0);
  std::vector<FixedPoint> syn = fixed_points_window(d, 1.2, 1.3);
  REQUIRE(syn.size() == 2);
  CHECK(syn[0].origin);
  CHECK(syn[1].k == 1);
  CHECK(syn[1].l == 2);
  CHECK(syn[1].y2 == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
}

TEST_CASE("crossing counts: closed form and integration") {
  CHECK(crossing_count(-2, 1, 9) == 8);
  CHECK(crossing_count(-2, 1, 8) == 7);
  CHECK(crossing_count_integrated(-2, 1, 8, 0.4) == 7);
  CHECK(crossing_count_integrated(-2, 1, 9, 2.0) == 8);
  CHECK_THROWS_AS(crossing_count(-2, 1, 2), DomainError);  // not on the level
}

TEST_CASE("foliation report assembly and rho closure") {
  ModelHamiltonian m = ModelHamiltonian::build(scenario_r("lower").params());
  ContactData cd = contact_data(m);
  std::vector<OrbitRecord> binding = {with_cz(cd, binding_p2(cd)),
                                      with_cz(cd, binding_p3(cd)),
                                      with_cz(cd, binding_p3_prime(cd))};
  const StackParams& p = m.params();
  Leaf plane0 = solve_leaf(m, LeafCase::PlaneX20, 0.5 * (p.lam1 + p.lam3));
  Leaf cyl = solve_leaf(m, LeafCase::CylY2L3, kPi);
  std::vector<Leaf> leaves = {plane0, cyl, mirror_leaf(plane0), mirror_leaf(cyl),
                              solve_leaf(m, LeafCase::PlaneX22Pi,
                                         0.5 * (p.lam1 + p.lam3))};
  FoliationReport rep = assemble_report(cd, binding, leaves);
  CHECK(rep.regime == "lower");
  CHECK(rep.binding.size() == 3);
  CHECK(rep.rho_closed);
  CHECK(rep.min_margin > 0);

  OrbitRecord naked = binding_p2(cd);  // no cz attached
  CHECK_THROWS_AS(assemble_report(cd, {naked}, leaves), DomainError);

  // dropping the mirror plane breaks closure
  FoliationReport broken = assemble_report(cd, binding, {plane0, cyl});
  CHECK_FALSE(broken.rho_closed);
}

TEST_CASE("annulus coverage of the appendix level") {
  ModelHamiltonian m = ModelHamiltonian::build(scenario_r("appendix").params());
  Leaf ann = annulus_leaf(m, 0.0);
  AnnulusCoverage cov = annulus_coverage(m, ann, 500, 3);
  CHECK(cov.ok);
  CHECK(cov.assigned == 500);
  CHECK(cov.max_residual < 1e-8);
}
