#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "rkp/leaf.hpp"
#include "rkp/scenario.hpp"

using namespace rkp;

namespace {

const ModelHamiltonian& lower_model() {
  static ModelHamiltonian m = ModelHamiltonian::build(scenario_r("lower").params());
  return m;
}

const ModelHamiltonian& appendix_model() {
  static ModelHamiltonian m =
      ModelHamiltonian::build(scenario_r("appendix").params());
  return m;
}

}  // namespace

TEST_CASE("plane leaf at x2=0: monotone profile, endpoints, energy") {
  const ModelHamiltonian& m = lower_model();
  const StackParams& p = m.params();
  Leaf leaf = solve_leaf(m, LeafCase::PlaneX20, 0.5 * (p.lam1 + p.lam3));
  CHECK(std::is_sorted(leaf.y2.begin(), leaf.y2.end()));
  CHECK(std::fabs(leaf.y2.front() - p.lam1) < 1e-6);
  CHECK(std::fabs(leaf.y2.back() - p.lam3) < 1e-6);
  CHECK(leaf.energy == doctest::Approx(6 * kPi).epsilon(1e-9));
  CHECK(leaf.neg_end.removable);
  CHECK(leaf.neg_end.mass < 1e-6);
  CHECK(leaf.pos_end.orbit == "P3");
  CHECK(leaf.pos_end.sign == 1);
  // outer branch falls back to the same orbit
  Leaf outer = solve_leaf(m, LeafCase::PlaneX20, p.lam3 + 0.8);
  CHECK(outer.pos_end.orbit == "P3");
  CHECK(std::is_sorted(outer.y2.rbegin(), outer.y2.rend()));
  CHECK(outer.energy == doctest::Approx(6 * kPi).epsilon(1e-9));
}

TEST_CASE("middle plane has vanishing mass at the removable end") {
  const ModelHamiltonian& m = lower_model();
  const StackParams& p = m.params();
  Leaf leaf = solve_leaf(m, LeafCase::PlaneX22Pi, 0.5 * (p.lam1 + p.lam3));
  CHECK(leaf.energy == doctest::Approx(2 * kPi).epsilon(1e-9));
  CHECK(leaf.pos_end.orbit == "P2");
  CHECK(leaf.neg_end.removable);
  CHECK(leaf.neg_end.mass < 1e-6);
}

TEST_CASE("cylinder connects P2 to P3 with masses (2pi, 6pi)") {
  const ModelHamiltonian& m = lower_model();
  Leaf leaf = solve_leaf(m, LeafCase::CylY2L3, kPi);
  CHECK(leaf.neg_end.orbit == "P2");
  CHECK(leaf.neg_end.sign == -1);
  CHECK(leaf.pos_end.orbit == "P3");
  CHECK(leaf.pos_end.sign == 1);
  CHECK(leaf.neg_end.mass == doctest::Approx(2 * kPi).epsilon(1e-9));
  CHECK(leaf.pos_end.mass == doctest::Approx(6 * kPi).epsilon(1e-9));
  CHECK(leaf.r.front() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(leaf.r.back() == doctest::Approx(std::sqrt(6.0)).epsilon(1e-6));
  CHECK(std::is_sorted(leaf.x2.rbegin(), leaf.x2.rend()));
}

TEST_CASE("leaf audits pass the residual thresholds") {
  const ModelHamiltonian& m = lower_model();
  const StackParams& p = m.params();
  ContactData cd = contact_data(m);
  for (Leaf leaf : {solve_leaf(m, LeafCase::PlaneX20, 0.5 * (p.lam1 + p.lam3)),
                    solve_leaf(m, LeafCase::CylY2L3, kPi)}) {
    LeafAudit a = leaf_audit(cd, leaf);
    CHECK(a.ok);
    CHECK(a.max_energy_residual < 1e-7);
    CHECK(a.max_aprime_residual < 1e-7);
    CHECK(a.max_lambda_us < 1e-7);
    CHECK(a.max_cr_residual < 1e-7);
    CHECK(a.min_frame_det > 0);
  }
}

TEST_CASE("mirror is a grid-wise involution") {
  const ModelHamiltonian& m = lower_model();
  const StackParams& p = m.params();
  Leaf leaf = solve_leaf(m, LeafCase::PlaneX20, 0.5 * (p.lam1 + p.lam3));
  Leaf mir = mirror_leaf(leaf);
  CHECK(mir.kind == LeafCase::PlaneX24Pi);
  CHECK(mir.pos_end.orbit == "P3p");
  Leaf back = mirror_leaf(mir);
  CHECK(back.kind == leaf.kind);
  CHECK(back.s == leaf.s);
  CHECK(back.a == leaf.a);
  CHECK(back.x2 == leaf.x2);
  CHECK(back.y2 == leaf.y2);

  Leaf cyl = solve_leaf(m, LeafCase::CylY2L3, kPi);
  Leaf cm = mirror_leaf(cyl);
  CHECK(cm.kind == LeafCase::CylY2L3Mirror);
  CHECK(cm.pos_end.orbit == "P3p");
  CHECK(cm.neg_end.orbit == "P2");
}

TEST_CASE("annulus leaf: unimodal radius and both punctures positive") {
  const ModelHamiltonian& m = appendix_model();
  const StackParams& p = m.params();
  ContactData cd = contact_data(m);
  Leaf ann = annulus_leaf(m, 0.3);
  size_t peak = std::max_element(ann.r.begin(), ann.r.end()) - ann.r.begin();
  CHECK(std::is_sorted(ann.r.begin(), ann.r.begin() + peak + 1));
  CHECK(std::is_sorted(ann.r.rbegin(), ann.r.rend() - peak));
  CHECK(ann.r[peak] == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(ann.y2[peak] == doctest::Approx(p.lam3).epsilon(1e-7));
  CHECK(ann.neg_end.orbit == "Q1");
  CHECK(ann.pos_end.orbit == "Q2");
  CHECK(ann.neg_end.sign == 1);
  CHECK(ann.pos_end.sign == 1);
  CHECK(ann.energy ==
        doctest::Approx(kTwoPi * (p.lam3 - p.lam1) + 4 * kPi).epsilon(1e-9));
  // d vanishes exactly at the waist and grows in both directions
  double dmin = *std::min_element(ann.d.begin(), ann.d.end());
  CHECK(dmin == doctest::Approx(0.0).scale(1.0));
  CHECK(std::fabs(dmin) < 1e-10);
  LeafAudit a = leaf_audit(cd, ann);
  CHECK(a.ok);
}

TEST_CASE("boundary initial data is rejected") {
  const ModelHamiltonian& m = lower_model();
  const StackParams& p = m.params();
  CHECK_THROWS_AS(solve_leaf(m, LeafCase::PlaneX20, p.lam3), DomainError);
  CHECK_THROWS_AS(solve_leaf(m, LeafCase::PlaneX20, p.lam1), DomainError);
  CHECK_THROWS_AS(solve_leaf(m, LeafCase::CylY2L3, 0.0), DomainError);
  CHECK_THROWS_AS(solve_leaf(m, LeafCase::CylY2L3, kTwoPi), DomainError);
  CHECK_THROWS_AS(solve_leaf(m, LeafCase::Annulus, 2.0), DomainError);
  CHECK_THROWS_AS(annulus_leaf(m, 0.0), DomainError);  // wrong regime
}
