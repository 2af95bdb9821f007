#include "rkp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "rkp/cz_index.hpp"
#include "rkp/elements.hpp"
#include "rkp/foliation.hpp"
#include "rkp/io.hpp"
#include "rkp/leaf.hpp"
#include "rkp/liouville.hpp"
#include "rkp/orbit_catalog.hpp"
#include "rkp/phase.hpp"

namespace rkp {

namespace {

PhaseState random_bound_state(std::mt19937_64& rng, double e_lo, double e_hi) {
  std::uniform_real_distribution<double> ua(0.8, 2.2), ue(e_lo, e_hi),
      uth(0.0, kTwoPi), uu(0.0, 1.0);
  double a = ua(rng), e = ue(rng), th = uth(rng);
  bool direct = uu(rng) < 0.5;
  double rp = a * (1 - e);
  double vp = std::sqrt(2.0 / rp - 1.0 / a);
  double s = direct ? 1.0 : -1.0;
  return {rp * std::cos(th), rp * std::sin(th), -s * vp * std::sin(th),
          s * vp * std::cos(th)};
}

PhaseState random_interior_state(std::mt19937_64& rng) {
  // generic point through the Poincare chart, eccentricity well inside (0,1)
  std::uniform_real_distribution<double> uK(0.9, 1.4), ue(0.05, 0.8),
      uth(0.0, kTwoPi);
  double K = uK(rng), e = ue(rng), phase = uth(rng);
  double r = std::sqrt(2 * K * (1 - std::sqrt(1 - e * e)));
  PoincareState ps;
  ps.x1 = r * std::sin(phase);
  ps.x2 = uth(rng);
  ps.y1 = r * std::cos(phase);
  ps.y2 = K;
  return poincare_inverse(ps);
}

// independent bisection oracle for 2E(c-E)^2 + 1 = 0
std::vector<double> circular_root_oracle(double c) {
  auto poly = [c](double E) { return 2 * E * sqr(c - E) + 1; };
  std::vector<double> roots;
  double prev = poly(-8.0);
  for (double E = -8.0 + 1e-3; E < -1e-4; E += 1e-3) {
    double cur = poly(E);
    if (prev * cur < 0) {
      double lo = E - 1e-3, hi = E;
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

std::vector<std::pair<int, int>> torus_pq_list(int want) {
  std::vector<std::pair<int, int>> out;
  for (int q = 1; q <= 4 && (int)out.size() < want; ++q)
    for (int p = 2 * q + 1; (int)out.size() < want && p <= 8 * q; ++p)
      if (std::gcd(p, q) == 1) out.emplace_back(p, q);
  return out;
}

CriterionResult c1_critical_value() {
  CriterionResult r{1, "critical value of the effective potential", false, ""};
  double lo = 0.2, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    double m1 = lo + (hi - lo) * 0.381966011250105,
           m2 = hi - (hi - lo) * 0.381966011250105;
    (effective_f(m1) < effective_f(m2) ? lo : hi) = (effective_f(m1) < effective_f(m2) ? m1 : m2);
  }
  double rstar = 0.5 * (lo + hi);
  // golden section stalls at sqrt(eps) on the flat maximum; polish on f'
  for (int i = 0; i < 5; ++i) {
    double d1 = 1.0 / sqr(rstar) - rstar, d2 = -2.0 / (sqr(rstar) * rstar) - 1.0;
    rstar -= d1 / d2;
  }
  double fstar = effective_f(rstar);
  double h = eval_hamiltonian({1, 0, 0, 1});
  r.pass = std::fabs(rstar - 1) < 1e-10 && std::fabs(fstar + 1.5) < 1e-10 &&
           std::fabs(h + 1.5) < 1e-14;
  r.detail = "r*=" + fmt17(rstar) + " f*=" + fmt17(fstar) + " H(circ)=" + fmt17(h);
  return r;
}

CriterionResult c2_conservation(unsigned seed) {
  CriterionResult r{2, "conservation and inertial factorization", false, ""};
  std::mt19937_64 rng(seed + 2);
  double worst_drift = 0, worst_fact = 0;
  for (int i = 0; i < 1000; ++i) {
    PhaseState s = random_bound_state(rng, 0.0, 0.7);
    Trajectory tr = flow(s, 50.0, 1e-10, 1e-12);
    worst_drift = std::max(worst_drift, tr.max_defect);
    worst_fact = std::max(worst_fact, inertial_factorization_defect(s, 50.0));
  }
  r.pass = worst_drift < 1e-7 && worst_fact < 1e-6;
  r.detail = "max drift=" + fmt17(worst_drift) + " max factorization defect=" +
             fmt17(worst_fact);
  return r;
}

CriterionResult c3_symplecticity(unsigned seed) {
  CriterionResult r{3, "symplecticity of the Poincare map", false, ""};
  std::mt19937_64 rng(seed + 3);
  double worst = 0;
  int control_hits = 0;
  for (int i = 0; i < 1000; ++i) {
    PhaseState s = random_interior_state(rng);
    worst = std::max(worst, symplecticity_defect(MapVariant::Poincare, s));
    if (symplecticity_defect(MapVariant::DelaunayTrueAnomaly, s) > 1e-2)
      ++control_hits;
  }
  r.pass = worst < 1e-6 && control_hits >= 900;
  r.detail = "max defect=" + fmt17(worst) +
             " negative-control hits=" + std::to_string(control_hits) + "/1000";
  return r;
}

CriterionResult c4_circular_taxonomy() {
  CriterionResult r{4, "circular-orbit taxonomy at c=-2", false, ""};
  double c = -2;
  CircularOrbitSet set = circular_orbits(c);
  std::vector<double> oracle = circular_root_oracle(c);
  bool ok = set.roots.size() == 3 && oracle.size() == 3;
  double worst = 0;
  if (ok) {
    for (int i = 0; i < 3; ++i)
      worst = std::max(worst, std::fabs(set.roots[i].E - oracle[i]));
    ok = worst < 1e-10;
    ok = ok && set.roots[0].label == "retro_b" && set.roots[1].label == "direct_b" &&
         set.roots[2].label == "direct_u";
    ok = ok && set.roots[0].E < set.roots[1].E && set.roots[1].E < -0.5 &&
         set.roots[2].E > -0.5 && set.roots[2].E < 0;
  }
  double dual = ok ? std::fabs((set.roots[2].E - c) -
                               1.0 / std::sqrt(-2 * set.roots[2].E))
                   : 1;
  ok = ok && dual < 1e-8;
  r.pass = ok;
  r.detail = "max root error=" + fmt17(worst) + " dual-L defect=" + fmt17(dual);
  return r;
}

CriterionResult c5_stack(const ModelHamiltonian& m, unsigned seed) {
  CriterionResult r{5, "model-stack critical points and sign certificates", false, ""};
  CriticalPointReport cp = critical_points(m);
  bool ok = cp.points.size() == 3;
  double vals[3] = {-5, -3, -5};
  int morse[3] = {0, 1, 0};
  double x2s[3] = {0, kTwoPi, 2 * kTwoPi};
  if (ok) {
    for (int i = 0; i < 3; ++i) {
      const CriticalPoint& p = cp.points[i];
      ok = ok && std::fabs(p.x2 - x2s[i]) < 1e-8 &&
           std::fabs(p.y2 - m.params().lam3) < 1e-8 &&
           std::fabs(p.value - vals[i]) < 1e-10 && p.morse_index == morse[i];
    }
  }
  SignCertificate sc = sign_certificates(m, 512, 2000, seed + 5);
  ok = ok && sc.pass && sc.sigma_min_y2 > 1;
  r.pass = ok;
  r.detail = std::to_string(cp.points.size()) + " critical points, cert " +
             (sc.pass ? "pass" : "fail") + ", min Sigma y2=" +
             fmt17(sc.sigma_min_y2);
  return r;
}

CriterionResult c6_transversality(const ModelHamiltonian& lower,
                                  const ModelHamiltonian& app, unsigned seed) {
  CriterionResult r{6, "Liouville transversality on both stacks", false, ""};
  ScanResult a = transversality_scan(lower, LiouvilleField::assemble(lower),
                                     10000, seed + 6);
  ScanResult b = transversality_scan(app, LiouvilleField::assemble(app), 10000,
                                     seed + 60);
  r.pass = a.min_value > 0 && b.min_value > 0;
  r.detail = "min dH(Y) lower=" + fmt17(a.min_value) +
             " appendix=" + fmt17(b.min_value);
  return r;
}

CriterionResult c7_cz(const ContactData& cd) {
  CriterionResult r{7, "Conley-Zehnder indices", false, ""};
  OrbitRecord p2 = with_cz(cd, binding_p2(cd));
  OrbitRecord p3 = with_cz(cd, binding_p3(cd));
  OrbitRecord p3p = with_cz(cd, binding_p3_prime(cd));
  bool ok = p2.cz && *p2.cz == 2 && !p2.degenerate && p3.cz && *p3.cz == 3 &&
            !p3.degenerate && p3p.cz && *p3p.cz == 3 && !p3p.degenerate;
  auto pq = torus_pq_list(50);
  int min_torus = 1000;
  int pairs_equal = 0;
  for (size_t i = 0; i < pq.size(); ++i) {
    OrbitRecord t = with_cz(cd, torus_orbit(cd, pq[i].first, pq[i].second, false));
    min_torus = std::min(min_torus, t.cz.value_or(-1000));
    if (i < 20) {
      OrbitRecord tm =
          with_cz(cd, torus_orbit(cd, pq[i].first, pq[i].second, true));
      if (t.cz && tm.cz && *t.cz == *tm.cz) ++pairs_equal;
    }
  }
  ok = ok && min_torus >= 3 && pairs_equal == 20;
  r.pass = ok;
  r.detail = "mu(P2)=" + std::to_string(p2.cz.value_or(-99)) + " mu(P3)=" +
             std::to_string(p3.cz.value_or(-99)) + " mu(P3')=" +
             std::to_string(p3p.cz.value_or(-99)) + " min torus mu=" +
             std::to_string(min_torus) + " mirror-equal pairs=" +
             std::to_string(pairs_equal) + "/20";
  return r;
}

CriterionResult c8_leaves(const ContactData& cd) {
  CriterionResult r{8, "lower-stack leaf suite", false, ""};
  const ModelHamiltonian& m = cd.Y.model();
  const StackParams& p = m.params();
  Leaf plane0 = solve_leaf(m, LeafCase::PlaneX20, 0.5 * (p.lam1 + p.lam3));
  Leaf plane2 = solve_leaf(m, LeafCase::PlaneX22Pi, 0.5 * (p.lam1 + p.lam3));
  Leaf cyl = solve_leaf(m, LeafCase::CylY2L3, kPi);

  bool mono = std::is_sorted(plane0.y2.begin(), plane0.y2.end());
  double end_err = std::max(std::fabs(plane0.y2.front() - p.lam1),
                            std::fabs(plane0.y2.back() - p.lam3));
  bool ok = mono && end_err < 1e-6;
  ok = ok && std::fabs(plane0.energy - 6 * kPi) < 1e-5;
  ok = ok && std::fabs(plane2.energy - 2 * kPi) < 1e-5 &&
       plane2.neg_end.mass < 1e-6 && plane2.neg_end.removable;
  ok = ok && std::fabs(cyl.neg_end.mass - 2 * kPi) < 1e-5 &&
       std::fabs(cyl.pos_end.mass - 6 * kPi) < 1e-5;

  double worst_audit = 0;
  for (const Leaf* lf : {&plane0, &plane2, &cyl}) {
    LeafAudit a = leaf_audit(cd, *lf);
    worst_audit = std::max({worst_audit, a.max_energy_residual,
                            a.max_aprime_residual, a.max_lambda_us,
                            a.max_cr_residual});
    ok = ok && a.ok && a.min_frame_det > 0;
  }

  Leaf mir = mirror_leaf(plane0);
  Leaf back = mirror_leaf(mir);
  bool involution = mir.kind == LeafCase::PlaneX24Pi && back.kind == plane0.kind &&
                    back.x2 == plane0.x2 && back.y2 == plane0.y2 &&
                    back.s == plane0.s && mirror_leaf(cyl).kind == LeafCase::CylY2L3Mirror;
  ok = ok && involution;
  r.pass = ok;
  r.detail = "endpoint err=" + fmt17(end_err) + " worst audit residual=" +
             fmt17(worst_audit) + (involution ? " involution ok" : " involution FAIL");
  return r;
}

CriterionResult c9_annulus(const ContactData& cd_app, unsigned seed) {
  CriterionResult r{9, "appendix annulus foliation", false, ""};
  const ModelHamiltonian& m = cd_app.Y.model();
  const StackParams& p = m.params();
  Leaf ann = annulus_leaf(m, 0.7);
  size_t peak = std::max_element(ann.r.begin(), ann.r.end()) - ann.r.begin();
  bool unimodal = std::is_sorted(ann.r.begin(), ann.r.begin() + peak + 1) &&
                  std::is_sorted(ann.r.rbegin(), ann.r.rend() - peak);
  double rmax_err = std::fabs(ann.r[peak] - 2.0);
  double ymax_err = std::fabs(ann.y2[peak] - p.lam3);
  double tau_expect = kTwoPi * (p.lam3 - p.lam1) + 4 * kPi;
  double e_err = std::fabs(ann.energy - tau_expect);
  AnnulusCoverage cov = annulus_coverage(m, ann, 2000, seed + 9);
  LeafAudit audit = leaf_audit(cd_app, ann);
  r.pass = unimodal && rmax_err < 1e-6 && ymax_err < 1e-6 && e_err < 1e-5 &&
           cov.ok && audit.ok;
  r.detail = "r max err=" + fmt17(rmax_err) + " energy err=" + fmt17(e_err) +
             " coverage " + std::to_string(cov.assigned) + "/" +
             std::to_string(cov.n);
  return r;
}

CriterionResult c10_return_map(unsigned seed) {
  CriterionResult r{10, "disc foliation and first-return map", false, ""};
  double c = -2, E0 = -0.1;
  DiscLeaf d = disc_leaf(c, E0, 0.0);
  bool ok = d.min_xdot > 0.1;
  std::vector<FixedPoint> fps = fixed_points(c, E0);
  ok = ok && fps.size() == 1 && fps[0].origin;

  int tori = 0, min_cross = 1000;
  bool integr_ok = true;
  for (int k = 1; k <= 3; ++k)
    for (int l = 7 * k; l <= 12 * k; ++l) {
      if (std::gcd(k, l) != 1) continue;
      double y2 = std::cbrt(double(l) / k);
      if (y2 <= d.y2_lo || y2 >= d.y2_hi) continue;
      auto rec = torus_on_level(c, k, l);
      if (!rec) continue;
      ++tori;
      int cc = crossing_count(c, k, l);
      min_cross = std::min(min_cross, cc);
      if (cc != l - k) integr_ok = false;
      if (k == 1 && crossing_count_integrated(c, k, l, 0.4) != cc)
        integr_ok = false;
    }
  ok = ok && tori > 0 && min_cross >= 2 && integr_ok;

  std::mt19937_64 rng(seed + 10);
  std::uniform_real_distribution<double> uy(d.y2_lo, d.y2_hi), uu(0, 1),
      uth(0, kTwoPi);
  double worst_flow = 0;
  for (int i = 0; i < 20; ++i) {
    double y2 = uy(rng);
    double rad = d.radius(y2) * std::sqrt(uu(rng)) * 0.98;
    double th = uth(rng);
    ReturnMapResult rm =
        return_map(d, rad * std::cos(th), rad * std::sin(th), y2);
    worst_flow = std::max(worst_flow, return_map_flow_error(d, rm));
  }
  ok = ok && worst_flow < 1e-8;
  r.pass = ok;
  r.detail = "margin=" + fmt17(d.min_xdot) + " fixed points=" +
             std::to_string(fps.size()) + " tori=" + std::to_string(tori) +
             " min crossings=" + std::to_string(min_cross) +
             " max flow defect=" + fmt17(worst_flow);
  return r;
}

std::vector<CriterionResult> run_once(const ScenarioConfig& cfg) {
  std::vector<CriterionResult> out;
  unsigned seed = cfg.seed;
  ScenarioConfig app_cfg = cfg;
  app_cfg.regime = "appendix";
  ModelHamiltonian lower = ModelHamiltonian::build(cfg.params());
  ModelHamiltonian app = ModelHamiltonian::build(app_cfg.params());
  ContactData cd = contact_data(lower);
  ContactData cd_app = contact_data(app);

  out.push_back(c1_critical_value());
  out.push_back(c2_conservation(seed));
  out.push_back(c3_symplecticity(seed));
  out.push_back(c4_circular_taxonomy());
  out.push_back(c5_stack(lower, seed));
  out.push_back(c6_transversality(lower, app, seed));
  out.push_back(c7_cz(cd));
  out.push_back(c8_leaves(cd));
  out.push_back(c9_annulus(cd_app, seed));
  out.push_back(c10_return_map(seed));
  return out;
}

std::string render_partial(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  for (const CriterionResult& r : results) {
    os << "criterion " << (r.id < 10 ? "0" : "") << r.id << " "
       << (r.pass ? "PASS" : "FAIL") << " " << r.name << ": " << r.detail
       << "\n";
  }
  return os.str();
}

}  // namespace

VerifyReport run_verification(const ScenarioConfig& cfg) {
  VerifyReport rep;
  rep.results = run_once(cfg);
  // criterion 11: the whole suite re-run must reproduce the report byte for
  // byte
  std::string first = render_partial(rep.results);
  std::string second = render_partial(run_once(cfg));
  CriterionResult c11{11, "determinism of the verification suite", first == second,
                      first == second ? "two runs byte-identical"
                                      : "reports differ between runs"};
  rep.results.push_back(c11);
  rep.all_pass = true;
  for (const CriterionResult& r : rep.results) rep.all_pass = rep.all_pass && r.pass;
  return rep;
}

std::string render_report(const VerifyReport& rep) {
  std::string s = render_partial(rep.results);
  s += rep.all_pass ? "result PASS\n" : "result FAIL\n";
  return s;
}

}  // namespace rkp
