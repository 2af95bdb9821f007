// Batch front end: scenario-driven computations with deterministic CSV/JSON
// output for external plotting and the acceptance suite.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "rkp/cz_index.hpp"
#include "rkp/elements.hpp"
#include "rkp/foliation.hpp"
#include "rkp/io.hpp"
#include "rkp/leaf.hpp"
#include "rkp/orbit_catalog.hpp"
#include "rkp/scenario.hpp"
#include "rkp/verify.hpp"

using nlohmann::ordered_json;
using namespace rkp;

namespace {

struct Global {
  std::string scenario_path;
  std::string regime = "lower";
  double c = -2, e0 = -0.1;
  bool c_set = false, e0_set = false;
  unsigned seed = 0;
  bool seed_set = false;
  std::string out = ".";
  bool json = false;

  ScenarioConfig config() const {
    ScenarioConfig cfg = scenario_path.empty() ? scenario_r(regime)
                                               : load_scenario(scenario_path);
    if (!scenario_path.empty()) cfg.regime = cfg.regime;  // file wins for regime
    if (c_set) cfg.c = c;
    if (e0_set) cfg.E0 = e0;
    if (seed_set) cfg.seed = seed;
    if (out != ".") cfg.out = out;
    return cfg;
  }
};

ordered_json orbit_json(const OrbitRecord& o) {
  ordered_json j;
  j["name"] = o.name;
  j["period_H"] = fmt17(o.period_H);
  j["period_Reeb"] = fmt17(o.period_Reeb);
  if (o.cz) j["cz"] = *o.cz;
  j["degenerate"] = o.degenerate;
  j["symmetric"] = o.symmetric;
  return j;
}

int cmd_circular(const Global& g) {
  CircularOrbitSet set = circular_orbits(g.c_set ? g.c : g.config().c);
  if (g.json) {
    ordered_json j;
    j["c"] = fmt17(set.c);
    for (const CircularRoot& r : set.roots)
      j["roots"].push_back({{"label", r.label}, {"E", fmt17(r.E)}, {"L", fmt17(r.L)}});
    std::cout << j.dump(2) << "\n";
  } else {
    for (const CircularRoot& r : set.roots)
      std::cout << r.label << " E=" << fmt17(r.E) << " L=" << fmt17(r.L) << "\n";
  }
  return 0;
}

int cmd_hill(const Global& g) {
  HillRadii h = hill_radii(g.c_set ? g.c : g.config().c);
  ordered_json j;
  j["c"] = fmt17(h.c);
  j["connected"] = h.connected;
  j["r_b"] = fmt17(h.r_b);
  j["r_u"] = fmt17(h.r_u);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_torus(const Global& g, int k, int l) {
  auto rec = torus_on_level(g.c_set ? g.c : g.config().c, k, l);
  if (!rec) {
    std::cout << "absent\n";
    return 1;
  }
  ordered_json j;
  j["k"] = rec->k;
  j["l"] = rec->l;
  j["E"] = fmt17(rec->E);
  j["L"] = fmt17(rec->L);
  j["e"] = fmt17(rec->e);
  j["collision"] = rec->collision;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_transform(const Global& g, const std::string& map_name, int n) {
  MapVariant mv = MapVariant::Poincare;
  if (map_name == "delaunay") mv = MapVariant::Delaunay;
  else if (map_name == "retrograde") mv = MapVariant::RetrogradePoincare;
  else if (map_name != "poincare")
    throw DomainError("transform: unknown map " + map_name);
  std::mt19937_64 rng(g.config().seed);
  std::uniform_real_distribution<double> uK(0.9, 1.4), ue(0.05, 0.8), uth(0, kTwoPi);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < n; ++i) {
    double K = uK(rng), e = ue(rng);
    double r = std::sqrt(2 * K * (1 - std::sqrt(1 - e * e)));
    double ph = uth(rng);
    PoincareState ps;
    ps.x1 = r * std::sin(ph);
    ps.x2 = uth(rng);
    ps.y1 = r * std::cos(ph);
    ps.y2 = K;
    PhaseState s = poincare_inverse(ps);
    if (mv == MapVariant::RetrogradePoincare) s = {s.q1, s.q2, -s.p1, -s.p2};
    double defect = symplecticity_defect(mv, s);
    PhaseState back = s;
    if (mv == MapVariant::Poincare) back = poincare_inverse(poincare_map(s));
    if (mv == MapVariant::RetrogradePoincare)
      back = retrograde_poincare_inverse(retrograde_poincare(s));
    double rt = std::max({std::fabs(back.q1 - s.q1), std::fabs(back.q2 - s.q2),
                          std::fabs(back.p1 - s.p1), std::fabs(back.p2 - s.p2)});
    rows.push_back({s.q1, s.q2, s.p1, s.p2, rt, defect});
  }
  std::filesystem::create_directories(g.config().out);
  write_csv(g.config().out + "/transform_" + map_name + ".csv",
            "q1,q2,p1,p2,roundtrip,symp_defect", rows);
  std::cout << "wrote transform_" << map_name << ".csv (" << n << " rows)\n";
  return 0;
}

int cmd_stack(const Global& g) {
  ScenarioConfig cfg = g.config();
  ModelHamiltonian m = ModelHamiltonian::build(cfg.params());
  CriticalPointReport cp = critical_points(m);
  SignCertificate sc = sign_certificates(m, 512, 2000, cfg.seed);
  ordered_json j;
  j["regime"] = cfg.regime;
  j["level"] = fmt17(m.level());
  j["Lambda1"] = fmt17(m.params().lam1);
  j["Lambda2"] = fmt17(m.params().lam2);
  j["B_bound"] = fmt17(b_bound(cfg.params()));
  for (const CriticalPoint& p : cp.points)
    j["critical_points"].push_back({{"x2", fmt17(p.x2)},
                                    {"y2", fmt17(p.y2)},
                                    {"value", fmt17(p.value)},
                                    {"morse", p.morse_index}});
  j["minimum_line"] = cp.minimum_line;
  j["certificate"] = sc.pass;
  j["sigma_min_y2"] = fmt17(sc.sigma_min_y2);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_leaf(const Global& g, const std::string& case_name, double init,
             double theta) {
  ScenarioConfig cfg = g.config();
  Leaf leaf;
  if (case_name == "annulus") {
    cfg.regime = "appendix";
    ModelHamiltonian m = ModelHamiltonian::build(cfg.params());
    leaf = annulus_leaf(m, theta);
  } else {
    cfg.regime = "lower";
    ModelHamiltonian m = ModelHamiltonian::build(cfg.params());
    LeafCase kind;
    if (case_name == "plane_x2_0") kind = LeafCase::PlaneX20;
    else if (case_name == "plane_x2_2pi") kind = LeafCase::PlaneX22Pi;
    else if (case_name == "plane_x2_4pi") kind = LeafCase::PlaneX24Pi;
    else if (case_name == "cyl_y2_L3") kind = LeafCase::CylY2L3;
    else if (case_name == "cyl_y2_L3_mirror") kind = LeafCase::CylY2L3Mirror;
    else throw DomainError("leaf: unknown case " + case_name);
    leaf = solve_leaf(m, kind, init);
  }
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < leaf.s.size(); ++i)
    rows.push_back({leaf.s[i], leaf.a[i], leaf.x2[i], leaf.y2[i], leaf.r[i]});
  std::filesystem::create_directories(cfg.out);
  write_csv(cfg.out + "/leaf_" + case_name + ".csv", "s,a,x2,y2,r", rows);
  std::cout << "leaf " << case_name << " r_first=" << fmt17(leaf.r.front())
            << " r_last=" << fmt17(leaf.r.back()) << " energy="
            << fmt17(leaf.energy) << "\n";
  return 0;
}

std::vector<OrbitRecord> binding_set(const ContactData& cd, bool appendix) {
  std::vector<OrbitRecord> out;
  if (appendix) {
    out.push_back(with_cz(cd, binding_q1(cd)));
    out.push_back(with_cz(cd, binding_q2(cd)));
  } else {
    out.push_back(with_cz(cd, binding_p2(cd)));
    out.push_back(with_cz(cd, binding_p3(cd)));
    out.push_back(with_cz(cd, binding_p3_prime(cd)));
  }
  return out;
}

int cmd_foliation(const Global& g) {
  ScenarioConfig cfg = g.config();
  bool appendix = cfg.regime == "appendix";
  ModelHamiltonian m = ModelHamiltonian::build(cfg.params());
  ContactData cd = contact_data(m);
  std::vector<OrbitRecord> binding = binding_set(cd, appendix);
  std::vector<Leaf> leaves;
  if (appendix) {
    leaves.push_back(annulus_leaf(m, 0.0));
    leaves.push_back(annulus_leaf(m, kPi / 2));
  } else {
    const StackParams& p = m.params();
    Leaf plane0 = solve_leaf(m, LeafCase::PlaneX20, 0.5 * (p.lam1 + p.lam3));
    Leaf plane2 = solve_leaf(m, LeafCase::PlaneX22Pi, 0.5 * (p.lam1 + p.lam3));
    Leaf cyl = solve_leaf(m, LeafCase::CylY2L3, kPi);
    leaves.push_back(plane0);
    leaves.push_back(plane2);
    leaves.push_back(cyl);
    leaves.push_back(mirror_leaf(plane0));
    leaves.push_back(mirror_leaf(cyl));
  }
  FoliationReport rep = assemble_report(cd, binding, leaves);
  ordered_json j;
  j["regime"] = rep.regime;
  for (const OrbitRecord& o : rep.binding) j["binding"].push_back(orbit_json(o));
  for (const LeafEntry& e : rep.leaves) {
    ordered_json je;
    je["kind"] = e.kind;
    je["init"] = fmt17(e.init);
    je["energy"] = fmt17(e.energy);
    je["margin"] = fmt17(e.margin);
    je["neg"] = {{"orbit", e.neg.orbit}, {"sign", e.neg.sign},
                 {"mass", fmt17(e.neg.mass)}, {"removable", e.neg.removable}};
    je["pos"] = {{"orbit", e.pos.orbit}, {"sign", e.pos.sign},
                 {"mass", fmt17(e.pos.mass)}, {"removable", e.pos.removable}};
    j["leaves"].push_back(je);
  }
  j["min_margin"] = fmt17(rep.min_margin);
  j["rho_closed"] = rep.rho_closed;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_return_map(const Global& g) {
  ScenarioConfig cfg = g.config();
  double c = g.c_set ? g.c : cfg.c;
  double E0 = g.e0_set ? g.e0 : cfg.E0;
  DiscLeaf d = disc_leaf(c, E0, 0.0);
  ordered_json j;
  j["c"] = fmt17(c);
  j["E0"] = fmt17(E0);
  j["retro"] = d.retro;
  j["y2_window"] = {fmt17(d.y2_lo), fmt17(d.y2_hi)};
  j["r_max"] = fmt17(d.r_max);
  j["margin"] = fmt17(d.min_xdot);
  for (const FixedPoint& f : fixed_points(c, E0))
    j["fixed_points"].push_back({{"y2", fmt17(f.y2)},
                                 {"origin", f.origin},
                                 {"k", f.k},
                                 {"l", f.l}});
  if (!d.retro) {
    for (int k = 1; k <= 2; ++k)
      for (int l = 2 * k + 1; l <= 14 * k; ++l) {
        if (std::gcd(k, l) != 1) continue;
        double y2 = std::cbrt(double(l) / k);
        if (y2 <= d.y2_lo || y2 >= d.y2_hi) continue;
        if (!torus_on_level(c, k, l)) continue;
        j["crossings"].push_back(
            {{"k", k}, {"l", l}, {"count", crossing_count(c, k, l)}});
      }
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_cz(const Global& g, const std::string& orbit_name, bool mirrored) {
  ScenarioConfig cfg = g.config();
  bool appendix = orbit_name == "Q1" || orbit_name == "Q2";
  cfg.regime = appendix ? "appendix" : "lower";
  ModelHamiltonian m = ModelHamiltonian::build(cfg.params());
  ContactData cd = contact_data(m);
  OrbitRecord o;
  if (orbit_name == "P2") o = binding_p2(cd);
  else if (orbit_name == "P3") o = binding_p3(cd);
  else if (orbit_name == "P3p") o = binding_p3_prime(cd);
  else if (orbit_name == "Q1") o = binding_q1(cd);
  else if (orbit_name == "Q2") o = binding_q2(cd);
  else if (orbit_name == "P0") o = green_orbit(cd);
  else if (orbit_name.rfind("torus:", 0) == 0) {
    int p, q;
    if (std::sscanf(orbit_name.c_str(), "torus:%d/%d", &p, &q) != 2)
      throw DomainError("cz: expected torus:<p>/<q>");
    o = torus_orbit(cd, p, q, mirrored);
  } else {
    throw DomainError("cz: unknown orbit " + orbit_name);
  }
  o = with_cz(cd, o);
  std::cout << orbit_json(o).dump(2) << "\n";
  return 0;
}

int cmd_verify(const Global& g) {
  ScenarioConfig cfg = g.config();
  VerifyReport rep = run_verification(cfg);
  std::cout << render_report(rep);
  return rep.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rotating Kepler foliation toolkit"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--scenario", g.scenario_path, "scenario JSON file");
  app.add_option("--regime", g.regime, "lower | upper | appendix");
  app.add_option("--c", g.c, "energy level")->each([&](const std::string&) { g.c_set = true; });
  app.add_option("--e0", g.e0, "Kepler-energy window edge")->each([&](const std::string&) { g.e0_set = true; });
  app.add_option("--seed", g.seed, "RNG seed")->each([&](const std::string&) { g.seed_set = true; });
  app.add_option("--out", g.out, "output directory");
  app.add_flag("--json", g.json, "JSON output");

  auto* circular = app.add_subcommand("circular", "circular-orbit catalog");
  auto* hill = app.add_subcommand("hill", "Hill-region radii");
  auto* torus = app.add_subcommand("torus", "T_{k,l} torus on the level");
  int tk = 1, tl = 9;
  torus->add_option("--k", tk);
  torus->add_option("--l", tl);
  auto* transform = app.add_subcommand("transform", "element-map round trips");
  std::string map_name = "poincare";
  int tn = 10;
  transform->add_option("--map", map_name, "poincare | delaunay | retrograde");
  transform->add_option("--n", tn, "sample count");
  auto* stack = app.add_subcommand("stack", "model stack report");
  auto* leaf = app.add_subcommand("leaf", "solve one leaf to CSV");
  std::string case_name = "cyl_y2_L3";
  double init = kPi, theta = 0;
  leaf->add_option("--case", case_name);
  leaf->add_option("--init", init);
  leaf->add_option("--theta", theta);
  auto* foliation = app.add_subcommand("foliation", "transverse-foliation report");
  auto* retmap = app.add_subcommand("return-map", "first-return map report");
  auto* cz = app.add_subcommand("cz", "Conley-Zehnder index of a named orbit");
  std::string orbit_name = "P2";
  bool mirrored = false;
  cz->add_option("--orbit", orbit_name);
  cz->add_flag("--mirrored", mirrored);
  auto* verify = app.add_subcommand("verify", "acceptance suite");

  // global options may follow the subcommand name
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();
  CLI11_PARSE(app, argc, argv);
  try {
    if (*circular) return cmd_circular(g);
    if (*hill) return cmd_hill(g);
    if (*torus) return cmd_torus(g, tk, tl);
    if (*transform) return cmd_transform(g, map_name, tn);
    if (*stack) return cmd_stack(g);
    if (*leaf) return cmd_leaf(g, case_name, init, theta);
    if (*foliation) return cmd_foliation(g);
    if (*retmap) return cmd_return_map(g);
    if (*cz) return cmd_cz(g, orbit_name, mirrored);
    if (*verify) return cmd_verify(g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
