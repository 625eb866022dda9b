#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ncplan/ncplan.hpp"
#include "oracles.hpp"

using namespace ncplan;

namespace {

Topology corridor() { return load_topology(std::filesystem::path(NCPLAN_SOURCE_DIR) / "data/topologies/xor_corridor.topo"); }

std::string lp_text(const IlpModel& m) {
  std::ostringstream out;
  write_lp(out, m);
  return out.str();
}

std::size_t count_binaries(const std::string& lp) {
  std::istringstream in(lp);
  std::string line;
  bool inside = false;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (line == "Binaries") {
      inside = true;
    } else if (line == "End") {
      inside = false;
    } else if (inside && !line.empty()) {
      ++n;
    }
  }
  return n;
}

bool highs_available() {
  static const bool ok = std::system("python3 -c 'import highspy' >/dev/null 2>&1") == 0;
  return ok;
}

std::optional<double> solve_with_highs(const IlpModel& m, const std::string& stem) {
  const auto lp = std::filesystem::temp_directory_path() / (stem + ".lp");
  const auto out = std::filesystem::temp_directory_path() / (stem + ".out");
  export_model(m, lp);
  const std::string cmd = std::string("python3 ") + NCPLAN_SOURCE_DIR + "/tests/solve_lp_highs.py " + lp.string() +
                          " > " + out.string();
  if (std::system(cmd.c_str()) != 0) return std::nullopt;
  std::ifstream in(out);
  double value;
  if (!(in >> value)) return std::nullopt;
  return value;
}

}  // namespace

TEST(IlpModel, WncBinaryCount) {
  Topology ring = oracle::ring4();
  DemandSet d = make_demands({{0, 2}});
  for (int W : {1, 2, 5}) {
    IlpModel m = build_model(ring, d, WavelengthGrid(W), DesignMode::WNC);
    const std::size_t arcs = ring.arc_count();
    const std::size_t expect = d.size() * arcs * W * 2 + d.size() * W + arcs * W;
    EXPECT_EQ(m.variable_count(), expect);
    EXPECT_EQ(count_binaries(lp_text(m)), expect);
  }
  Topology six = builtin_topology("six_node");
  DemandSet d6 = generate_demands(six, 0.3, 1, 0);
  IlpModel m = build_model(six, d6, WavelengthGrid(40), DesignMode::WNC);
  EXPECT_EQ(count_binaries(lp_text(m)), d6.size() * six.arc_count() * 40 * 2 + d6.size() * 40 + six.arc_count() * 40);
}

TEST(IlpModel, ExportIsDeterministic) {
  Topology t = builtin_topology("six_node");
  DemandSet d = generate_demands(t, 0.3, 1, 2);
  for (DesignMode mode : {DesignMode::WNC, DesignMode::NC}) {
    IlpModel a = build_model(t, d, WavelengthGrid(4), mode);
    IlpModel b = build_model(t, d, WavelengthGrid(4), mode);
    EXPECT_EQ(lp_text(a), lp_text(b));
    const auto p1 = std::filesystem::temp_directory_path() / "ncplan_det_1.lp";
    const auto p2 = std::filesystem::temp_directory_path() / "ncplan_det_2.lp";
    export_model(a, p1);
    export_model(a, p2);
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    EXPECT_EQ(s1.str(), s2.str());
    EXPECT_EQ(s1.str(), lp_text(a));
  }
}

TEST(IlpModel, RowsAreWellFormed) {
  Topology t = corridor();
  DemandSet d = make_demands({{0, 4}, {1, 4}, {3, 4}, {2, 0}});
  for (DesignMode mode : {DesignMode::WNC, DesignMode::NC}) {
    IlpModel m = build_model(t, d, WavelengthGrid(3), mode);
    std::set<std::string> names;
    std::set<std::string> families;
    for (const Constraint& c : m.constraints) {
      EXPECT_TRUE(names.insert(c.name).second) << c.name;
      EXPECT_FALSE(c.terms.empty()) << c.name;
      families.insert(c.name.substr(0, 2));
      for (const auto& [var, coef] : c.terms) {
        EXPECT_GE(var, 0) << c.name;
        EXPECT_LT(static_cast<std::size_t>(var), m.variable_count()) << c.name;
      }
    }
    std::set<std::string> vars(m.vars.names().begin(), m.vars.names().end());
    EXPECT_EQ(vars.size(), m.variable_count());
    if (mode == DesignMode::NC) {
      EXPECT_EQ(families, (std::set<std::string>{"C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9"}));
      // f only for same-destination pairs with d1 < d2.
      EXPECT_EQ(m.vars.pairs().size(), 3u);
      EXPECT_GE(m.vars.f(1, 0), 0);
      EXPECT_LT(m.vars.f(0, 3), 0);
    } else {
      EXPECT_EQ(families, (std::set<std::string>{"C1", "C2", "C3", "C4", "C9"}));
      EXPECT_TRUE(m.vars.pairs().empty());
      EXPECT_LT(m.vars.delta(0, 0), 0);
      EXPECT_LT(m.vars.z(0, 0, 0, 0), 0);
    }
  }
}

TEST(IlpModel, PlansEncodeAsFeasiblePoints) {
  std::vector<std::pair<Topology, DemandSet>> cases;
  cases.push_back({corridor(), make_demands({{0, 4}, {1, 4}})});
  Topology six = builtin_topology("six_node");
  for (int s = 0; s < 3; ++s) cases.push_back({six, generate_demands(six, 0.3, 1, s)});
  for (const auto& [t, d] : cases) {
    const WavelengthGrid grid(6);
    Plan w = plan_wnc(t, d, grid);
    Plan n = plan_nc(t, d, grid);
    IlpModel mw = build_model(t, d, grid, DesignMode::WNC);
    IlpModel mn = build_model(t, d, grid, DesignMode::NC);
    auto xw = encode_plan(mw, w);
    EXPECT_TRUE(violated_rows(mw, xw).empty()) << violated_rows(mw, xw).front();
    EXPECT_EQ(objective_value(mw, xw), w.cost);
    auto xn = encode_plan(mn, n);
    auto bad = violated_rows(mn, xn);
    EXPECT_TRUE(bad.empty()) << bad.front();
    EXPECT_EQ(objective_value(mn, xn), n.cost);
    EXPECT_TRUE(violated_rows(mn, encode_plan(mn, w)).empty());
    if (n.coding_ops > 0) EXPECT_THROW(encode_plan(mw, n), Error);
  }
}

TEST(IlpModel, InfeasiblePlansViolateRows) {
  Topology ring = oracle::ring4();
  DemandSet d = make_demands({{0, 2}, {0, 2}});
  Plan p = plan_wnc(ring, d, WavelengthGrid(2));
  auto prov = p.provisions;
  prov.at(1).wavelength = 0;
  IlpModel m = build_model(ring, d, WavelengthGrid(2), DesignMode::WNC);
  auto bad = violated_rows(m, encode_plan(m, finalize_plan(prov)));
  ASSERT_FALSE(bad.empty());
  EXPECT_TRUE(std::any_of(bad.begin(), bad.end(), [](const std::string& s) { return s.rfind("C9", 0) == 0; }));

  prov = p.provisions;
  prov.at(0).protection = prov.at(0).working;
  bad = violated_rows(m, encode_plan(m, finalize_plan(prov)));
  EXPECT_TRUE(std::any_of(bad.begin(), bad.end(), [](const std::string& s) { return s.rfind("C3", 0) == 0; }));

  // Coded pair on different wavelengths breaks the NC coupling rows.
  Topology t = corridor();
  DemandSet dc = make_demands({{0, 4}, {1, 4}});
  auto coded = plan_nc(t, dc, WavelengthGrid(2)).provisions;
  coded.at(1).wavelength = 1;
  IlpModel mn = build_model(t, dc, WavelengthGrid(2), DesignMode::NC);
  Plan broken;
  broken.provisions = coded;
  broken.occupancy = compute_occupancy(coded);
  bad = violated_rows(mn, encode_plan(mn, broken));
  EXPECT_TRUE(std::any_of(bad.begin(), bad.end(), [](const std::string& s) { return s.rfind("C8", 0) == 0; }));
}

TEST(IlpModel, BudgetExceeded) {
  Topology t = builtin_topology("nsfnet");
  DemandSet d = generate_demands(t, 1.0, 1, 0);
  try {
    build_model(t, d, WavelengthGrid(40), DesignMode::NC);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_NE(std::string(e.what()).find("variables"), std::string::npos);
  }
  ModelOptions small;
  small.max_variables = 100;
  EXPECT_THROW(build_model(oracle::ring4(), make_demands({{0, 2}}), WavelengthGrid(40), DesignMode::WNC, small),
               BudgetExceeded);
}

TEST(IlpModel, ExternalSolverSmallCases) {
  if (!highs_available()) GTEST_SKIP() << "highspy not installed";
  auto ring = solve_with_highs(build_model(oracle::ring4(), make_demands({{0, 2}}), WavelengthGrid(2), DesignMode::WNC),
                               "ncplan_ring");
  ASSERT_TRUE(ring);
  EXPECT_NEAR(*ring, 4.0, 1e-6);

  Topology t = corridor();
  DemandSet d = make_demands({{0, 4}, {1, 4}});
  auto wnc = solve_with_highs(build_model(t, d, WavelengthGrid(2), DesignMode::WNC), "ncplan_corridor_wnc");
  auto nc = solve_with_highs(build_model(t, d, WavelengthGrid(2), DesignMode::NC), "ncplan_corridor_nc");
  ASSERT_TRUE(wnc && nc);
  EXPECT_NEAR(*wnc, 8.0, 1e-6);
  EXPECT_NEAR(*nc, *wnc - 2.0, 1e-6);
}

TEST(Exact, CorridorCodesOptimally) {
  Topology t = corridor();
  DemandSet d = make_demands({{0, 4}, {1, 4}});
  ExactResult r = exact_solve(t, d, WavelengthGrid(40), DesignMode::NC);
  EXPECT_TRUE(r.optimal);
  EXPECT_EQ(r.plan.cost, plan_wnc(t, d, WavelengthGrid(40)).cost - 2);
  EXPECT_EQ(r.plan.coding_ops, 1);
}

TEST(Exact, WncWithSingleCycleMatchesHeuristic) {
  for (const auto& name : builtin_topology_names()) {
    Topology t = builtin_topology(name);
    for (int s = 0; s < 3; ++s) {
      DemandSet d = generate_demands(t, name == std::string("six_node") ? 0.7 : 0.15, 1, s);
      ExactOptions o;
      o.k = 1;
      ExactResult r = exact_solve(t, d, WavelengthGrid(40), DesignMode::WNC, o);
      EXPECT_TRUE(r.optimal);
      EXPECT_EQ(r.plan.cost, plan_wnc(t, d, WavelengthGrid(40)).cost) << name << " " << s;
    }
  }
}

TEST(Exact, PlansAreValidAndNoWorseThanHeuristics) {
  Topology six = builtin_topology("six_node");
  Topology cost239 = builtin_topology("cost239");
  std::vector<std::pair<Topology, DemandSet>> cases;
  for (int s = 0; s < 6; ++s) cases.push_back({six, generate_demands(six, 0.3, 1, s)});
  for (int s = 0; s < 3; ++s) cases.push_back({cost239, generate_demands(cost239, 0.1, 2, s)});
  const WavelengthGrid grid(40);
  for (const auto& [t, d] : cases) {
    ExactOptions o;
    o.time_limit_seconds = 30;
    ExactResult nc = exact_solve(t, d, grid, DesignMode::NC, o);
    ExactResult wnc = exact_solve(t, d, grid, DesignMode::WNC, o);
    for (const ExactResult* r : {&nc, &wnc}) {
      auto vs = validate_plan(t, d, grid, r->plan);
      EXPECT_TRUE(vs.empty()) << vs.front();
      EXPECT_TRUE(verify_all_failures(t, r->plan).passed);
    }
    ASSERT_TRUE(nc.optimal && wnc.optimal);
    EXPECT_LE(nc.plan.cost, plan_nc(t, d, grid).cost);
    EXPECT_LE(wnc.plan.cost, plan_wnc(t, d, grid).cost);
    EXPECT_LE(nc.plan.cost, wnc.plan.cost);
  }
}

TEST(Exact, WncValueIgnoresDemandOrder) {
  Topology t = builtin_topology("six_node");
  for (int s = 0; s < 4; ++s) {
    DemandSet d = generate_demands(t, 0.3, 3, s);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (const Demand& x : d.demands) pairs.push_back({x.source, x.destination});
    std::reverse(pairs.begin(), pairs.end());
    std::rotate(pairs.begin(), pairs.begin() + 2, pairs.end());
    DemandSet permuted = make_demands(pairs);
    const WavelengthGrid grid(8);
    ExactResult a = exact_solve(t, d, grid, DesignMode::WNC);
    ExactResult b = exact_solve(t, permuted, grid, DesignMode::WNC);
    ASSERT_TRUE(a.optimal && b.optimal);
    EXPECT_EQ(a.plan.cost, b.plan.cost);
  }
}

TEST(Exact, BoundIsAdmissible) {
  std::vector<std::pair<Topology, DemandSet>> cases;
  cases.push_back({corridor(), make_demands({{0, 4}, {1, 4}, {3, 4}, {2, 4}})});
  Topology six = builtin_topology("six_node");
  for (int s = 0; s < 6; ++s) {
    DemandSet d = generate_demands(six, 0.2, 4, s);
    ASSERT_LE(d.size(), 6u);
    cases.push_back({six, d});
  }
  // Many demands towards one node: plenty of coding options.
  cases.push_back({six, make_demands({{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}})});
  int feasible = 0;
  for (const auto& [t, d] : cases) {
    for (DesignMode mode : {DesignMode::WNC, DesignMode::NC}) {
      ExactOptions with, without;
      with.k = without.k = 3;
      without.use_bound = false;
      const WavelengthGrid grid(4);
      // Infeasible instances must be reported as such by both searches.
      auto solve = [&](const ExactOptions& o) -> std::optional<ExactResult> {
        try {
          return exact_solve(t, d, grid, mode, o);
        } catch (const CapacityExhausted&) {
          return std::nullopt;
        }
      };
      auto a = solve(with);
      auto b = solve(without);
      ASSERT_EQ(a.has_value(), b.has_value()) << t.name();
      if (!a) continue;
      ++feasible;
      ASSERT_TRUE(a->optimal && b->optimal);
      EXPECT_EQ(a->plan.cost, b->plan.cost) << t.name() << " " << d.size() << " " << to_string(mode);
      EXPECT_LE(a->nodes, b->nodes);
    }
  }
  EXPECT_GE(feasible, 10);
}

TEST(Exact, DemandCap) {
  Topology t = builtin_topology("nsfnet");
  DemandSet d = generate_demands(t, 0.3, 1, 0);
  EXPECT_THROW(exact_solve(t, d, WavelengthGrid(40), DesignMode::NC), BudgetExceeded);
  ExactOptions o;
  o.demand_cap = 2;
  EXPECT_THROW(exact_solve(oracle::ring4(), make_demands({{0, 2}, {1, 3}, {2, 0}}), WavelengthGrid(4), DesignMode::WNC, o),
               BudgetExceeded);
}

TEST(Exact, TimeLimitReturnsIncumbent) {
  Topology t = builtin_topology("six_node");
  DemandSet d = generate_demands(t, 1.0, 1, 0);
  ExactOptions o;
  o.time_limit_seconds = 0.5;
  ExactResult r = exact_solve(t, d, WavelengthGrid(40), DesignMode::NC, o);
  EXPECT_LE(r.plan.cost, plan_nc(t, d, WavelengthGrid(40)).cost);
  EXPECT_TRUE(validate_plan(t, d, WavelengthGrid(40), r.plan).empty());
  EXPECT_LT(r.seconds, 5.0);
}
