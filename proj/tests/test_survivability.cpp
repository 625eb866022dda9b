#include <gtest/gtest.h>

#include <sstream>

#include "ncplan/ncplan.hpp"
#include "oracles.hpp"

using namespace ncplan;

namespace {

Topology corridor() { return load_topology(std::filesystem::path(NCPLAN_SOURCE_DIR) / "data/topologies/xor_corridor.topo"); }

}  // namespace

TEST(Survivability, CorridorWorkingCutRecoversViaXor) {
  Topology t = corridor();
  Plan n = plan_nc(t, make_demands({{0, 4}, {1, 4}}), WavelengthGrid(40));
  ASSERT_EQ(n.coding_ops, 1);
  const FiberId b_working = *t.fiber_between(1, 4);
  FailureReport r = simulate_failure(t, n, b_working);
  EXPECT_EQ(r.per_demand.at(1), Recovery::ViaXor);
  EXPECT_EQ(r.per_demand.at(0), Recovery::WorkingIntact);
  EXPECT_EQ(r.recovery_expression.at(1), "d1 = (d1 ^ d0) ^ d0");
  EXPECT_EQ(r.per_demand.size(), 2u);
}

TEST(Survivability, UntouchedFiberLeavesAllIntact) {
  // Fiber 0-1 is used by neither demand's routes.
  Topology t("corridor+", 5, {{0, 4}, {1, 4}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {0, 1}});
  Plan n = plan_nc(t, make_demands({{0, 4}, {1, 4}}), WavelengthGrid(40));
  FailureReport r = simulate_failure(t, n, *t.fiber_between(0, 1));
  for (const auto& [id, v] : r.per_demand) EXPECT_EQ(v, Recovery::WorkingIntact);
}

TEST(Survivability, UnknownFiber) {
  Topology t = corridor();
  Plan n = plan_nc(t, make_demands({{0, 4}}), WavelengthGrid(40));
  EXPECT_THROW(simulate_failure(t, n, 99), Error);
  EXPECT_THROW(simulate_failure(t, n, -1), Error);
}

TEST(Survivability, BrokenConditionThreeLosesDemand) {
  // Hand-built coded pair whose working paths share fiber 2-4.
  Topology t("shared", 5, {{0, 2}, {1, 2}, {2, 4}, {0, 3}, {1, 3}, {3, 4}});
  Provision a, b;
  a.demand = 0;
  a.working = make_path(t, {0, 2, 4});
  a.protection = make_path(t, {0, 3, 4});
  b.demand = 1;
  b.working = make_path(t, {1, 2, 4});
  b.protection = make_path(t, {1, 3, 4});
  a.wavelength = b.wavelength = 0;
  a.partner = 1;
  b.partner = 0;
  a.coding_node = b.coding_node = 3;
  a.shared_suffix = b.shared_suffix = make_path(t, {3, 4});
  Plan p = finalize_plan({{0, a}, {1, b}});
  EXPECT_FALSE(validate_plan(t, make_demands({{0, 4}, {1, 4}}), WavelengthGrid(1), p).empty());
  SurvivabilityResult r = verify_all_failures(t, p);
  ASSERT_FALSE(r.passed);
  EXPECT_TRUE(r.first_failure->any_lost());
  EXPECT_EQ(r.first_failure->failed_fiber, *t.fiber_between(2, 4));
}

TEST(Survivability, AllEmittedPlansSurvive) {
  const WavelengthGrid grid(40);
  for (const auto& inst : oracle::benchmark_instances(2)) {
    for (const Plan& p : {plan_wnc(inst.topo, inst.demands, grid), plan_nc(inst.topo, inst.demands, grid)}) {
      SurvivabilityResult r = verify_all_failures(inst.topo, p);
      EXPECT_TRUE(r.passed) << inst.topo.name();
      for (FiberId f = 0; f < inst.topo.fiber_count(); ++f) {
        FailureReport rep = simulate_failure(inst.topo, p, f);
        EXPECT_EQ(rep.per_demand.size(), p.provisions.size());
        for (const auto& [id, v] : rep.per_demand) {
          const bool coded = p.provisions.at(id).coded();
          if (coded) EXPECT_NE(v, Recovery::ViaProtection);
          if (!coded) EXPECT_NE(v, Recovery::ViaXor);
        }
      }
    }
  }
}

TEST(Survivability, CsvReport) {
  Topology t = corridor();
  Plan n = plan_nc(t, make_demands({{0, 4}, {1, 4}}), WavelengthGrid(40));
  std::ostringstream out;
  write_failure_csv(out, t, n);
  const std::string csv = out.str();
  EXPECT_EQ(csv.rfind("fiber,demand,verdict\n", 0), 0u);
  EXPECT_NE(csv.find("1-4,1,recovered_via_xor"), std::string::npos);
  EXPECT_NE(csv.find("0-4,0,recovered_via_xor"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + t.fiber_count() * 2);
}
