#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>

#include "ncplan/error.hpp"
#include "ncplan/plan.hpp"
#include "ncplan/topology.hpp"

namespace ncplan {

enum class Recovery { WorkingIntact, ViaProtection, ViaXor, Lost };

inline const char* to_string(Recovery r) {
  switch (r) {
    case Recovery::WorkingIntact: return "working_intact";
    case Recovery::ViaProtection: return "recovered_via_protection";
    case Recovery::ViaXor: return "recovered_via_xor";
    case Recovery::Lost: return "LOST";
  }
  return "?";
}

struct FailureReport {
  FiberId failed_fiber = 0;
  std::map<DemandId, Recovery> per_demand;
  /// XOR recoveries only, e.g. "d3 = (d3 ^ d7) ^ d7".
  std::map<DemandId, std::string> recovery_expression;

  bool any_lost() const {
    for (const auto& [id, r] : per_demand)
      if (r == Recovery::Lost) return true;
    return false;
  }
};

/// Outcome of cutting one fiber. An uncoded demand falls back to its own
/// protection path. A coded demand has no standalone protection past the
/// coding node: it is recovered as (own ^ partner) ^ partner, which needs
/// its own protection route, the partner's pre-coding protection segment
/// (the other XOR input) and the partner's working path all intact.
inline FailureReport simulate_failure(const Topology& topo, const Plan& plan, FiberId fiber) {
  if (fiber < 0 || fiber >= topo.fiber_count())
    throw Error("unknown fiber " + std::to_string(fiber));
  FailureReport report;
  report.failed_fiber = fiber;
  for (const auto& [id, p] : plan.provisions) {
    Recovery verdict;
    if (!p.working.uses_fiber(fiber)) {
      verdict = Recovery::WorkingIntact;
    } else if (!p.coded()) {
      verdict = p.protection.uses_fiber(fiber) ? Recovery::Lost : Recovery::ViaProtection;
    } else {
      verdict = Recovery::Lost;
      auto it = plan.provisions.find(*p.partner);
      if (it != plan.provisions.end()) {
        const Provision& q = it->second;
        bool partner_input_ok = true;
        for (std::size_t i = 0; i < q.coded_from() && i < q.protection.arcs.size(); ++i)
          if (fiber_of(q.protection.arcs[i]) == fiber) partner_input_ok = false;
        if (!p.protection.uses_fiber(fiber) && partner_input_ok && !q.working.uses_fiber(fiber)) {
          verdict = Recovery::ViaXor;
          const std::string self = "d" + std::to_string(id);
          const std::string other = "d" + std::to_string(*p.partner);
          report.recovery_expression[id] = self + " = (" + self + " ^ " + other + ") ^ " + other;
        }
      }
    }
    report.per_demand[id] = verdict;
  }
  return report;
}

struct SurvivabilityResult {
  bool passed = true;
  std::optional<FailureReport> first_failure;
};

/// Cuts every fiber in turn; passes iff no demand is ever lost.
inline SurvivabilityResult verify_all_failures(const Topology& topo, const Plan& plan) {
  SurvivabilityResult result;
  for (FiberId f = 0; f < topo.fiber_count(); ++f) {
    FailureReport r = simulate_failure(topo, plan, f);
    if (r.any_lost()) {
      result.passed = false;
      result.first_failure = std::move(r);
      return result;
    }
  }
  return result;
}

/// CSV rows `fiber,demand,verdict` for every fiber cut (fiber as "u-v").
inline void write_failure_csv(std::ostream& out, const Topology& topo, const Plan& plan) {
  out << "fiber,demand,verdict\n";
  for (FiberId f = 0; f < topo.fiber_count(); ++f) {
    const Fiber& fb = topo.fiber(f);
    for (const auto& [id, r] : simulate_failure(topo, plan, f).per_demand)
      out << fb.u << '-' << fb.v << ',' << id << ',' << to_string(r) << '\n';
  }
}

}  // namespace ncplan
