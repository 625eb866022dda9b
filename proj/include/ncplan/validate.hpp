#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ncplan/coding.hpp"
#include "ncplan/demands.hpp"
#include "ncplan/plan.hpp"
#include "ncplan/topology.hpp"

namespace ncplan {

/// One broken rule. `rule` is a stable identifier such as "disjointness",
/// "clash" or "condition ii"; demand/arc are -1 when not applicable.
struct Violation {
  std::string rule;
  DemandId demand = -1;
  ArcId arc = -1;
  std::string detail;
};

inline std::ostream& operator<<(std::ostream& out, const Violation& v) {
  out << v.rule;
  if (v.demand >= 0) out << " demand=" << v.demand;
  if (v.arc >= 0) out << " arc=" << v.arc;
  if (!v.detail.empty()) out << ": " << v.detail;
  return out;
}

namespace detail {

inline bool route_ok(const Topology& topo, const Path& p, NodeId s, NodeId t) {
  if (p.nodes.size() < 2 || p.arcs.size() + 1 != p.nodes.size()) return false;
  if (p.source() != s || p.destination() != t || !is_simple(p)) return false;
  for (std::size_t i = 0; i < p.arcs.size(); ++i) {
    if (p.arcs[i] < 0 || p.arcs[i] >= topo.arc_count()) return false;
    const Arc& a = topo.arc(p.arcs[i]);
    if (a.from != p.nodes[i] || a.to != p.nodes[i + 1]) return false;
  }
  return true;
}

inline bool is_suffix_of(const Path& suffix, const Path& p) {
  if (suffix.arcs.empty() || suffix.arcs.size() > p.arcs.size()) return false;
  return std::equal(suffix.arcs.rbegin(), suffix.arcs.rend(), p.arcs.rbegin());
}

}  // namespace detail

/// Referee for every planner: returns all broken Plan/Provision invariants,
/// including conditions i-iv on each coded pair. Empty means valid.
inline std::vector<Violation> validate_plan(const Topology& topo, const DemandSet& demands,
                                            const WavelengthGrid& grid, const Plan& plan) {
  std::vector<Violation> out;
  auto add = [&](std::string rule, DemandId d, ArcId a, std::string text) {
    out.push_back({std::move(rule), d, a, std::move(text)});
  };

  std::map<DemandId, const Demand*> by_id;
  for (const Demand& d : demands.demands) by_id[d.id] = &d;
  for (const auto& [id, d] : by_id)
    if (!plan.provisions.count(id)) add("coverage", id, -1, "demand has no provision");

  for (const auto& [id, p] : plan.provisions) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      add("coverage", id, -1, "provision for unknown demand");
      continue;
    }
    const Demand& d = *it->second;
    if (p.demand != id) add("route", id, -1, "provision keyed under another demand id");
    if (!detail::route_ok(topo, p.working, d.source, d.destination))
      add("route", id, -1, "working path is not a simple source-destination route");
    if (!detail::route_ok(topo, p.protection, d.source, d.destination))
      add("route", id, -1, "protection path is not a simple source-destination route");
    if (!fiber_disjoint(p.working, p.protection))
      add("disjointness", id, -1, "working and protection share a fiber");
    if (!p.wavelength) {
      add("wavelength", id, -1, "no wavelength assigned");
    } else if (*p.wavelength < 0 || *p.wavelength >= grid.count) {
      add("wavelength", id, -1, "wavelength index " + std::to_string(*p.wavelength) + " outside grid");
    }

    const bool any = p.partner || p.coding_node || p.shared_suffix;
    const bool all = p.partner && p.coding_node && p.shared_suffix;
    if (any && !all) add("pairing", id, -1, "partner, coding node and shared suffix must come together");
    if (!all) continue;

    auto partner_it = plan.provisions.find(*p.partner);
    if (*p.partner == id || partner_it == plan.provisions.end()) {
      add("pairing", id, -1, "partner is missing");
      continue;
    }
    const Provision& q = partner_it->second;
    if (!q.partner || *q.partner != id) add("pairing", id, -1, "partner does not point back");
    if (!detail::is_suffix_of(*p.shared_suffix, p.protection) ||
        p.shared_suffix->source() != *p.coding_node)
      add("pairing", id, -1, "shared suffix is not a tail of the protection path from the coding node");
    if (q.shared_suffix && q.shared_suffix->nodes != p.shared_suffix->nodes)
      add("pairing", id, -1, "partners disagree on the shared suffix");

    if (id < *p.partner) {
      auto verdict = check_codeable(p, q);
      if (!verdict) add(to_string(*verdict.violated), id, -1, "coded with " + std::to_string(*p.partner));
    }
  }

  for (const auto& [cell, signals] : plan.occupancy) {
    if (signals.size() <= 1) continue;
    bool merged = signals.size() == 2 && signals[0].kind == SignalKind::Coded &&
                  signals[1].kind == SignalKind::Coded && signals[0].demand != signals[1].demand;
    if (merged) {
      const Provision& p = plan.provisions.at(signals[0].demand);
      merged = p.partner && *p.partner == signals[1].demand;
    }
    if (!merged) {
      std::ostringstream who;
      for (const Signal& s : signals) who << ' ' << s.demand << '/' << to_string(s.kind);
      add("clash", signals[0].demand, cell.arc,
          "wavelength " + std::to_string(cell.wavelength) + " held by" + who.str());
    }
  }
  // A coded cell held by only one member means the partner's suffix differs.
  for (const auto& [cell, signals] : plan.occupancy)
    if (signals.size() == 1 && signals[0].kind == SignalKind::Coded)
      add("pairing", signals[0].demand, cell.arc, "coded cell not shared with the partner");

  const Occupancy fresh = compute_occupancy(plan.provisions);
  if (fresh.size() != plan.occupancy.size() ||
      !std::equal(fresh.begin(), fresh.end(), plan.occupancy.begin(),
                  [](const auto& x, const auto& y) { return x.first == y.first && x.second == y.second; }))
    add("occupancy", -1, -1, "occupancy table does not match the provisions");
  if (plan.cost != static_cast<int>(fresh.size()))
    add("cost", -1, -1, "cost " + std::to_string(plan.cost) + " != occupied cells " +
                            std::to_string(fresh.size()));
  if (cost_by_identity(plan) != static_cast<int>(fresh.size()))
    add("cost identity", -1, -1, "sum of route hops minus savings " + std::to_string(cost_by_identity(plan)) +
                                     " != occupied cells " + std::to_string(fresh.size()));
  int coded = 0;
  for (const auto& [id, p] : plan.provisions)
    if (p.coded()) ++coded;
  if (plan.coding_ops * 2 != coded) add("coding_ops", -1, -1, "coding_ops does not match coded pairs");
  return out;
}

}  // namespace ncplan
