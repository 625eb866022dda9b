#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncplan/coding.hpp"
#include "ncplan/demands.hpp"
#include "ncplan/error.hpp"
#include "ncplan/paths.hpp"
#include "ncplan/plan.hpp"
#include "ncplan/topology.hpp"
#include "ncplan/wavelength.hpp"

namespace ncplan {

struct PlannerOptions {
  int k = 8;  ///< candidate cycles per demand
};

namespace detail {

/// Dense (arc, wavelength) usage map used while planning.
class CellMap {
 public:
  CellMap(int arcs, int wavelengths)
      : wavelengths_(wavelengths), used_(static_cast<std::size_t>(arcs) * wavelengths, false) {}

  bool free(ArcId a, int w) const { return !used_[index(a, w)]; }
  void set(ArcId a, int w, bool value) { used_[index(a, w)] = value; }

  bool all_free(std::span<const ArcId> arcs, int w) const {
    return std::all_of(arcs.begin(), arcs.end(), [&](ArcId a) { return free(a, w); });
  }

  std::optional<int> first_fit(std::span<const ArcId> a, std::span<const ArcId> b) const {
    for (int w = 0; w < wavelengths_; ++w)
      if (all_free(a, w) && all_free(b, w)) return w;
    return std::nullopt;
  }

  int wavelengths() const noexcept { return wavelengths_; }

 private:
  std::size_t index(ArcId a, int w) const {
    return static_cast<std::size_t>(a) * wavelengths_ + static_cast<std::size_t>(w);
  }
  int wavelengths_;
  std::vector<bool> used_;
};

inline void occupy(CellMap& cells, const Provision& p, bool value) {
  const int w = *p.wavelength;
  for (ArcId a : p.working.arcs) cells.set(a, w, value);
  for (ArcId a : p.protection.arcs) cells.set(a, w, value);
}

inline Provision uncoded(DemandId id, const Cycle& c, std::optional<int> wavelength) {
  Provision p;
  p.demand = id;
  p.working = c.working;
  p.protection = c.protection;
  p.wavelength = wavelength;
  return p;
}

[[noreturn]] inline void exhausted(const Demand& d, int wavelengths) {
  throw CapacityExhausted(d.id, "no common free wavelength among " + std::to_string(wavelengths) +
                                    " for demand " + std::to_string(d.id) + " (" +
                                    std::to_string(d.source) + "->" + std::to_string(d.destination) + ")");
}

inline void require_routable(const std::vector<Cycle>& cycles, const Demand& d) {
  if (cycles.empty())
    throw ConnectivityError("no fiber-disjoint cycle for demand " + std::to_string(d.id) + " (" +
                            std::to_string(d.source) + "->" + std::to_string(d.destination) + ")");
}

/// Planning runs first-fit on a grid wide enough never to block
/// (|W| + |D|). When the result spills past |W|, wavelengths are recoloured
/// to fit; if that fails too, the first demand that spilled is reported.
inline int planning_width(const WavelengthGrid& grid, const DemandSet& demands) {
  return grid.count + static_cast<int>(demands.size());
}

inline Plan fit_to_grid(std::map<DemandId, Provision> provisions, const std::vector<DemandId>& order,
                        const DemandSet& demands, const WavelengthGrid& grid) {
  if (max_wavelength_index(provisions) >= grid.count &&
      !recolor_wavelengths(provisions, grid.count)) {
    for (DemandId id : order)
      if (*provisions.at(id).wavelength >= grid.count) exhausted(demands.at(id), grid.count);
  }
  return finalize_plan(std::move(provisions));
}

}  // namespace detail

/// Processing order of the coding-aware heuristic: demands grouped by
/// destination, groups by size descending (ties: smaller node id), and
/// inside a group by shortest-cycle length descending (ties: smaller id).
inline std::vector<DemandId> coding_order(const DemandSet& demands, CycleCache& cycles) {
  std::map<NodeId, std::vector<DemandId>> groups;
  for (const Demand& d : demands.demands) groups[d.destination].push_back(d.id);
  std::vector<std::pair<NodeId, std::vector<DemandId>>> ordered(groups.begin(), groups.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.second.size() != b.second.size()) return a.second.size() > b.second.size();
    return a.first < b.first;
  });
  auto shortest = [&](DemandId id) {
    const Demand& d = demands.at(id);
    const auto& cs = cycles.get(d.source, d.destination);
    detail::require_routable(cs, d);
    return cs.front().total_length;
  };
  std::vector<DemandId> order;
  for (auto& [node, ids] : ordered) {
    std::stable_sort(ids.begin(), ids.end(), [&](DemandId a, DemandId b) {
      double la = shortest(a), lb = shortest(b);
      if (la != lb) return la > lb;
      return a < b;
    });
    order.insert(order.end(), ids.begin(), ids.end());
  }
  return order;
}

/// Optical-bypass baseline: each demand takes its Suurballe-optimal cycle;
/// demands go in descending cycle length (ties: id) and get the lowest
/// wavelength free on every arc of both paths. No coding. See
/// detail::fit_to_grid for what happens when first-fit overflows the grid.
inline Plan plan_wnc(const Topology& topo, const DemandSet& demands, const WavelengthGrid& grid,
                     const PlannerOptions& options = {}) {
  CycleCache cycles(topo, 1);
  (void)options;
  std::vector<DemandId> order;
  for (const Demand& d : demands.demands) {
    detail::require_routable(cycles.get(d.source, d.destination), d);
    order.push_back(d.id);
  }
  std::stable_sort(order.begin(), order.end(), [&](DemandId a, DemandId b) {
    const Demand& da = demands.at(a);
    const Demand& db = demands.at(b);
    double la = cycles.get(da.source, da.destination).front().total_length;
    double lb = cycles.get(db.source, db.destination).front().total_length;
    if (la != lb) return la > lb;
    return a < b;
  });

  const int width = detail::planning_width(grid, demands);
  detail::CellMap cells(topo.arc_count(), width);
  std::map<DemandId, Provision> provisions;
  for (DemandId id : order) {
    const Demand& d = demands.at(id);
    const Cycle& c = cycles.get(d.source, d.destination).front();
    auto w = cells.first_fit(c.working.arcs, c.protection.arcs);
    if (!w) detail::exhausted(d, width);
    Provision p = detail::uncoded(id, c, w);
    detail::occupy(cells, p, true);
    provisions.emplace(id, std::move(p));
  }
  return detail::fit_to_grid(std::move(provisions), order, demands, grid);
}

/// One way to place a demand: a candidate cycle, optionally coded with an
/// already placed partner of the same destination.
struct PlacementOption {
  int cycle_index = 0;
  std::optional<DemandId> partner;
  int wavelength = 0;
  int incremental_cost = 0;
  int saving = 0;
  std::optional<CodingCandidate> coding;
};

/// Preference among options: lower incremental cost, then larger saving,
/// then smaller partner id (uncoded last), then smaller cycle index.
inline bool option_better(const PlacementOption& a, const PlacementOption& b) {
  if (a.incremental_cost != b.incremental_cost) return a.incremental_cost < b.incremental_cost;
  if (a.saving != b.saving) return a.saving > b.saving;
  const long pa = a.partner ? *a.partner : std::numeric_limits<int>::max();
  const long pb = b.partner ? *b.partner : std::numeric_limits<int>::max();
  if (pa != pb) return pa < pb;
  return a.cycle_index < b.cycle_index;
}

namespace detail {

/// Coded options for `d` against every placed, still unpaired demand with
/// the same destination. The demand adopts the partner's wavelength, which
/// must be free on its working arcs and on its protection arcs before the
/// coding node; the shared suffix reuses the partner's cells.
inline std::vector<PlacementOption> coded_options(const Demand& d, const std::vector<Cycle>& cycles,
                                                  const std::map<DemandId, Provision>& placed,
                                                  const std::vector<DemandId>& group,
                                                  const CellMap& cells) {
  std::vector<PlacementOption> out;
  for (int ci = 0; ci < static_cast<int>(cycles.size()); ++ci) {
    const Cycle& c = cycles[ci];
    for (DemandId other : group) {
      auto it = placed.find(other);
      if (it == placed.end() || it->second.coded()) continue;
      const Provision& q = it->second;
      Provision mine = uncoded(d.id, c, q.wavelength);
      auto verdict = check_codeable(mine, q);
      if (!verdict) continue;
      const int w = *q.wavelength;
      const std::size_t pre = c.protection.arcs.size() - static_cast<std::size_t>(verdict.candidate->saving);
      std::span<const ArcId> before(c.protection.arcs.data(), pre);
      if (!cells.all_free(c.working.arcs, w) || !cells.all_free(before, w)) continue;
      PlacementOption o;
      o.cycle_index = ci;
      o.partner = other;
      o.wavelength = w;
      o.saving = verdict.candidate->saving;
      o.incremental_cost = c.hops() - o.saving;
      o.coding = std::move(verdict.candidate);
      out.push_back(std::move(o));
    }
  }
  return out;
}

inline void apply_coding(std::map<DemandId, Provision>& placed, Provision& mine,
                         const CodingCandidate& cand, DemandId partner) {
  Provision& q = placed.at(partner);
  mine.partner = partner;
  mine.coding_node = cand.coding_node;
  mine.shared_suffix = cand.shared_suffix;
  q.partner = mine.demand;
  q.coding_node = cand.coding_node;
  q.shared_suffix = cand.shared_suffix;
}

}  // namespace detail

/// Coding-aware heuristic. Demands are taken in coding_order(); each one
/// scores every (candidate cycle, unpaired same-destination partner) pair
/// that passes check_codeable and fits the partner's wavelength, and keeps
/// the best by option_better. The uncoded Suurballe cycle with first-fit is
/// the fallback and wins only when strictly cheaper. Pairings are final.
inline Plan plan_nc(const Topology& topo, const DemandSet& demands, const WavelengthGrid& grid,
                    const PlannerOptions& options = {}) {
  CycleCache cycles(topo, options.k);
  const std::vector<DemandId> order = coding_order(demands, cycles);
  std::map<NodeId, std::vector<DemandId>> group;
  for (DemandId id : order) group[demands.at(id).destination].push_back(id);

  const int width = detail::planning_width(grid, demands);
  detail::CellMap cells(topo.arc_count(), width);
  std::map<DemandId, Provision> placed;
  for (DemandId id : order) {
    const Demand& d = demands.at(id);
    const auto& cs = cycles.get(d.source, d.destination);

    std::optional<PlacementOption> best;
    if (auto w = cells.first_fit(cs.front().working.arcs, cs.front().protection.arcs)) {
      PlacementOption o;
      o.wavelength = *w;
      o.incremental_cost = cs.front().hops();
      best = o;
    }
    for (auto& o : detail::coded_options(d, cs, placed, group[d.destination], cells)) {
      if (!best || option_better(o, *best)) best = std::move(o);
    }
    if (!best) detail::exhausted(d, width);

    Provision mine = detail::uncoded(id, cs[best->cycle_index], best->wavelength);
    if (best->partner) detail::apply_coding(placed, mine, *best->coding, *best->partner);
    for (ArcId a : mine.working.arcs) cells.set(a, best->wavelength, true);
    for (ArcId a : mine.protection.arcs) cells.set(a, best->wavelength, true);
    placed.emplace(id, std::move(mine));
  }
  return detail::fit_to_grid(std::move(placed), order, demands, grid);
}

}  // namespace ncplan
