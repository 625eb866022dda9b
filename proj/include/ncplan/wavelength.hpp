#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ncplan/demands.hpp"
#include "ncplan/plan.hpp"

namespace ncplan {

/// Re-assigns wavelengths of a routed plan so that at most `wavelengths`
/// indices are used, leaving routes and pairings untouched (cost depends on
/// neither). A coded pair is one colouring unit; two units conflict when
/// they share an arc. DSatur gives the start, TabuCol (fixed-seed
/// SplitMix64, bounded iterations) repairs it down to the target.
/// Returns false if no colouring was found; the plan is then unchanged.
inline bool recolor_wavelengths(std::map<DemandId, Provision>& provisions, int wavelengths,
                                long max_iterations = 200000) {
  std::map<DemandId, int> unit_of;
  std::vector<std::vector<DemandId>> members;
  std::vector<std::set<ArcId>> arcs;
  for (const auto& [id, p] : provisions) {
    int u;
    if (p.coded() && *p.partner < id && unit_of.count(*p.partner)) {
      u = unit_of[*p.partner];
    } else {
      u = static_cast<int>(members.size());
      members.emplace_back();
      arcs.emplace_back();
    }
    unit_of[id] = u;
    members[u].push_back(id);
    arcs[u].insert(p.working.arcs.begin(), p.working.arcs.end());
    arcs[u].insert(p.protection.arcs.begin(), p.protection.arcs.end());
  }
  const int n = static_cast<int>(members.size());
  if (n == 0) return true;

  std::map<ArcId, std::vector<int>> users;
  for (int u = 0; u < n; ++u)
    for (ArcId a : arcs[u]) users[a].push_back(u);
  std::vector<std::set<int>> adj_set(n);
  for (const auto& [a, us] : users)
    for (int x : us)
      for (int y : us)
        if (x != y) adj_set[x].insert(y);
  std::vector<std::vector<int>> adj(n);
  for (int u = 0; u < n; ++u) adj[u].assign(adj_set[u].begin(), adj_set[u].end());

  // DSatur: most distinct neighbour colours first, then degree, then unit index.
  std::vector<int> color(n, -1);
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    std::size_t pick_sat = 0, pick_deg = 0;
    for (int u = 0; u < n; ++u) {
      if (color[u] >= 0) continue;
      std::set<int> seen;
      for (int v : adj[u])
        if (color[v] >= 0) seen.insert(color[v]);
      if (pick < 0 || seen.size() > pick_sat || (seen.size() == pick_sat && adj[u].size() > pick_deg)) {
        pick = u;
        pick_sat = seen.size();
        pick_deg = adj[u].size();
      }
    }
    std::set<int> taken;
    for (int v : adj[pick])
      if (color[v] >= 0) taken.insert(color[v]);
    int c = 0;
    while (taken.count(c)) ++c;
    color[pick] = c;
  }

  // TabuCol on the target palette; out-of-range DSatur colours are folded in.
  const int k = wavelengths;
  for (int& c : color) c = std::min(c, k - 1);
  std::vector<std::vector<int>> clash(n, std::vector<int>(k, 0));
  for (int u = 0; u < n; ++u)
    for (int v : adj[u]) ++clash[u][color[v]];
  int conflicts = 0;
  for (int u = 0; u < n; ++u) conflicts += clash[u][color[u]];
  conflicts /= 2;
  int best = conflicts;
  std::vector<std::vector<long>> tabu_until(n, std::vector<long>(k, 0));
  SplitMix64 rng(0x5EEDC0102ULL);
  for (long it = 0; it < max_iterations && conflicts > 0; ++it) {
    int mv = -1, mc = -1, md = 0;
    std::uint64_t ties = 0;
    for (int u = 0; u < n; ++u) {
      if (clash[u][color[u]] == 0) continue;
      for (int c = 0; c < k; ++c) {
        if (c == color[u]) continue;
        const int delta = clash[u][c] - clash[u][color[u]];
        if (tabu_until[u][c] > it && conflicts + delta >= best) continue;
        if (mv < 0 || delta < md) {
          mv = u, mc = c, md = delta, ties = 1;
        } else if (delta == md && rng.bounded(++ties) == 0) {
          mv = u, mc = c;
        }
      }
    }
    if (mv < 0) continue;
    const int old = color[mv];
    color[mv] = mc;
    conflicts += md;
    for (int v : adj[mv]) {
      --clash[v][old];
      ++clash[v][mc];
    }
    tabu_until[mv][old] = it + 10 + static_cast<long>(rng.bounded(10)) + (6 * conflicts) / 10;
    best = std::min(best, conflicts);
  }
  if (conflicts > 0) return false;

  for (int u = 0; u < n; ++u)
    for (DemandId id : members[u]) provisions[id].wavelength = color[u];
  return true;
}

/// Highest wavelength index in use, or -1 for an empty plan.
inline int max_wavelength_index(const std::map<DemandId, Provision>& provisions) {
  int top = -1;
  for (const auto& [id, p] : provisions)
    if (p.wavelength) top = std::max(top, *p.wavelength);
  return top;
}

}  // namespace ncplan
