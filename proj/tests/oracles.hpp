#pragma once

// Brute-force reference implementations used as test oracles.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "ncplan/ncplan.hpp"

namespace oracle {

using namespace ncplan;

/// Every simple s->t path, in no particular order.
inline std::vector<Path> all_simple_paths(const Topology& topo, NodeId s, NodeId t) {
  std::vector<Path> out;
  std::vector<NodeId> stack{s};
  std::vector<bool> on(topo.node_count(), false);
  on[s] = true;
  std::function<void(NodeId)> walk = [&](NodeId at) {
    if (at == t) {
      out.push_back(make_path(topo, stack));
      return;
    }
    for (ArcId a : topo.out_arcs(at)) {
      NodeId next = topo.arc(a).to;
      if (on[next]) continue;
      on[next] = true;
      stack.push_back(next);
      walk(next);
      stack.pop_back();
      on[next] = false;
    }
  };
  walk(s);
  return out;
}

/// Minimum total length over all fiber-disjoint pairs of simple paths.
inline std::optional<double> min_disjoint_pair(const Topology& topo, NodeId s, NodeId t) {
  auto paths = all_simple_paths(topo, s, t);
  std::optional<double> best;
  for (std::size_t i = 0; i < paths.size(); ++i)
    for (std::size_t j = i + 1; j < paths.size(); ++j)
      if (fiber_disjoint(paths[i], paths[j])) {
        double total = paths[i].length + paths[j].length;
        if (!best || total < *best) best = total;
      }
  return best;
}

/// Shortest path by (length, node sequence) avoiding the given fibers.
inline std::optional<Path> best_path_avoiding(const std::vector<Path>& paths, const Path& avoid) {
  std::optional<Path> best;
  for (const Path& p : paths)
    if (fiber_disjoint(p, avoid) && (!best || path_less(p, *best))) best = p;
  return best;
}

/// The candidate-cycle set k_shortest_cycles draws from: the Suurballe
/// optimum, then (w, best protection avoiding w) for every simple w.
inline std::vector<Cycle> reference_cycles(const Topology& topo, NodeId s, NodeId t, int k) {
  auto best = suurballe_pair(topo, s, t);
  if (!best) return {};
  auto paths = all_simple_paths(topo, s, t);
  std::vector<Cycle> others;
  for (const Path& w : paths) {
    auto p = best_path_avoiding(paths, w);
    if (!p) continue;
    Cycle c = make_cycle(w, *p);
    if (c == *best) continue;
    if (std::find(others.begin(), others.end(), c) == others.end()) others.push_back(c);
  }
  std::sort(others.begin(), others.end(), cycle_less);
  std::vector<Cycle> out{*best};
  for (const Cycle& c : others) {
    if (static_cast<int>(out.size()) >= k) break;
    out.push_back(c);
  }
  return out;
}

/// Random graph on n nodes: each pair joined with probability p, integer
/// weights in [1, max_weight]. Not necessarily connected.
inline Topology random_graph(std::uint64_t seed, int n, double p, int max_weight) {
  SplitMix64 rng(seed);
  std::vector<Fiber> fibers;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) {
      const double draw = static_cast<double>(rng.next() >> 11) / 9007199254740992.0;
      if (draw < p) fibers.push_back({u, v, static_cast<double>(1 + rng.bounded(max_weight))});
    }
  return Topology("random" + std::to_string(seed), n, fibers);
}

/// 4-node ring A-B-C-D-A as nodes 0-1-2-3.
inline Topology ring4() {
  return Topology("ring", 4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}

/// Generated instances on the bundled topologies used by property tests.
struct Instance {
  Topology topo;
  DemandSet demands;
};

inline std::vector<Instance> benchmark_instances(int samples_per_load = 3) {
  std::vector<Instance> out;
  for (const auto& name : builtin_topology_names()) {
    Topology t = builtin_topology(name);
    for (double load : {0.3, 0.7})
      for (int s = 0; s < samples_per_load; ++s) out.push_back({t, generate_demands(t, load, 1, s)});
    out.push_back({t, generate_demands(t, 1.0, 1, 0)});
  }
  return out;
}

}  // namespace oracle
