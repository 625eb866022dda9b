#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ncplan/error.hpp"
#include "ncplan/topology.hpp"

namespace ncplan {

/// Fiber carrying an arc (arcs 2f and 2f+1 belong to fiber f).
constexpr FiberId fiber_of(ArcId a) noexcept { return a / 2; }

/// Simple directed path: nodes[i] -> nodes[i+1] over arcs[i].
struct Path {
  std::vector<NodeId> nodes;
  std::vector<ArcId> arcs;
  double length = 0.0;

  bool empty() const noexcept { return arcs.empty(); }
  int hops() const noexcept { return static_cast<int>(arcs.size()); }
  NodeId source() const { return nodes.front(); }
  NodeId destination() const { return nodes.back(); }

  bool uses_fiber(FiberId f) const {
    return std::any_of(arcs.begin(), arcs.end(), [f](ArcId a) { return fiber_of(a) == f; });
  }

  std::vector<FiberId> fibers() const {
    std::vector<FiberId> out;
    out.reserve(arcs.size());
    for (ArcId a : arcs) out.push_back(fiber_of(a));
    return out;
  }

  friend bool operator==(const Path& a, const Path& b) { return a.nodes == b.nodes; }
};

/// Builds a path from a node sequence; throws if two consecutive nodes are
/// not joined by a fiber. A single node yields the empty path at that node.
inline Path make_path(const Topology& topo, const std::vector<NodeId>& nodes) {
  Path p;
  p.nodes = nodes;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    auto arc = topo.arc_between(nodes[i], nodes[i + 1]);
    if (!arc)
      throw Error("no fiber between " + std::to_string(nodes[i]) + " and " +
                  std::to_string(nodes[i + 1]));
    p.arcs.push_back(*arc);
    p.length += topo.arc_length(*arc);
  }
  return p;
}

inline bool is_simple(const Path& p) {
  std::set<NodeId> seen(p.nodes.begin(), p.nodes.end());
  return seen.size() == p.nodes.size();
}

inline bool fiber_disjoint(const Path& a, const Path& b) {
  std::set<FiberId> fa;
  for (ArcId x : a.arcs) fa.insert(fiber_of(x));
  return std::none_of(b.arcs.begin(), b.arcs.end(),
                      [&](ArcId x) { return fa.count(fiber_of(x)) > 0; });
}

/// Path order used for every tie-break: length, then node sequence.
inline bool path_less(const Path& a, const Path& b) {
  if (a.length != b.length) return a.length < b.length;
  return a.nodes < b.nodes;
}

/// A working path plus a fiber-disjoint protection path for one demand.
struct Cycle {
  Path working;
  Path protection;
  double total_length = 0.0;

  int hops() const noexcept { return working.hops() + protection.hops(); }

  friend bool operator==(const Cycle& a, const Cycle& b) {
    return a.working == b.working && a.protection == b.protection;
  }
};

inline Cycle make_cycle(Path working, Path protection) {
  Cycle c;
  c.total_length = working.length + protection.length;
  c.working = std::move(working);
  c.protection = std::move(protection);
  return c;
}

inline bool cycle_less(const Cycle& a, const Cycle& b) {
  if (a.total_length != b.total_length) return a.total_length < b.total_length;
  if (a.working.nodes != b.working.nodes) return path_less(a.working, b.working);
  return a.protection.nodes < b.protection.nodes;
}

using FiberSet = std::set<FiberId>;

namespace detail {

constexpr double kEps = 1e-9;

/// Dijkstra over non-negative arc lengths with excluded fibers and nodes.
/// Among equal-length routes the lexicographically smallest node sequence
/// wins; this is well defined because all fiber lengths are positive.
inline std::optional<Path> dijkstra(const Topology& topo, NodeId s, NodeId t,
                                    const std::vector<bool>& fiber_off,
                                    const std::vector<bool>& node_off) {
  const int n = topo.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<std::vector<NodeId>> route(n);
  std::vector<bool> done(n, false);
  dist[s] = 0.0;
  route[s] = {s};
  for (;;) {
    NodeId u = -1;
    for (NodeId i = 0; i < n; ++i) {
      if (done[i] || dist[i] == inf) continue;
      if (u < 0 || dist[i] < dist[u] - kEps ||
          (dist[i] <= dist[u] + kEps && route[i] < route[u]))
        u = i;
    }
    if (u < 0 || u == t) break;
    done[u] = true;
    for (ArcId a : topo.out_arcs(u)) {
      const Arc& arc = topo.arc(a);
      if (fiber_off[arc.fiber] || node_off[arc.to] || done[arc.to]) continue;
      double cand = dist[u] + topo.arc_length(a);
      bool better = cand < dist[arc.to] - kEps;
      if (!better && cand <= dist[arc.to] + kEps) {
        std::vector<NodeId> r = route[u];
        r.push_back(arc.to);
        better = r < route[arc.to];
      }
      if (better) {
        dist[arc.to] = cand;
        route[arc.to] = route[u];
        route[arc.to].push_back(arc.to);
      }
    }
  }
  if (dist[t] == inf) return std::nullopt;
  return make_path(topo, route[t]);
}

inline std::vector<bool> fiber_mask(const Topology& topo, const FiberSet& excluded) {
  std::vector<bool> mask(topo.fiber_count(), false);
  for (FiberId f : excluded)
    if (f >= 0 && f < topo.fiber_count()) mask[f] = true;
  return mask;
}

}  // namespace detail

/// Minimum-length simple s->t path avoiding `excluded` fibers; ties go to
/// the lexicographically smallest node sequence.
inline std::optional<Path> shortest_path(const Topology& topo, NodeId s, NodeId t,
                                         const FiberSet& excluded = {}) {
  if (s == t) throw Error("shortest_path needs distinct endpoints");
  return detail::dijkstra(topo, s, t, detail::fiber_mask(topo, excluded),
                          std::vector<bool>(topo.node_count(), false));
}

/// Yen's loopless k-shortest paths as a lazy generator. Paths come out in
/// nondecreasing length; pending candidates are ordered by path_less.
class YenPaths {
 public:
  YenPaths(const Topology& topo, NodeId s, NodeId t) : topo_(&topo), s_(s), t_(t) {
    if (s == t) throw Error("yen_k_shortest needs distinct endpoints");
  }

  std::optional<Path> next() {
    if (!started_) {
      started_ = true;
      auto first = shortest_path(*topo_, s_, t_);
      if (first) accept(std::move(*first));
      return found_.empty() ? std::nullopt : std::optional<Path>(found_.back());
    }
    if (found_.empty()) return std::nullopt;
    spur_from(found_.back());
    while (!pending_.empty()) {
      Path best = *pending_.begin();
      pending_.erase(pending_.begin());
      if (seen_.count(best.nodes)) continue;
      accept(std::move(best));
      return found_.back();
    }
    return std::nullopt;
  }

  const std::vector<Path>& found() const noexcept { return found_; }

 private:
  struct ByPathOrder {
    bool operator()(const Path& a, const Path& b) const { return path_less(a, b); }
  };

  void accept(Path p) {
    seen_.insert(p.nodes);
    found_.push_back(std::move(p));
  }

  void spur_from(const Path& last) {
    const Topology& topo = *topo_;
    for (std::size_t i = 0; i + 1 < last.nodes.size(); ++i) {
      const NodeId spur = last.nodes[i];
      std::vector<NodeId> root(last.nodes.begin(), last.nodes.begin() + i + 1);
      std::vector<bool> fiber_off(topo.fiber_count(), false);
      std::vector<bool> node_off(topo.node_count(), false);
      for (const Path& p : found_) {
        if (p.nodes.size() > i + 1 && std::equal(root.begin(), root.end(), p.nodes.begin()))
          fiber_off[fiber_of(p.arcs[i])] = true;
      }
      for (std::size_t j = 0; j < i; ++j) node_off[root[j]] = true;
      auto tail = detail::dijkstra(topo, spur, t_, fiber_off, node_off);
      if (!tail) continue;
      std::vector<NodeId> nodes = root;
      nodes.insert(nodes.end(), tail->nodes.begin() + 1, tail->nodes.end());
      if (!seen_.count(nodes)) pending_.insert(make_path(topo, nodes));
    }
  }

  const Topology* topo_;
  NodeId s_, t_;
  bool started_ = false;
  std::vector<Path> found_;
  std::set<std::vector<NodeId>> seen_;
  std::set<Path, ByPathOrder> pending_;
};

/// Up to k distinct simple s->t paths in nondecreasing length.
inline std::vector<Path> yen_k_shortest(const Topology& topo, NodeId s, NodeId t, int k) {
  if (k < 1) throw Error("k must be at least 1");
  YenPaths gen(topo, s, t);
  std::vector<Path> out;
  while (static_cast<int>(out.size()) < k) {
    auto p = gen.next();
    if (!p) break;
    out.push_back(std::move(*p));
  }
  return out;
}

/// Minimum-total-length pair of fiber-disjoint s->t paths (Suurballe's
/// problem, solved with Bhandari's undirected variant): shortest path,
/// reverse-and-negate its arcs, Bellman-Ford for the second path, cancel
/// opposite traversals, then split the remaining arcs into two routes.
/// The shorter route (ties: smaller node sequence) becomes the working path.
inline std::optional<Cycle> suurballe_pair(const Topology& topo, NodeId s, NodeId t) {
  if (s == t) throw Error("suurballe_pair needs distinct endpoints");
  auto first = shortest_path(topo, s, t);
  if (!first) return std::nullopt;

  const int n = topo.node_count();
  std::vector<bool> on_first(topo.arc_count(), false);
  for (ArcId a : first->arcs) on_first[a] = true;
  auto reversed = [](ArcId a) { return a ^ 1; };

  // Residual costs: forward arcs of the first path are gone, their reverses
  // cost -length, every other arc keeps its length.
  std::vector<double> cost(topo.arc_count());
  std::vector<bool> usable(topo.arc_count(), true);
  for (ArcId a = 0; a < topo.arc_count(); ++a) {
    if (on_first[a]) {
      usable[a] = false;
    } else if (on_first[reversed(a)]) {
      cost[a] = -topo.arc_length(a);
    } else {
      cost[a] = topo.arc_length(a);
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<ArcId> pred(n, -1);
  dist[s] = 0.0;
  for (int round = 0; round < n - 1; ++round) {
    bool changed = false;
    for (ArcId a = 0; a < topo.arc_count(); ++a) {
      if (!usable[a]) continue;
      const Arc& arc = topo.arc(a);
      if (dist[arc.from] == inf || arc.to == s) continue;
      double cand = dist[arc.from] + cost[a];
      if (cand < dist[arc.to] - detail::kEps) {
        dist[arc.to] = cand;
        pred[arc.to] = a;
        changed = true;
      }
    }
    if (!changed) break;
  }
  if (dist[t] == inf) return std::nullopt;

  std::vector<ArcId> second;
  for (NodeId v = t; v != s;) {
    ArcId a = pred[v];
    if (a < 0 || second.size() > static_cast<std::size_t>(topo.arc_count())) return std::nullopt;
    second.push_back(a);
    v = topo.arc(a).from;
  }

  std::vector<bool> keep(topo.arc_count(), false);
  for (ArcId a : first->arcs) keep[a] = true;
  for (ArcId a : second) {
    if (keep[reversed(a)]) {
      keep[reversed(a)] = false;
    } else {
      keep[a] = true;
    }
  }

  std::vector<Path> routes;
  for (int r = 0; r < 2; ++r) {
    std::vector<NodeId> nodes{s};
    NodeId at = s;
    while (at != t) {
      ArcId next = -1;
      for (ArcId a : topo.out_arcs(at))
        if (keep[a]) {
          next = a;
          break;
        }
      if (next < 0 || nodes.size() > static_cast<std::size_t>(n)) return std::nullopt;
      keep[next] = false;
      at = topo.arc(next).to;
      nodes.push_back(at);
    }
    routes.push_back(make_path(topo, nodes));
  }
  if (path_less(routes[1], routes[0])) std::swap(routes[0], routes[1]);
  return make_cycle(std::move(routes[0]), std::move(routes[1]));
}

/// Up to k cycles for (s,t). Element 0 is the suurballe_pair optimum; the
/// rest are the smallest (by cycle_less) members of
///   { (w, shortest path avoiding w's fibers) : w a simple s->t path },
/// excluding the optimum itself. Working paths are drawn lazily from Yen's
/// generator until no unseen working path can beat the current k-th cycle,
/// so the result is the exact top-k of a fixed ordered set and therefore
/// prefix-stable in k.
inline std::vector<Cycle> k_shortest_cycles(const Topology& topo, NodeId s, NodeId t, int k) {
  if (k < 1) throw Error("k must be at least 1");
  auto best = suurballe_pair(topo, s, t);
  if (!best) return {};
  std::vector<Cycle> out{*best};
  if (k == 1) return out;

  const double floor_protection = shortest_path(topo, s, t)->length;
  const std::size_t want = static_cast<std::size_t>(k - 1);
  std::vector<Cycle> others;
  YenPaths gen(topo, s, t);
  while (auto working = gen.next()) {
    if (others.size() >= want &&
        working->length + floor_protection > others[want - 1].total_length + detail::kEps)
      break;
    const auto fibers = working->fibers();
    FiberSet used(fibers.begin(), fibers.end());
    auto protection = shortest_path(topo, s, t, used);
    if (!protection) continue;
    Cycle c = make_cycle(std::move(*working), std::move(*protection));
    if (c == *best) continue;
    auto pos = std::lower_bound(others.begin(), others.end(), c, cycle_less);
    if (pos != others.end() && *pos == c) continue;
    others.insert(pos, std::move(c));
    if (others.size() > want) others.pop_back();
  }
  out.insert(out.end(), others.begin(), others.end());
  return out;
}

/// Per-(s,t) memo of k_shortest_cycles for a fixed topology and k.
class CycleCache {
 public:
  CycleCache(const Topology& topo, int k) : topo_(&topo), k_(k) {}

  const std::vector<Cycle>& get(NodeId s, NodeId t) {
    auto key = std::make_pair(s, t);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, k_shortest_cycles(*topo_, s, t, k_)).first;
    return it->second;
  }

  int k() const noexcept { return k_; }

 private:
  const Topology* topo_;
  int k_;
  std::map<std::pair<NodeId, NodeId>, std::vector<Cycle>> cache_;
};

}  // namespace ncplan
