#pragma once

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ncplan/error.hpp"

namespace ncplan {

using NodeId = int;
using FiberId = int;
using ArcId = int;

/// Undirected fiber between two distinct nodes; stored with u < v.
struct Fiber {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 1.0;

  friend bool operator==(const Fiber&, const Fiber&) = default;
};

/// One direction of a fiber. Fiber f owns arcs 2f (u->v) and 2f+1 (v->u).
struct Arc {
  NodeId from = 0;
  NodeId to = 0;
  FiberId fiber = 0;
};

/// Number of wavelength channels carried by every fiber.
struct WavelengthGrid {
  int count = 40;

  explicit WavelengthGrid(int n = 40) : count(n) {
    if (n < 1) throw Error("wavelength grid needs at least one wavelength");
  }
};

/// Immutable node/fiber graph. Construction checks structure only
/// (ranges, self-loops, duplicates); survivability (2-edge-connectivity)
/// is checked by require_two_edge_connected(), which every loader calls.
class Topology {
 public:
  Topology() = default;

  Topology(std::string name, int node_count, std::vector<Fiber> fibers)
      : name_(std::move(name)), node_count_(node_count) {
    if (node_count < 1) throw Error("topology needs at least one node");
    std::set<std::pair<NodeId, NodeId>> seen;
    for (Fiber f : fibers) {
      if (f.u == f.v)
        throw Error("self-loop fiber " + std::to_string(f.u) + " " + std::to_string(f.v));
      if (f.u < 0 || f.v < 0 || f.u >= node_count || f.v >= node_count)
        throw Error("fiber endpoint out of range: " + std::to_string(f.u) + " " +
                    std::to_string(f.v));
      if (!(f.weight > 0.0)) throw Error("fiber weight must be positive");
      if (f.u > f.v) std::swap(f.u, f.v);
      if (!seen.insert({f.u, f.v}).second)
        throw Error("duplicate fiber " + std::to_string(f.u) + " " + std::to_string(f.v));
      fibers_.push_back(f);
    }
    out_.assign(node_count_, {});
    for (FiberId i = 0; i < fiber_count(); ++i) {
      const Fiber& f = fibers_[i];
      arcs_.push_back({f.u, f.v, i});
      arcs_.push_back({f.v, f.u, i});
      out_[f.u].push_back(2 * i);
      out_[f.v].push_back(2 * i + 1);
    }
    for (auto& list : out_) {
      std::sort(list.begin(), list.end(),
                [&](ArcId a, ArcId b) { return arcs_[a].to < arcs_[b].to; });
    }
  }

  const std::string& name() const noexcept { return name_; }
  int node_count() const noexcept { return node_count_; }
  int fiber_count() const noexcept { return static_cast<int>(fibers_.size()); }
  int arc_count() const noexcept { return static_cast<int>(arcs_.size()); }

  const std::vector<Fiber>& fibers() const noexcept { return fibers_; }
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  const Fiber& fiber(FiberId f) const { return fibers_.at(f); }
  const Arc& arc(ArcId a) const { return arcs_.at(a); }
  double arc_length(ArcId a) const { return fibers_.at(arcs_.at(a).fiber).weight; }

  /// Outgoing arcs of `n`, ordered by head node id.
  const std::vector<ArcId>& out_arcs(NodeId n) const { return out_.at(n); }
  int degree(NodeId n) const { return static_cast<int>(out_.at(n).size()); }

  std::optional<ArcId> arc_between(NodeId from, NodeId to) const {
    for (ArcId a : out_.at(from))
      if (arcs_[a].to == to) return a;
    return std::nullopt;
  }

  std::optional<FiberId> fiber_between(NodeId a, NodeId b) const {
    if (auto arc = arc_between(a, b)) return arcs_[*arc].fiber;
    return std::nullopt;
  }

  double average_degree() const {
    return 2.0 * fiber_count() / static_cast<double>(node_count_);
  }

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.node_count_ == b.node_count_ && a.fibers_ == b.fibers_;
  }

 private:
  std::string name_;
  int node_count_ = 0;
  std::vector<Fiber> fibers_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcId>> out_;
};

/// Fibers whose removal disconnects the graph (Tarjan low-link).
inline std::vector<FiberId> bridges(const Topology& topo) {
  const int n = topo.node_count();
  std::vector<int> order(n, -1), low(n, 0);
  std::vector<FiberId> result;
  int counter = 0;
  std::function<void(NodeId, FiberId)> visit = [&](NodeId node, FiberId via) {
    order[node] = low[node] = counter++;
    for (ArcId a : topo.out_arcs(node)) {
      const Arc& arc = topo.arc(a);
      if (arc.fiber == via) continue;
      if (order[arc.to] < 0) {
        visit(arc.to, arc.fiber);
        low[node] = std::min(low[node], low[arc.to]);
        if (low[arc.to] > order[node]) result.push_back(arc.fiber);
      } else {
        low[node] = std::min(low[node], order[arc.to]);
      }
    }
  };
  for (NodeId s = 0; s < n; ++s)
    if (order[s] < 0) visit(s, -1);
  std::sort(result.begin(), result.end());
  return result;
}

inline bool is_connected(const Topology& topo) {
  std::vector<bool> seen(topo.node_count(), false);
  std::vector<NodeId> stack{0};
  seen[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    for (ArcId a : topo.out_arcs(n)) {
      NodeId m = topo.arc(a).to;
      if (!seen[m]) {
        seen[m] = true;
        ++reached;
        stack.push_back(m);
      }
    }
  }
  return reached == topo.node_count();
}

inline bool is_two_edge_connected(const Topology& topo) {
  return topo.node_count() >= 2 && is_connected(topo) && bridges(topo).empty();
}

/// Throws ConnectivityError naming the first cut edge (or the disconnection).
inline void require_two_edge_connected(const Topology& topo) {
  if (topo.node_count() < 2) throw ConnectivityError("topology needs at least two nodes");
  if (!is_connected(topo)) throw ConnectivityError("topology '" + topo.name() + "' is disconnected");
  auto cut = bridges(topo);
  if (!cut.empty()) {
    const Fiber& f = topo.fiber(cut.front());
    throw ConnectivityError("topology '" + topo.name() + "' is not 2-edge-connected: fiber " +
                            std::to_string(f.u) + "-" + std::to_string(f.v) + " is a cut edge");
  }
}

namespace detail {

inline std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace detail

/// Parses the `node <id>` / `fiber <u> <v> [weight]` line format.
/// Does not check 2-edge-connectivity; see load_topology().
inline Topology parse_topology(std::istream& in, const std::string& name) {
  std::vector<bool> declared;
  std::vector<Fiber> fibers;
  std::set<std::pair<NodeId, NodeId>> seen;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream line(detail::strip_comment(raw));
    std::string keyword;
    if (!(line >> keyword)) continue;
    if (keyword == "node") {
      long long id;
      if (!(line >> id) || id < 0) throw ParseError(line_no, "expected 'node <id>'");
      if (id >= static_cast<long long>(declared.size())) declared.resize(id + 1, false);
      if (declared[id]) throw ParseError(line_no, "node " + std::to_string(id) + " declared twice");
      declared[id] = true;
    } else if (keyword == "fiber") {
      long long u, v;
      if (!(line >> u >> v)) throw ParseError(line_no, "expected 'fiber <u> <v> [weight]'");
      double weight = 1.0;
      std::string extra;
      if (line >> extra) {
        try {
          std::size_t used = 0;
          weight = std::stod(extra, &used);
          if (used != extra.size()) throw std::invalid_argument(extra);
        } catch (const std::exception&) {
          throw ParseError(line_no, "bad fiber weight '" + extra + "'");
        }
        if (!(weight > 0.0)) throw ParseError(line_no, "fiber weight must be positive");
      }
      if (line >> extra) throw ParseError(line_no, "trailing text after fiber");
      if (u == v) throw ParseError(line_no, "self-loop fiber " + std::to_string(u) + " " + std::to_string(v));
      for (long long x : {u, v}) {
        if (x < 0 || x >= static_cast<long long>(declared.size()) || !declared[x])
          throw ParseError(line_no, "fiber references undeclared node " + std::to_string(x));
      }
      std::pair<NodeId, NodeId> key{static_cast<NodeId>(std::min(u, v)), static_cast<NodeId>(std::max(u, v))};
      if (!seen.insert(key).second)
        throw ParseError(line_no, "duplicate fiber " + std::to_string(u) + " " + std::to_string(v));
      fibers.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), weight});
    } else {
      throw ParseError(line_no, "unknown keyword '" + keyword + "'");
    }
  }
  for (std::size_t i = 0; i < declared.size(); ++i)
    if (!declared[i]) throw ParseError(line_no, "node ids must be dense; missing node " + std::to_string(i));
  if (declared.empty()) throw ParseError(line_no, "no nodes declared");
  return Topology(name, static_cast<int>(declared.size()), std::move(fibers));
}

/// Canonical text form; parse_topology(write_topology(t)) == t.
inline void write_topology(std::ostream& out, const Topology& topo) {
  for (NodeId n = 0; n < topo.node_count(); ++n) out << "node " << n << '\n';
  for (const Fiber& f : topo.fibers()) {
    out << "fiber " << f.u << ' ' << f.v;
    if (f.weight != 1.0) out << ' ' << detail::format_number(f.weight);
    out << '\n';
  }
}

inline std::string to_text(const Topology& topo) {
  std::ostringstream out;
  write_topology(out, topo);
  return out.str();
}

inline Topology parse_topology_text(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  return parse_topology(in, name);
}

/// Reads and validates a topology file (including 2-edge-connectivity).
inline Topology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open topology file " + path.string());
  Topology topo = parse_topology(in, path.stem().string());
  require_two_edge_connected(topo);
  return topo;
}

}  // namespace ncplan
