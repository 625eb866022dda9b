#pragma once

#include <compare>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ncplan/demands.hpp"
#include "ncplan/error.hpp"
#include "ncplan/paths.hpp"
#include "ncplan/topology.hpp"

namespace ncplan {

/// Routing, wavelength and (optional) coding decision for one demand.
/// partner, coding_node and shared_suffix are all set or all empty.
struct Provision {
  DemandId demand = 0;
  Path working;
  Path protection;
  std::optional<int> wavelength;
  std::optional<DemandId> partner;
  std::optional<NodeId> coding_node;
  std::optional<Path> shared_suffix;

  bool coded() const noexcept { return partner.has_value(); }
  int hops() const noexcept { return working.hops() + protection.hops(); }
  int saving() const noexcept { return shared_suffix ? shared_suffix->hops() : 0; }

  /// Index in protection.arcs where the coded (merged) segment starts.
  std::size_t coded_from() const noexcept {
    return protection.arcs.size() - static_cast<std::size_t>(saving());
  }
};

enum class SignalKind { Working, Protection, Coded };

inline const char* to_string(SignalKind k) {
  switch (k) {
    case SignalKind::Working: return "working";
    case SignalKind::Protection: return "protection";
    case SignalKind::Coded: return "coded";
  }
  return "?";
}

struct Signal {
  DemandId demand = 0;
  SignalKind kind = SignalKind::Working;
  friend bool operator==(const Signal&, const Signal&) = default;
};

/// One wavelength on one directed arc.
struct Cell {
  ArcId arc = 0;
  int wavelength = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

using Occupancy = std::map<Cell, std::vector<Signal>>;

struct Plan {
  std::map<DemandId, Provision> provisions;
  Occupancy occupancy;
  int cost = 0;        ///< occupied (arc, wavelength) cells
  int coding_ops = 0;  ///< coded pairs
};

/// Signals each provision places on the grid. A coded pair's shared suffix
/// contributes one Coded signal per member to the same cells.
inline Occupancy compute_occupancy(const std::map<DemandId, Provision>& provisions) {
  Occupancy occ;
  for (const auto& [id, p] : provisions) {
    if (!p.wavelength) continue;
    const int w = *p.wavelength;
    for (ArcId a : p.working.arcs) occ[{a, w}].push_back({id, SignalKind::Working});
    const std::size_t from = p.coded() ? p.coded_from() : p.protection.arcs.size();
    for (std::size_t i = 0; i < p.protection.arcs.size(); ++i) {
      auto kind = i < from ? SignalKind::Protection : SignalKind::Coded;
      occ[{p.protection.arcs[i], w}].push_back({id, kind});
    }
  }
  return occ;
}

/// Fills occupancy, cost and coding_ops from the provisions.
inline Plan finalize_plan(std::map<DemandId, Provision> provisions) {
  Plan plan;
  plan.provisions = std::move(provisions);
  plan.occupancy = compute_occupancy(plan.provisions);
  plan.cost = static_cast<int>(plan.occupancy.size());
  int coded = 0;
  for (const auto& [id, p] : plan.provisions)
    if (p.coded()) ++coded;
  plan.coding_ops = coded / 2;
  return plan;
}

/// Σ(|working| + |protection|) − Σ over coded pairs of the saving.
inline int cost_by_identity(const Plan& plan) {
  int total = 0;
  for (const auto& [id, p] : plan.provisions) {
    total += p.hops();
    if (p.coded() && id < *p.partner) total -= p.saving();
  }
  return total;
}

namespace detail {

inline std::string join_nodes(const std::vector<NodeId>& nodes) {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(nodes[i]);
  }
  return out;
}

inline std::vector<NodeId> split_nodes(const std::string& text, int line_no) {
  std::vector<NodeId> nodes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, '-')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      nodes.push_back(v);
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad node list '" + text + "'");
    }
  }
  if (nodes.size() < 2) throw ParseError(line_no, "a route needs at least two nodes");
  return nodes;
}

inline int parse_int(const std::string& text, int line_no) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line_no, "expected an integer, got '" + text + "'");
  }
}

}  // namespace detail

/// Line format:
///   prov <demand> <wavelength> W:<n0-n1-...> P:<n0-...> [CODE partner=<id> node=<v>]
///   cost <int>
///   coding_ops <int>
/// An unassigned wavelength is written as '-'.
inline void write_plan(std::ostream& out, const Plan& plan) {
  for (const auto& [id, p] : plan.provisions) {
    out << "prov " << id << ' ';
    if (p.wavelength) out << *p.wavelength; else out << '-';
    out << " W:" << detail::join_nodes(p.working.nodes) << " P:" << detail::join_nodes(p.protection.nodes);
    if (p.coded()) out << " CODE partner=" << *p.partner << " node=" << *p.coding_node;
    out << '\n';
  }
  out << "cost " << plan.cost << '\n';
  out << "coding_ops " << plan.coding_ops << '\n';
}

inline std::string to_text(const Plan& plan) {
  std::ostringstream out;
  write_plan(out, plan);
  return out.str();
}

/// Parses the plan line format against a topology. The shared suffix of a
/// coded provision is its protection path from the coding node onward.
/// Structural consistency (partners, conditions, clashes) is left to
/// validate_plan; declared cost and coding_ops must match the recomputation.
inline Plan parse_plan(std::istream& in, const Topology& topo) {
  std::map<DemandId, Provision> provisions;
  std::optional<int> declared_cost, declared_ops;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream line(detail::strip_comment(raw));
    std::string keyword;
    if (!(line >> keyword)) continue;
    if (keyword == "cost" || keyword == "coding_ops") {
      std::string value;
      if (!(line >> value)) throw ParseError(line_no, "missing value for " + keyword);
      (keyword == "cost" ? declared_cost : declared_ops) = detail::parse_int(value, line_no);
      continue;
    }
    if (keyword != "prov") throw ParseError(line_no, "unknown keyword '" + keyword + "'");
    std::string id_text, wl_text, w_text, p_text;
    if (!(line >> id_text >> wl_text >> w_text >> p_text))
      throw ParseError(line_no, "expected 'prov <demand> <wavelength> W:<route> P:<route>'");
    Provision prov;
    prov.demand = detail::parse_int(id_text, line_no);
    if (wl_text != "-") prov.wavelength = detail::parse_int(wl_text, line_no);
    if (w_text.rfind("W:", 0) != 0 || p_text.rfind("P:", 0) != 0)
      throw ParseError(line_no, "routes must be tagged W: and P:");
    try {
      prov.working = make_path(topo, detail::split_nodes(w_text.substr(2), line_no));
      prov.protection = make_path(topo, detail::split_nodes(p_text.substr(2), line_no));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
    std::string tag;
    if (line >> tag) {
      std::string partner_text, node_text;
      if (tag != "CODE" || !(line >> partner_text >> node_text) ||
          partner_text.rfind("partner=", 0) != 0 || node_text.rfind("node=", 0) != 0)
        throw ParseError(line_no, "expected 'CODE partner=<id> node=<v>'");
      prov.partner = detail::parse_int(partner_text.substr(8), line_no);
      prov.coding_node = detail::parse_int(node_text.substr(5), line_no);
      const auto& nodes = prov.protection.nodes;
      auto at = std::find(nodes.begin(), nodes.end(), *prov.coding_node);
      if (at == nodes.end() || at + 1 == nodes.end())
        throw ParseError(line_no, "coding node must lie on the protection path before its end");
      prov.shared_suffix = make_path(topo, std::vector<NodeId>(at, nodes.end()));
    }
    if (line >> tag) throw ParseError(line_no, "trailing text '" + tag + "'");
    if (!provisions.emplace(prov.demand, std::move(prov)).second)
      throw ParseError(line_no, "duplicate provision");
  }
  Plan plan = finalize_plan(std::move(provisions));
  if (declared_cost && *declared_cost != plan.cost)
    throw ParseError(line_no, "declared cost " + std::to_string(*declared_cost) +
                                  " differs from occupied cells " + std::to_string(plan.cost));
  if (declared_ops && *declared_ops != plan.coding_ops)
    throw ParseError(line_no, "declared coding_ops differs from coded pairs");
  return plan;
}

inline Plan parse_plan_text(const std::string& text, const Topology& topo) {
  std::istringstream in(text);
  return parse_plan(in, topo);
}

inline Plan load_plan(const std::filesystem::path& path, const Topology& topo) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open plan file " + path.string());
  return parse_plan(in, topo);
}

/// Demand set implied by a plan's routes (used when only a plan file is at hand).
inline DemandSet demands_of(const Plan& plan) {
  DemandSet set;
  for (const auto& [id, p] : plan.provisions)
    set.demands.push_back({id, p.working.source(), p.working.destination()});
  return set;
}

}  // namespace ncplan
