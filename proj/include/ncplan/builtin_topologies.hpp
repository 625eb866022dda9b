#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ncplan/topology.hpp"

namespace ncplan {

namespace detail {

// Mirrors data/topologies/*.topo; the topology tests compare the two.
inline constexpr std::string_view k_six_node_topo = R"topo(# Six-node, 3-regular prism: triangles {0,1,2} and {3,4,5} joined by 0-3, 1-4, 2-5.
node 0
node 1
node 2
node 3
node 4
node 5
fiber 0 1
fiber 1 2
fiber 0 2
fiber 3 4
fiber 4 5
fiber 3 5
fiber 0 3
fiber 1 4
fiber 2 5
)topo";

inline constexpr std::string_view k_nsfnet_topo = R"topo(# NSFNET T1 backbone, 14 nodes / 21 fibers (hop-count weights).
node 0   # Seattle, WA
node 1   # Palo Alto, CA
node 2   # San Diego, CA
node 3   # Salt Lake City, UT
node 4   # Boulder, CO
node 5   # Houston, TX
node 6   # Lincoln, NE
node 7   # Champaign, IL
node 8   # Pittsburgh, PA
node 9   # Atlanta, GA
node 10  # Ann Arbor, MI
node 11  # Ithaca, NY
node 12  # College Park, MD
node 13  # Princeton, NJ
fiber 0 1
fiber 0 2
fiber 0 7
fiber 1 2
fiber 1 3
fiber 2 5
fiber 3 4
fiber 3 10
fiber 4 5
fiber 4 6
fiber 5 9
fiber 5 12
fiber 6 7
fiber 7 8
fiber 8 9
fiber 8 11
fiber 8 13
fiber 10 11
fiber 10 13
fiber 11 12
fiber 12 13
)topo";

inline constexpr std::string_view k_cost239_topo = R"topo(# COST239 pan-European network, 11 nodes / 26 fibers (hop-count weights).
node 0   # London
node 1   # Amsterdam
node 2   # Berlin
node 3   # Brussels
node 4   # Copenhagen
node 5   # Luxembourg
node 6   # Milan
node 7   # Paris
node 8   # Prague
node 9   # Vienna
node 10  # Zurich
fiber 0 1
fiber 0 3
fiber 0 4
fiber 0 7
fiber 1 2
fiber 1 3
fiber 1 4
fiber 1 5
fiber 2 4
fiber 2 7
fiber 2 8
fiber 2 9
fiber 3 5
fiber 3 6
fiber 3 7
fiber 4 8
fiber 5 7
fiber 5 8
fiber 5 10
fiber 6 7
fiber 6 9
fiber 6 10
fiber 7 10
fiber 8 9
fiber 8 10
fiber 9 10
)topo";

}  // namespace detail

inline std::vector<std::string> builtin_topology_names() { return {"six_node", "nsfnet", "cost239"}; }

/// One of the bundled reference topologies: six_node (3-regular prism),
/// nsfnet (14 nodes / 21 fibers) or cost239 (11 nodes / 26 fibers).
inline Topology builtin_topology(const std::string& name) {
  std::string_view text;
  if (name == "six_node") text = detail::k_six_node_topo;
  else if (name == "nsfnet") text = detail::k_nsfnet_topo;
  else if (name == "cost239") text = detail::k_cost239_topo;
  else throw Error("unknown builtin topology '" + name + "' (expected six_node, nsfnet or cost239)");
  Topology topo = parse_topology_text(std::string(text), name);
  require_two_edge_connected(topo);
  return topo;
}

/// A builtin name or a path to a topology file.
inline Topology resolve_topology(const std::string& name_or_path) {
  for (const auto& n : builtin_topology_names())
    if (n == name_or_path) return builtin_topology(n);
  return load_topology(name_or_path);
}

}  // namespace ncplan
