#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncplan/error.hpp"
#include "ncplan/paths.hpp"
#include "ncplan/plan.hpp"

namespace ncplan {

/// Maximal common trailing arc sequence of two paths ending at one node.
/// Returns an empty path (no arcs) when the last arcs differ.
inline Path common_suffix(const Path& p1, const Path& p2) {
  if (p1.nodes.empty() || p2.nodes.empty() || p1.destination() != p2.destination())
    throw Error("common_suffix: paths end at different nodes");
  std::size_t shared = 0;
  while (shared < p1.arcs.size() && shared < p2.arcs.size() &&
         p1.arcs[p1.arcs.size() - 1 - shared] == p2.arcs[p2.arcs.size() - 1 - shared])
    ++shared;
  Path out;
  out.nodes.assign(p1.nodes.end() - static_cast<std::ptrdiff_t>(shared + 1), p1.nodes.end());
  out.arcs.assign(p1.arcs.end() - static_cast<std::ptrdiff_t>(shared), p1.arcs.end());
  // Hop count; fiber weights are not at hand here.
  out.length = static_cast<double>(shared);
  return out;
}

/// The four codeability rules for XOR-merging two protection signals.
enum class CodingRule {
  CommonDestination,  // i
  SameWavelength,     // ii
  Disjointness,       // iii
  SharedSuffix,       // iv
};

inline const char* to_string(CodingRule r) {
  switch (r) {
    case CodingRule::CommonDestination: return "condition i";
    case CodingRule::SameWavelength: return "condition ii";
    case CodingRule::Disjointness: return "condition iii";
    case CodingRule::SharedSuffix: return "condition iv";
  }
  return "?";
}

struct CodingCandidate {
  DemandId demand_a = 0;
  DemandId demand_b = 0;
  NodeId coding_node = 0;
  Path shared_suffix;
  int saving = 0;
};

/// Either an accepted candidate or the first rule it breaks.
struct CodeabilityVerdict {
  std::optional<CodingCandidate> candidate;
  std::optional<CodingRule> violated;

  explicit operator bool() const noexcept { return candidate.has_value(); }
};

/// Checks conditions i-iv for pairing the protection signals of two routed
/// demands. Condition iii requires, besides each demand's own
/// working/protection disjointness, that w(a)⊥w(b), w(a)⊥p(b) and
/// w(b)⊥p(a) (fiber-disjoint). Condition ii compares assigned wavelengths;
/// when either is still unassigned it is treated as satisfiable and the
/// caller is responsible for finding a common free wavelength.
inline CodeabilityVerdict check_codeable(const Provision& a, const Provision& b) {
  CodeabilityVerdict v;
  if (a.working.destination() != b.working.destination() ||
      a.protection.destination() != b.protection.destination() ||
      a.working.destination() != a.protection.destination()) {
    v.violated = CodingRule::CommonDestination;
    return v;
  }
  if (a.wavelength && b.wavelength && *a.wavelength != *b.wavelength) {
    v.violated = CodingRule::SameWavelength;
    return v;
  }
  if (!fiber_disjoint(a.working, a.protection) || !fiber_disjoint(b.working, b.protection) ||
      !fiber_disjoint(a.working, b.working) || !fiber_disjoint(a.working, b.protection) ||
      !fiber_disjoint(b.working, a.protection)) {
    v.violated = CodingRule::Disjointness;
    return v;
  }
  Path suffix = common_suffix(a.protection, b.protection);
  if (suffix.empty()) {
    v.violated = CodingRule::SharedSuffix;
    return v;
  }
  CodingCandidate c;
  c.demand_a = a.demand;
  c.demand_b = b.demand;
  c.coding_node = suffix.source();
  c.saving = suffix.hops();
  c.shared_suffix = std::move(suffix);
  v.candidate = std::move(c);
  return v;
}

}  // namespace ncplan
