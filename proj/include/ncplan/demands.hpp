#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ncplan/error.hpp"
#include "ncplan/topology.hpp"

namespace ncplan {

using DemandId = int;

/// Unit-capacity (one wavelength) directed request.
struct Demand {
  DemandId id = 0;
  NodeId source = 0;
  NodeId destination = 0;

  friend bool operator==(const Demand&, const Demand&) = default;
};

struct DemandSet {
  std::vector<Demand> demands;
  double load_fraction = 1.0;
  std::uint64_t seed = 0;
  int sample_index = 0;

  std::size_t size() const noexcept { return demands.size(); }
  const Demand& at(DemandId id) const { return demands.at(static_cast<std::size_t>(id)); }
};

/// SplitMix64 (Steele, Lea, Flood 2014): 64-bit state, Weyl increment
/// 0x9E3779B97F4A7C15, finalizer multipliers 0xBF58476D1CE4E5B9 and
/// 0x94D049BB133111EB. Chosen because it is trivially portable.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform integer in [0, n), unbiased (rejects the short top range).
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t state_;
};

/// Initial generator state for (seed, sample). Distinct samples get
/// decorrelated streams rather than shifted copies of one stream.
inline std::uint64_t sample_stream_state(std::uint64_t seed, int sample_index) {
  return SplitMix64::mix(seed) ^
         SplitMix64::mix(static_cast<std::uint64_t>(sample_index) + 0x632BE59BD9B4E019ULL);
}

inline std::size_t demand_count_for_load(int node_count, double load_fraction) {
  const double pairs = static_cast<double>(node_count) * (node_count - 1);
  return static_cast<std::size_t>(std::llround(load_fraction * pairs));
}

/// Samples round(load * N * (N-1)) distinct ordered node pairs without
/// replacement: a partial Fisher-Yates shuffle over the pairs in
/// lexicographic (source, destination) order. The chosen pairs are
/// re-sorted lexicographically and numbered 0..m-1. For a fixed
/// (seed, sample) a smaller load selects a prefix of the same shuffle,
/// so demand sets are nested across loads.
inline DemandSet generate_demands(const Topology& topo, double load_fraction, std::uint64_t seed,
                                  int sample_index) {
  if (!(load_fraction > 0.0 && load_fraction <= 1.0))
    throw Error("load fraction must lie in (0, 1]");
  const int n = topo.node_count();
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId s = 0; s < n; ++s)
    for (NodeId t = 0; t < n; ++t)
      if (s != t) pairs.emplace_back(s, t);

  const std::size_t m = demand_count_for_load(n, load_fraction);
  SplitMix64 rng(sample_stream_state(seed, sample_index));
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.bounded(pairs.size() - i));
    std::swap(pairs[i], pairs[j]);
  }
  pairs.resize(m);
  std::sort(pairs.begin(), pairs.end());

  DemandSet set;
  set.load_fraction = load_fraction;
  set.seed = seed;
  set.sample_index = sample_index;
  for (std::size_t i = 0; i < m; ++i)
    set.demands.push_back({static_cast<DemandId>(i), pairs[i].first, pairs[i].second});
  return set;
}

/// Builds a DemandSet from explicit (source, destination) pairs; ids follow
/// input order. Pairs may repeat (used by tests of wavelength clashes).
inline DemandSet make_demands(const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  DemandSet set;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first == pairs[i].second) throw Error("demand source equals destination");
    set.demands.push_back({static_cast<DemandId>(i), pairs[i].first, pairs[i].second});
  }
  return set;
}

inline void write_demands(std::ostream& out, const DemandSet& set) {
  for (const Demand& d : set.demands)
    out << "demand " << d.id << ' ' << d.source << ' ' << d.destination << '\n';
}

inline std::string to_text(const DemandSet& set) {
  std::ostringstream out;
  write_demands(out, set);
  return out.str();
}

/// Parses `demand <id> <src> <dst>` lines. Ids must be 0..m-1 in order.
inline DemandSet parse_demands(std::istream& in, const Topology& topo) {
  DemandSet set;
  std::set<std::pair<NodeId, NodeId>> seen;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream line(detail::strip_comment(raw));
    std::string keyword;
    if (!(line >> keyword)) continue;
    if (keyword != "demand") throw ParseError(line_no, "unknown keyword '" + keyword + "'");
    long long id, s, t;
    if (!(line >> id >> s >> t)) throw ParseError(line_no, "expected 'demand <id> <src> <dst>'");
    if (id != static_cast<long long>(set.demands.size()))
      throw ParseError(line_no, "demand ids must be consecutive from 0");
    if (s < 0 || t < 0 || s >= topo.node_count() || t >= topo.node_count())
      throw ParseError(line_no, "demand endpoint out of range");
    if (s == t) throw ParseError(line_no, "demand source equals destination");
    if (!seen.insert({static_cast<NodeId>(s), static_cast<NodeId>(t)}).second)
      throw ParseError(line_no, "duplicate demand for node pair");
    set.demands.push_back({static_cast<DemandId>(id), static_cast<NodeId>(s), static_cast<NodeId>(t)});
  }
  const double pairs = static_cast<double>(topo.node_count()) * (topo.node_count() - 1);
  set.load_fraction = pairs > 0 ? static_cast<double>(set.demands.size()) / pairs : 0.0;
  return set;
}

inline DemandSet load_demands(const std::filesystem::path& path, const Topology& topo) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open demand file " + path.string());
  return parse_demands(in, topo);
}

}  // namespace ncplan
