#pragma once

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncplan/coding.hpp"
#include "ncplan/demands.hpp"
#include "ncplan/error.hpp"
#include "ncplan/ilp.hpp"
#include "ncplan/paths.hpp"
#include "ncplan/plan.hpp"
#include "ncplan/planner.hpp"
#include "ncplan/topology.hpp"

namespace ncplan {

struct ExactOptions {
  int k = 8;
  double time_limit_seconds = 600.0;
  std::size_t demand_cap = 40;
  bool use_bound = true;  ///< false: plain depth-first enumeration
};

struct ExactResult {
  Plan plan;
  bool optimal = false;  ///< search exhausted (relative to the k-cycle candidate sets)
  long nodes = 0;
  double seconds = 0.0;
};

namespace detail {

class ExactSearch {
 public:
  ExactSearch(const Topology& topo, const DemandSet& demands, const WavelengthGrid& grid, DesignMode mode,
              const ExactOptions& options)
      : demands_(demands),
        mode_(mode),
        options_(options),
        W_(grid.count),
        cycles_(topo, options.k),
        cells_(topo.arc_count(), grid.count) {
    if (mode == DesignMode::NC) {
      order_ = coding_order(demands, cycles_);
    } else {
      for (const Demand& d : demands.demands) {
        require_routable(cycles_.get(d.source, d.destination), d);
        order_.push_back(d.id);
      }
      std::stable_sort(order_.begin(), order_.end(), [&](DemandId a, DemandId b) {
        double la = cycles_of(a).front().total_length, lb = cycles_of(b).front().total_length;
        if (la != lb) return la > lb;
        return a < b;
      });
    }
    for (DemandId id : order_) group_[demands.at(id).destination].push_back(id);
    assigned_.assign(demands.size(), false);
    if (mode == DesignMode::NC) precompute_credit();
  }

  ExactResult run() {
    start_ = std::chrono::steady_clock::now();
    dfs(0, 0);
    ExactResult r;
    r.nodes = nodes_;
    r.seconds = elapsed();
    r.optimal = !timed_out_;
    if (!best_) {
      if (timed_out_) throw Error("time limit reached before any feasible plan was found");
      throw CapacityExhausted(order_.empty() ? 0 : order_.front(),
                              "no feasible assignment within " + std::to_string(W_) + " wavelengths");
    }
    r.plan = finalize_plan(*best_);
    return r;
  }

 private:
  struct Option {
    int cycle = 0;
    std::optional<DemandId> partner;
    int wavelength = 0;
    int cost = 0;
    int saving = 0;
    std::optional<CodingCandidate> coding;
  };

  const std::vector<Cycle>& cycles_of(DemandId id) {
    const Demand& d = demands_.at(id);
    return cycles_.get(d.source, d.destination);
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  // credit_[id][c][q]: best saving d could get on cycle c with partner q
  // (over all of q's cycles), ignoring wavelengths.
  void precompute_credit() {
    credit_.resize(demands_.size());
    for (const auto& [node, ids] : group_) {
      for (DemandId a : ids) {
        const auto& ca = cycles_of(a);
        credit_[a].assign(ca.size(), std::map<DemandId, int>{});
        for (std::size_t i = 0; i < ca.size(); ++i) {
          Provision pa = uncoded(a, ca[i], std::nullopt);
          for (DemandId b : ids) {
            if (b == a) continue;
            int best = 0;
            for (const Cycle& cb : cycles_of(b)) {
              auto v = check_codeable(pa, uncoded(b, cb, std::nullopt));
              if (v) best = std::max(best, v.candidate->saving);
            }
            if (best > 0) credit_[a][i][b] = best;
          }
        }
      }
    }
  }

  // Twice the admissible lower bound on the final cost.
  long half_bound() {
    long total = 0;
    for (const Demand& d : demands_.demands) {
      const DemandId id = d.id;
      if (assigned_[id]) {
        const Provision& p = placed_.at(id);
        if (p.coded()) {
          total += 2L * p.hops() - p.saving();
        } else {
          total += 2L * p.hops() - future_credit(id, placed_cycle_.at(id), true);
        }
      } else {
        long best = std::numeric_limits<long>::max();
        const auto& cs = cycles_of(id);
        for (std::size_t c = 0; c < cs.size(); ++c)
          best = std::min(best, 2L * cs[c].hops() - future_credit(id, static_cast<int>(c), false));
        total += best;
      }
    }
    return total;
  }

  // Largest saving still reachable by d on cycle c. A placed, unpaired
  // demand can only pair with a demand placed later.
  int future_credit(DemandId id, int c, bool placed) const {
    if (mode_ != DesignMode::NC) return 0;
    int best = 0;
    for (const auto& [q, s] : credit_[id][c]) {
      const bool open = !assigned_[q] || (!placed && !placed_.at(q).coded());
      if (open) best = std::max(best, s);
    }
    return best;
  }

  std::vector<Option> options_for(DemandId id) {
    const auto& cs = cycles_of(id);
    std::vector<Option> out;
    const int top = std::min(max_used_ + 1, W_ - 1);
    for (int c = 0; c < static_cast<int>(cs.size()); ++c) {
      for (int w = 0; w <= top; ++w) {
        if (!cells_.all_free(cs[c].working.arcs, w) || !cells_.all_free(cs[c].protection.arcs, w)) continue;
        Option o;
        o.cycle = c;
        o.wavelength = w;
        o.cost = cs[c].hops();
        out.push_back(o);
      }
    }
    if (mode_ == DesignMode::NC) {
      const Demand& d = demands_.at(id);
      std::vector<DemandId> partners;
      for (DemandId q : group_[d.destination])
        if (assigned_[q] && !placed_.at(q).coded()) partners.push_back(q);
      for (int c = 0; c < static_cast<int>(cs.size()); ++c) {
        for (DemandId q : partners) {
          const Provision& pq = placed_.at(q);
          Provision mine = uncoded(id, cs[c], pq.wavelength);
          auto v = check_codeable(mine, pq);
          if (!v) continue;
          const int w = *pq.wavelength;
          const std::size_t pre = cs[c].protection.arcs.size() - static_cast<std::size_t>(v.candidate->saving);
          if (!cells_.all_free(cs[c].working.arcs, w) ||
              !cells_.all_free(std::span<const ArcId>(cs[c].protection.arcs.data(), pre), w))
            continue;
          Option o;
          o.cycle = c;
          o.partner = q;
          o.wavelength = w;
          o.saving = v.candidate->saving;
          o.cost = cs[c].hops() - o.saving;
          o.coding = std::move(v.candidate);
          out.push_back(std::move(o));
        }
      }
    }
    std::stable_sort(out.begin(), out.end(), [](const Option& a, const Option& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      if (a.saving != b.saving) return a.saving > b.saving;
      const long pa = a.partner ? *a.partner : std::numeric_limits<int>::max();
      const long pb = b.partner ? *b.partner : std::numeric_limits<int>::max();
      if (pa != pb) return pa < pb;
      if (a.cycle != b.cycle) return a.cycle < b.cycle;
      return a.wavelength < b.wavelength;
    });
    return out;
  }

  void mark(const Provision& p, bool value) {
    const int w = *p.wavelength;
    for (ArcId a : p.working.arcs) cells_.set(a, w, value);
    const std::size_t stop = p.coded() ? p.coded_from() : p.protection.arcs.size();
    for (std::size_t i = 0; i < stop; ++i) cells_.set(p.protection.arcs[i], w, value);
  }

  void dfs(std::size_t depth, int cost) {
    if (timed_out_) return;
    if ((++nodes_ & 255) == 0 && elapsed() > options_.time_limit_seconds) {
      timed_out_ = true;
      return;
    }
    if (depth == order_.size()) {
      if (!best_ || cost < best_cost_) {
        best_ = placed_;
        best_cost_ = cost;
      }
      return;
    }
    if (best_ && options_.use_bound && (half_bound() + 1) / 2 >= best_cost_) return;

    const DemandId id = order_[depth];
    const auto& cs = cycles_of(id);
    for (const Option& o : options_for(id)) {
      if (timed_out_) return;
      Provision mine = uncoded(id, cs[o.cycle], o.wavelength);
      if (o.partner) apply_coding(placed_, mine, *o.coding, *o.partner);
      mark(mine, true);
      const int saved_max = max_used_;
      max_used_ = std::max(max_used_, o.wavelength);
      assigned_[id] = true;
      placed_cycle_[id] = o.cycle;
      placed_.emplace(id, std::move(mine));

      dfs(depth + 1, cost + o.cost);

      mark(placed_.at(id), false);
      placed_.erase(id);
      placed_cycle_.erase(id);
      assigned_[id] = false;
      max_used_ = saved_max;
      if (o.partner) {
        Provision& q = placed_.at(*o.partner);
        q.partner.reset();
        q.coding_node.reset();
        q.shared_suffix.reset();
      }
    }
  }

  const DemandSet& demands_;
  DesignMode mode_;
  ExactOptions options_;
  int W_;
  CycleCache cycles_;
  CellMap cells_;
  std::vector<DemandId> order_;
  std::map<NodeId, std::vector<DemandId>> group_;
  std::vector<std::vector<std::map<DemandId, int>>> credit_;

  std::vector<bool> assigned_;
  std::map<DemandId, Provision> placed_;
  std::map<DemandId, int> placed_cycle_;
  int max_used_ = -1;

  std::optional<std::map<DemandId, Provision>> best_;
  int best_cost_ = 0;
  long nodes_ = 0;
  bool timed_out_ = false;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Exact search over per-demand choices (candidate cycle, wavelength,
/// coding partner) by depth-first branch-and-bound. Children are tried in
/// the heuristic's preference order, so the first leaf reached is the
/// heuristic's own plan. Wavelengths are explored up to one past the
/// highest index in use (the rest are symmetric). The bound credits each
/// demand half of the largest saving it could still obtain; a coded pair
/// splits its saving evenly. Optimality is relative to the k-cycle sets.
inline ExactResult exact_solve(const Topology& topo, const DemandSet& demands, const WavelengthGrid& grid,
                               DesignMode mode, const ExactOptions& options = {}) {
  if (demands.size() > options.demand_cap)
    throw BudgetExceeded("exact search is capped at " + std::to_string(options.demand_cap) + " demands; got " +
                         std::to_string(demands.size()));
  if (options.k < 1) throw Error("k must be at least 1");
  return detail::ExactSearch(topo, demands, grid, mode, options).run();
}

}  // namespace ncplan
