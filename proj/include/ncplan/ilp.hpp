#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ncplan/demands.hpp"
#include "ncplan/error.hpp"
#include "ncplan/plan.hpp"
#include "ncplan/topology.hpp"

namespace ncplan {

enum class DesignMode { WNC, NC };

inline const char* to_string(DesignMode m) { return m == DesignMode::WNC ? "WNC" : "NC"; }

enum class Sense { LessEqual, Equal };

/// Row of the model: Σ coef·x (sense) rhs, all variables binary.
struct Constraint {
  std::string name;
  std::vector<std::pair<int, int>> terms;  ///< (variable, coefficient)
  Sense sense = Sense::LessEqual;
  int rhs = 0;
};

/// Variable catalog of the edge-based formulation.
///
///   alpha[d][e][w]   working signal of d on arc e, wavelength w
///   beta[d][e][w]    own (pre-coding) protection signal of d
///   theta[d][w]      d uses wavelength w (one per demand, whole cycle)
///   z[d][v][e][w]    coded protection flow of d after encoding at node v
///   delta[d][v]      d is encoded at node v
///   f[d1][d2]        d1 and d2 (d1 < d2, same destination) are paired
///   gamma[e][w]      (e, w) is occupied; the objective sums these
///
/// z, delta and f exist only in NC mode. Variable ids are dense, in the
/// order alpha, beta, theta, z, delta, f, gamma.
class IlpVariables {
 public:
  int alpha(DemandId d, ArcId e, int w) const { return alpha0_ + (d * arcs_ + e) * waves_ + w; }
  int beta(DemandId d, ArcId e, int w) const { return beta0_ + (d * arcs_ + e) * waves_ + w; }
  int theta(DemandId d, int w) const { return theta0_ + d * waves_ + w; }
  int gamma(ArcId e, int w) const { return gamma0_ + e * waves_ + w; }

  /// -1 when absent (WNC mode, or v is the demand's destination).
  int z(DemandId d, NodeId v, ArcId e, int w) const {
    auto it = z_base_.find({d, v});
    return it == z_base_.end() ? -1 : it->second + e * waves_ + w;
  }
  int delta(DemandId d, NodeId v) const {
    auto it = delta_.find({d, v});
    return it == delta_.end() ? -1 : it->second;
  }
  int f(DemandId d1, DemandId d2) const {
    if (d1 > d2) std::swap(d1, d2);
    auto it = f_.find({d1, d2});
    return it == f_.end() ? -1 : it->second;
  }

  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t count() const noexcept { return names_.size(); }
  const std::map<std::pair<DemandId, DemandId>, int>& pairs() const noexcept { return f_; }

 private:
  friend class IlpBuilder;
  int arcs_ = 0, waves_ = 0;
  int alpha0_ = 0, beta0_ = 0, theta0_ = 0, gamma0_ = 0;
  std::map<std::pair<DemandId, NodeId>, int> z_base_;
  std::map<std::pair<DemandId, NodeId>, int> delta_;
  std::map<std::pair<DemandId, DemandId>, int> f_;
  std::vector<std::string> names_;
};

/// Constraint families:
///   C1 working flow conservation (alpha)
///   C2 protection flow conservation (beta to the coding node, z onward)
///   C3 own working/protection fiber-disjointness
///   C4 wavelength binding (signal <= theta, Σ_w theta = 1)
///   C5 pairing logic (at most one partner; Σ_v delta = Σ f)
///   C6 cross-disjointness of paired demands (condition iii)
///   C7 shared coded channel: equal coding node and equal z when paired (iv)
///   C8 equal wavelength when paired (condition ii)
///   C9 clash/occupancy: each cell holds one signal or one merged pair
/// Objective: minimise Σ gamma.
struct IlpModel {
  std::string topology;
  DesignMode mode = DesignMode::WNC;
  int demand_count = 0;
  int wavelengths = 0;
  IlpVariables vars;
  std::vector<Constraint> constraints;
  std::vector<int> objective;

  std::size_t variable_count() const noexcept { return vars.count(); }
};

struct ModelOptions {
  std::size_t max_variables = 2'000'000;
};

class IlpBuilder {
 public:
  IlpBuilder(const Topology& topo, const DemandSet& demands, const WavelengthGrid& grid, DesignMode mode,
             const ModelOptions& options)
      : topo_(topo), demands_(demands), W_(grid.count), mode_(mode), options_(options) {}

  IlpModel build() {
    IlpModel m;
    m.topology = topo_.name();
    m.mode = mode_;
    m.demand_count = static_cast<int>(demands_.size());
    m.wavelengths = W_;
    declare(m.vars);
    auto& rows = m.constraints;
    const IlpVariables& v = m.vars;
    const int E = topo_.arc_count();
    const int D = static_cast<int>(demands_.size());

    // C1 / C2: flow conservation.
    for (const Demand& d : demands_.demands) {
      for (NodeId n = 0; n < topo_.node_count(); ++n) {
        const int supply = n == d.source ? 1 : (n == d.destination ? -1 : 0);
        Constraint c1{"C1_d" + std::to_string(d.id) + "_n" + std::to_string(n), {}, Sense::Equal, supply};
        add_flow(c1, [&](ArcId e, int w) { return v.alpha(d.id, e, w); }, n);
        rows.push_back(std::move(c1));

        Constraint c2{"C2_beta_d" + std::to_string(d.id) + "_n" + std::to_string(n), {}, Sense::Equal, 0};
        add_flow(c2, [&](ArcId e, int w) { return v.beta(d.id, e, w); }, n);
        if (mode_ == DesignMode::WNC) {
          c2.rhs = supply;
        } else if (n == d.destination) {
          // out - in - Σ_v delta = -1
          for (NodeId u = 0; u < topo_.node_count(); ++u)
            if (int x = v.delta(d.id, u); x >= 0) c2.terms.push_back({x, -1});
          c2.rhs = -1;
        } else {
          // out - in + delta[n] = [n == s]
          c2.terms.push_back({v.delta(d.id, n), 1});
          c2.rhs = n == d.source ? 1 : 0;
        }
        rows.push_back(std::move(c2));
      }
      if (mode_ == DesignMode::NC) {
        for (NodeId u = 0; u < topo_.node_count(); ++u) {
          if (u == d.destination) continue;
          for (NodeId n = 0; n < topo_.node_count(); ++n) {
            Constraint c{"C2_z_d" + std::to_string(d.id) + "_v" + std::to_string(u) + "_n" + std::to_string(n),
                         {}, Sense::Equal, 0};
            add_flow(c, [&](ArcId e, int w) { return v.z(d.id, u, e, w); }, n);
            if (n == u) c.terms.push_back({v.delta(d.id, u), -1});
            if (n == d.destination) c.terms.push_back({v.delta(d.id, u), 1});
            rows.push_back(std::move(c));
          }
        }
      }
    }

    // C3: one fiber carries at most one of the demand's own signals.
    for (const Demand& d : demands_.demands) {
      for (FiberId f = 0; f < topo_.fiber_count(); ++f) {
        Constraint c{"C3_d" + std::to_string(d.id) + "_f" + std::to_string(f), {}, Sense::LessEqual, 1};
        for (ArcId e : {2 * f, 2 * f + 1})
          for (int w = 0; w < W_; ++w) {
            c.terms.push_back({v.alpha(d.id, e, w), 1});
            c.terms.push_back({v.beta(d.id, e, w), 1});
            for_each_z(v, d, e, w, [&](int x) { c.terms.push_back({x, 1}); });
          }
        rows.push_back(std::move(c));
      }
    }

    // C4: wavelength binding.
    for (const Demand& d : demands_.demands) {
      Constraint one{"C4_theta_d" + std::to_string(d.id), {}, Sense::Equal, 1};
      for (int w = 0; w < W_; ++w) one.terms.push_back({v.theta(d.id, w), 1});
      rows.push_back(std::move(one));
      for (ArcId e = 0; e < E; ++e)
        for (int w = 0; w < W_; ++w) {
          const std::string tag = "_d" + std::to_string(d.id) + "_e" + std::to_string(e) + "_w" + std::to_string(w);
          rows.push_back({"C4_alpha" + tag, {{v.alpha(d.id, e, w), 1}, {v.theta(d.id, w), -1}}, Sense::LessEqual, 0});
          rows.push_back({"C4_beta" + tag, {{v.beta(d.id, e, w), 1}, {v.theta(d.id, w), -1}}, Sense::LessEqual, 0});
          if (mode_ == DesignMode::NC) {
            for (NodeId u = 0; u < topo_.node_count(); ++u)
              if (int x = v.z(d.id, u, e, w); x >= 0)
                rows.push_back({"C4_z" + tag + "_v" + std::to_string(u), {{x, 1}, {v.theta(d.id, w), -1}},
                                Sense::LessEqual, 0});
          }
        }
    }

    if (mode_ == DesignMode::NC) add_pairing_rows(m);

    // C9: occupancy. WNC: Σ alpha + Σ beta <= gamma. NC doubles it so that a
    // paired z stream (two equal z terms) counts as one signal.
    for (ArcId e = 0; e < E; ++e)
      for (int w = 0; w < W_; ++w) {
        Constraint c{"C9_e" + std::to_string(e) + "_w" + std::to_string(w), {}, Sense::LessEqual, 0};
        const int scale = mode_ == DesignMode::NC ? 2 : 1;
        for (int d = 0; d < D; ++d) {
          c.terms.push_back({v.alpha(d, e, w), scale});
          c.terms.push_back({v.beta(d, e, w), scale});
          for_each_z(v, demands_.demands[d], e, w, [&](int x) { c.terms.push_back({x, 1}); });
        }
        c.terms.push_back({v.gamma(e, w), -scale});
        rows.push_back(std::move(c));
        m.objective.push_back(v.gamma(e, w));
      }
    return m;
  }

 private:
  void declare(IlpVariables& v) {
    const int D = static_cast<int>(demands_.size());
    const int E = topo_.arc_count();
    v.arcs_ = E;
    v.waves_ = W_;
    std::size_t total = static_cast<std::size_t>(D) * E * W_ * 2 + static_cast<std::size_t>(D) * W_ +
                        static_cast<std::size_t>(E) * W_;
    if (mode_ == DesignMode::NC) {
      total += static_cast<std::size_t>(D) * (topo_.node_count() - 1) * E * W_ + static_cast<std::size_t>(D) * (topo_.node_count() - 1);
      total += static_cast<std::size_t>(D) * D / 2;
    }
    if (total > options_.max_variables)
      throw BudgetExceeded("ILP needs about " + std::to_string(total) + " variables; budget is " +
                           std::to_string(options_.max_variables));

    auto& names = v.names_;
    auto ew = [](ArcId e, int w) { return "_e" + std::to_string(e) + "_w" + std::to_string(w); };
    v.alpha0_ = static_cast<int>(names.size());
    for (int d = 0; d < D; ++d)
      for (ArcId e = 0; e < E; ++e)
        for (int w = 0; w < W_; ++w) names.push_back("alpha_d" + std::to_string(d) + ew(e, w));
    v.beta0_ = static_cast<int>(names.size());
    for (int d = 0; d < D; ++d)
      for (ArcId e = 0; e < E; ++e)
        for (int w = 0; w < W_; ++w) names.push_back("beta_d" + std::to_string(d) + ew(e, w));
    v.theta0_ = static_cast<int>(names.size());
    for (int d = 0; d < D; ++d)
      for (int w = 0; w < W_; ++w) names.push_back("theta_d" + std::to_string(d) + "_w" + std::to_string(w));
    if (mode_ == DesignMode::NC) {
      for (const Demand& d : demands_.demands)
        for (NodeId u = 0; u < topo_.node_count(); ++u) {
          if (u == d.destination) continue;
          v.z_base_[{d.id, u}] = static_cast<int>(names.size());
          for (ArcId e = 0; e < E; ++e)
            for (int w = 0; w < W_; ++w)
              names.push_back("z_d" + std::to_string(d.id) + "_v" + std::to_string(u) + ew(e, w));
        }
      for (const Demand& d : demands_.demands)
        for (NodeId u = 0; u < topo_.node_count(); ++u) {
          if (u == d.destination) continue;
          v.delta_[{d.id, u}] = static_cast<int>(names.size());
          names.push_back("delta_d" + std::to_string(d.id) + "_v" + std::to_string(u));
        }
      for (const Demand& a : demands_.demands)
        for (const Demand& b : demands_.demands)
          if (a.id < b.id && a.destination == b.destination) {
            v.f_[{a.id, b.id}] = static_cast<int>(names.size());
            names.push_back("f_d" + std::to_string(a.id) + "_d" + std::to_string(b.id));
          }
    }
    v.gamma0_ = static_cast<int>(names.size());
    for (ArcId e = 0; e < E; ++e)
      for (int w = 0; w < W_; ++w) names.push_back("gamma" + ew(e, w));
  }

  template <typename VarOf>
  void add_flow(Constraint& c, VarOf var_of, NodeId n) const {
    for (ArcId e : topo_.out_arcs(n))
      for (int w = 0; w < W_; ++w) c.terms.push_back({var_of(e, w), 1});
    for (ArcId e : topo_.out_arcs(n))
      for (int w = 0; w < W_; ++w) c.terms.push_back({var_of(e ^ 1, w), -1});
  }

  template <typename Fn>
  void for_each_z(const IlpVariables& v, const Demand& d, ArcId e, int w, Fn fn) const {
    if (mode_ != DesignMode::NC) return;
    for (NodeId u = 0; u < topo_.node_count(); ++u)
      if (int x = v.z(d.id, u, e, w); x >= 0) fn(x);
  }

  // Σ_w over both arcs of fiber f of the working (or protection) signal of d.
  void fiber_usage(const IlpVariables& v, const Demand& d, FiberId f, bool working, int coef,
                   Constraint& c) const {
    for (ArcId e : {2 * f, 2 * f + 1})
      for (int w = 0; w < W_; ++w) {
        if (working) {
          c.terms.push_back({v.alpha(d.id, e, w), coef});
        } else {
          c.terms.push_back({v.beta(d.id, e, w), coef});
          for_each_z(v, d, e, w, [&](int x) { c.terms.push_back({x, coef}); });
        }
      }
  }

  void add_pairing_rows(IlpModel& m) const {
    const IlpVariables& v = m.vars;
    auto& rows = m.constraints;
    // C5
    for (const Demand& d : demands_.demands) {
      Constraint at_most{"C5_pair_d" + std::to_string(d.id), {}, Sense::LessEqual, 1};
      Constraint encode{"C5_encode_d" + std::to_string(d.id), {}, Sense::Equal, 0};
      for (NodeId u = 0; u < topo_.node_count(); ++u)
        if (int x = v.delta(d.id, u); x >= 0) encode.terms.push_back({x, 1});
      for (const auto& [key, x] : v.pairs())
        if (key.first == d.id || key.second == d.id) {
          at_most.terms.push_back({x, 1});
          encode.terms.push_back({x, -1});
        }
      if (!at_most.terms.empty()) rows.push_back(std::move(at_most));
      rows.push_back(std::move(encode));
    }
    for (const auto& [key, fx] : v.pairs()) {
      const Demand& a = demands_.at(key.first);
      const Demand& b = demands_.at(key.second);
      const std::string tag = "_d" + std::to_string(a.id) + "_d" + std::to_string(b.id);
      // C6: W_a + W_b + f <= 2, W_a + P_b + f <= 2, W_b + P_a + f <= 2 per fiber.
      for (FiberId f = 0; f < topo_.fiber_count(); ++f) {
        const std::string ft = tag + "_f" + std::to_string(f);
        Constraint ww{"C6_ww" + ft, {{fx, 1}}, Sense::LessEqual, 2};
        fiber_usage(v, a, f, true, 1, ww);
        fiber_usage(v, b, f, true, 1, ww);
        Constraint wp{"C6_wp" + ft, {{fx, 1}}, Sense::LessEqual, 2};
        fiber_usage(v, a, f, true, 1, wp);
        fiber_usage(v, b, f, false, 1, wp);
        Constraint pw{"C6_pw" + ft, {{fx, 1}}, Sense::LessEqual, 2};
        fiber_usage(v, b, f, true, 1, pw);
        fiber_usage(v, a, f, false, 1, pw);
        rows.push_back(std::move(ww));
        rows.push_back(std::move(wp));
        rows.push_back(std::move(pw));
      }
      // C7: same coding node and identical coded flow when paired.
      for (NodeId u = 0; u < topo_.node_count(); ++u) {
        const int da = v.delta(a.id, u), db = v.delta(b.id, u);
        if (da < 0 || db < 0) continue;
        const std::string ut = tag + "_v" + std::to_string(u);
        rows.push_back({"C7_node_ab" + ut, {{da, 1}, {db, -1}, {fx, 1}}, Sense::LessEqual, 1});
        rows.push_back({"C7_node_ba" + ut, {{db, 1}, {da, -1}, {fx, 1}}, Sense::LessEqual, 1});
        for (ArcId e = 0; e < topo_.arc_count(); ++e)
          for (int w = 0; w < W_; ++w) {
            const int za = v.z(a.id, u, e, w), zb = v.z(b.id, u, e, w);
            const std::string et = ut + "_e" + std::to_string(e) + "_w" + std::to_string(w);
            rows.push_back({"C7_z_ab" + et, {{za, 1}, {zb, -1}, {fx, 1}}, Sense::LessEqual, 1});
            rows.push_back({"C7_z_ba" + et, {{zb, 1}, {za, -1}, {fx, 1}}, Sense::LessEqual, 1});
          }
      }
      // C8: same wavelength when paired.
      for (int w = 0; w < W_; ++w) {
        const std::string wt = tag + "_w" + std::to_string(w);
        rows.push_back({"C8_ab" + wt, {{v.theta(a.id, w), 1}, {v.theta(b.id, w), -1}, {fx, 1}}, Sense::LessEqual, 1});
        rows.push_back({"C8_ba" + wt, {{v.theta(b.id, w), 1}, {v.theta(a.id, w), -1}, {fx, 1}}, Sense::LessEqual, 1});
      }
    }
  }

  const Topology& topo_;
  const DemandSet& demands_;
  int W_;
  DesignMode mode_;
  ModelOptions options_;
};

/// Edge-based ILP for the WNC or NC design. Demand ids must be 0..|D|-1.
inline IlpModel build_model(const Topology& topo, const DemandSet& demands, const WavelengthGrid& grid,
                            DesignMode mode, const ModelOptions& options = {}) {
  for (std::size_t i = 0; i < demands.size(); ++i)
    if (demands.demands[i].id != static_cast<DemandId>(i)) throw Error("demand ids must be 0..|D|-1");
  return IlpBuilder(topo, demands, grid, mode, options).build();
}

/// Writes the model in CPLEX LP text format (Minimize / Subject To /
/// Binaries / End). Output depends only on the model, so re-export is
/// byte-identical.
inline void write_lp(std::ostream& out, const IlpModel& m) {
  const auto& names = m.vars.names();
  auto emit_terms = [&](const std::vector<std::pair<int, int>>& terms) {
    int on_line = 0;
    bool first = true;
    for (const auto& [var, coef] : terms) {
      if (coef == 0) continue;
      if (on_line == 8) {
        out << "\n   ";
        on_line = 0;
      }
      if (coef < 0) out << (first ? "-" : " -");
      else if (!first) out << " +";
      const int mag = coef < 0 ? -coef : coef;
      out << ' ';
      if (mag != 1) out << mag << ' ';
      out << names[var];
      first = false;
      ++on_line;
    }
    if (first) out << " 0 " << names.front();
  };

  out << "\\ ncplan edge-based RWA model\n";
  out << "\\ topology " << m.topology << ", mode " << to_string(m.mode) << ", " << m.demand_count
      << " demands, " << m.wavelengths << " wavelengths\n";
  out << "Minimize\n obj:";
  std::vector<std::pair<int, int>> obj;
  for (int x : m.objective) obj.push_back({x, 1});
  emit_terms(obj);
  out << "\nSubject To\n";
  for (const Constraint& c : m.constraints) {
    out << ' ' << c.name << ':';
    emit_terms(c.terms);
    out << (c.sense == Sense::Equal ? " = " : " <= ") << c.rhs << '\n';
  }
  out << "Binaries\n";
  for (std::size_t i = 0; i < names.size(); ++i) out << ' ' << names[i] << '\n';
  out << "End\n";
}

inline void export_model(const IlpModel& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_lp(out, m);
  if (!out) throw Error("write failed for " + path.string());
}

/// 0/1 assignment encoding a plan in the model's variables.
inline std::vector<int> encode_plan(const IlpModel& m, const Plan& plan) {
  std::vector<int> x(m.variable_count(), 0);
  const IlpVariables& v = m.vars;
  for (const auto& [id, p] : plan.provisions) {
    if (!p.wavelength) throw Error("cannot encode a provision without wavelength");
    const int w = *p.wavelength;
    x[v.theta(id, w)] = 1;
    for (ArcId e : p.working.arcs) x[v.alpha(id, e, w)] = 1;
    const std::size_t from = p.coded() ? p.coded_from() : p.protection.arcs.size();
    for (std::size_t i = 0; i < p.protection.arcs.size(); ++i) {
      const ArcId e = p.protection.arcs[i];
      if (i < from) {
        x[v.beta(id, e, w)] = 1;
      } else {
        const int zx = v.z(id, *p.coding_node, e, w);
        if (zx < 0) throw Error("plan uses coding but the model has no z variables");
        x[zx] = 1;
      }
    }
    if (p.coded()) {
      x[v.delta(id, *p.coding_node)] = 1;
      x[v.f(id, *p.partner)] = 1;
    }
  }
  for (const auto& [cell, signals] : plan.occupancy) x[v.gamma(cell.arc, cell.wavelength)] = 1;
  return x;
}

/// Names of the rows an assignment violates.
inline std::vector<std::string> violated_rows(const IlpModel& m, const std::vector<int>& x) {
  std::vector<std::string> bad;
  for (const Constraint& c : m.constraints) {
    long lhs = 0;
    for (const auto& [var, coef] : c.terms) lhs += static_cast<long>(coef) * x.at(var);
    const bool ok = c.sense == Sense::Equal ? lhs == c.rhs : lhs <= c.rhs;
    if (!ok) bad.push_back(c.name);
  }
  return bad;
}

inline long objective_value(const IlpModel& m, const std::vector<int>& x) {
  long total = 0;
  for (int var : m.objective) total += x.at(var);
  return total;
}

}  // namespace ncplan
