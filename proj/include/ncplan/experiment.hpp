#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ncplan/builtin_topologies.hpp"
#include "ncplan/demands.hpp"
#include "ncplan/error.hpp"
#include "ncplan/exact.hpp"
#include "ncplan/plan.hpp"
#include "ncplan/planner.hpp"
#include "ncplan/survivability.hpp"
#include "ncplan/topology.hpp"
#include "ncplan/validate.hpp"

namespace ncplan {

enum class Mode { WNC, NC, EXACT };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::WNC: return "WNC";
    case Mode::NC: return "NC";
    case Mode::EXACT: return "EXACT";
  }
  return "?";
}

inline Mode parse_mode(const std::string& text) {
  std::string up;
  for (char c : text) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "WNC") return Mode::WNC;
  if (up == "NC") return Mode::NC;
  if (up == "EXACT") return Mode::EXACT;
  throw Error("unknown mode '" + text + "' (expected WNC, NC or EXACT)");
}

/// Relative cost reduction of NC over WNC in percent, rounded to one decimal.
inline double gain(int cost_wnc, int cost_nc) {
  if (cost_wnc <= 0) throw Error("gain: WNC cost must be positive");
  if (cost_nc > cost_wnc) throw Error("gain: NC cost exceeds WNC cost");
  const double raw = 100.0 * (cost_wnc - cost_nc) / cost_wnc;
  return std::round(raw * 10.0) / 10.0;
}

struct ExperimentConfig {
  std::string topology = "six_node";  ///< builtin name or .topo path
  std::vector<double> loads{0.3, 0.7, 1.0};
  int samples = 20;
  std::uint64_t seed = 1;
  int wavelengths = 40;
  int k = 8;
  std::vector<Mode> modes{Mode::WNC, Mode::NC};
  double time_limit_seconds = 600.0;

  void check() const {
    if (samples < 1) throw Error("samples must be at least 1");
    if (k < 1) throw Error("k must be at least 1");
    if (wavelengths < 1) throw Error("wavelengths must be at least 1");
    if (loads.empty()) throw Error("no loads given");
    for (double f : loads)
      if (!(f > 0.0 && f <= 1.0)) throw Error("load fractions must be in (0, 1]");
    if (modes.empty()) throw Error("no modes given");
  }

  /// Full mesh is a single deterministic demand set.
  int samples_for(double load) const { return load >= 1.0 ? 1 : samples; }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    double x = std::stod(s, &used);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  throw ParseError(line, "bad number '" + s + "'");
}

inline long long parse_integer(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    long long x = std::stoll(s, &used, 0);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  throw ParseError(line, "bad integer '" + s + "'");
}

}  // namespace detail

/// `key = value` lines with `#` comments. Keys: topology, loads, samples,
/// seed, wavelengths, k, modes, time_limit. Lists are comma-separated.
inline ExperimentConfig parse_config(std::istream& in, ExperimentConfig cfg = {}) {
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key == "topology") {
      cfg.topology = value;
    } else if (key == "loads") {
      cfg.loads.clear();
      for (const auto& s : detail::split_list(value)) cfg.loads.push_back(detail::parse_double(s, line_no));
    } else if (key == "samples") {
      cfg.samples = static_cast<int>(detail::parse_integer(value, line_no));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(detail::parse_integer(value, line_no));
    } else if (key == "wavelengths") {
      cfg.wavelengths = static_cast<int>(detail::parse_integer(value, line_no));
    } else if (key == "k") {
      cfg.k = static_cast<int>(detail::parse_integer(value, line_no));
    } else if (key == "modes") {
      cfg.modes.clear();
      for (const auto& s : detail::split_list(value)) cfg.modes.push_back(parse_mode(s));
    } else if (key == "time_limit") {
      cfg.time_limit_seconds = detail::parse_double(value, line_no);
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }
  cfg.check();
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  return parse_config(in);
}

/// One planner run on one sample.
struct SampleRecord {
  double load = 0.0;
  int sample = 0;
  Mode mode = Mode::WNC;
  int cost = 0;
  int coding_ops = 0;
  std::optional<double> gain_pct;  ///< vs the same sample's WNC cost
  bool optimal = true;             ///< EXACT only
};

/// Aggregates over the samples of one load.
struct ResultRow {
  std::string topology;
  double load = 0.0;
  int samples = 0;
  double mean_wnc = 0.0;
  double mean_nc = 0.0;
  double gain_max = 0.0;
  double gain_mean = 0.0;
  double mean_coding_ops = 0.0;
  std::optional<double> mean_exact;
  std::optional<double> exact_gain_mean;
  int exact_optimal = 0;
};

struct ExperimentResult {
  std::string topology;
  std::vector<SampleRecord> records;
  std::vector<ResultRow> rows;
};

/// Plans one sample in one mode and checks the plan before returning it.
inline Plan plan_checked(const Topology& topo, const DemandSet& demands, const WavelengthGrid& grid, Mode mode,
                         const ExperimentConfig& cfg, bool* optimal = nullptr) {
  Plan plan;
  switch (mode) {
    case Mode::WNC: plan = plan_wnc(topo, demands, grid, {cfg.k}); break;
    case Mode::NC: plan = plan_nc(topo, demands, grid, {cfg.k}); break;
    case Mode::EXACT: {
      ExactOptions eo;
      eo.k = cfg.k;
      eo.time_limit_seconds = cfg.time_limit_seconds;
      ExactResult r = exact_solve(topo, demands, grid, DesignMode::NC, eo);
      if (optimal) *optimal = r.optimal;
      plan = std::move(r.plan);
      break;
    }
  }
  auto violations = validate_plan(topo, demands, grid, plan);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << to_string(mode) << " plan is invalid: " << violations.front();
    throw Error(msg.str());
  }
  auto surv = verify_all_failures(topo, plan);
  if (!surv.passed) {
    const Fiber& f = topo.fiber(surv.first_failure->failed_fiber);
    throw Error(std::string(to_string(mode)) + " plan loses a demand when fiber " + std::to_string(f.u) + "-" +
                std::to_string(f.v) + " fails");
  }
  return plan;
}

/// Called with every recorded plan, after it passed validation and the
/// failure sweep.
using PlanObserver = std::function<void(const Topology&, const DemandSet&, const SampleRecord&, const Plan&)>;

inline ExperimentResult run_experiment(const ExperimentConfig& cfg, const PlanObserver& observer = {}) {
  cfg.check();
  const Topology topo = resolve_topology(cfg.topology);
  const WavelengthGrid grid(cfg.wavelengths);
  ExperimentResult result;
  result.topology = topo.name();

  for (double load : cfg.loads) {
    ResultRow row;
    row.topology = topo.name();
    row.load = load;
    row.samples = cfg.samples_for(load);
    std::vector<double> gains, exact_gains;
    double sum_wnc = 0, sum_nc = 0, sum_ops = 0, sum_exact = 0;
    int n_wnc = 0, n_nc = 0, n_exact = 0;
    for (int s = 0; s < row.samples; ++s) {
      const DemandSet demands = generate_demands(topo, load, cfg.seed, s);
      std::optional<int> wnc_cost;
      for (Mode mode : cfg.modes) {
        SampleRecord rec;
        rec.load = load;
        rec.sample = s;
        rec.mode = mode;
        Plan plan;
        try {
          plan = plan_checked(topo, demands, grid, mode, cfg, &rec.optimal);
        } catch (const Error& e) {
          std::ostringstream msg;
          msg << topo.name() << " load " << detail::format_number(load) << " sample " << s << ": " << e.what();
          throw Error(msg.str());
        }
        rec.cost = plan.cost;
        rec.coding_ops = plan.coding_ops;
        if (mode == Mode::WNC) {
          wnc_cost = plan.cost;
          sum_wnc += plan.cost;
          ++n_wnc;
        } else if (wnc_cost) {
          rec.gain_pct = gain(*wnc_cost, plan.cost);
        }
        if (mode == Mode::NC) {
          sum_nc += plan.cost;
          sum_ops += plan.coding_ops;
          ++n_nc;
          if (wnc_cost) gains.push_back(100.0 * (*wnc_cost - plan.cost) / *wnc_cost);
        }
        if (mode == Mode::EXACT) {
          sum_exact += plan.cost;
          ++n_exact;
          if (rec.optimal) ++row.exact_optimal;
          if (wnc_cost) exact_gains.push_back(100.0 * (*wnc_cost - plan.cost) / *wnc_cost);
        }
        if (observer) observer(topo, demands, rec, plan);
        result.records.push_back(rec);
      }
    }
    if (n_wnc) row.mean_wnc = sum_wnc / n_wnc;
    if (n_nc) {
      row.mean_nc = sum_nc / n_nc;
      row.mean_coding_ops = sum_ops / n_nc;
    }
    if (!gains.empty()) {
      row.gain_max = *std::max_element(gains.begin(), gains.end());
      double total = 0;
      for (double g : gains) total += g;
      row.gain_mean = total / static_cast<double>(gains.size());
    }
    if (n_exact) row.mean_exact = sum_exact / n_exact;
    if (!exact_gains.empty()) {
      double total = 0;
      for (double g : exact_gains) total += g;
      row.exact_gain_mean = total / static_cast<double>(exact_gains.size());
    }
    result.rows.push_back(row);
  }
  return result;
}

/// Per-sample CSV; WNC rows leave gain_pct empty.
inline void write_csv(std::ostream& out, const ExperimentResult& r) {
  out << "topology,load,sample,mode,cost,coding_ops,gain_pct\n";
  for (const SampleRecord& rec : r.records) {
    out << r.topology << ',' << detail::format_number(rec.load) << ',' << rec.sample << ',' << to_string(rec.mode)
        << ',' << rec.cost << ',' << rec.coding_ops << ',';
    if (rec.gain_pct) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", *rec.gain_pct);
      out << buf;
    }
    out << '\n';
  }
}

inline void write_table(std::ostream& out, const ExperimentResult& r) {
  char buf[256];
  const bool exact = std::any_of(r.rows.begin(), r.rows.end(), [](const ResultRow& x) { return x.mean_exact; });
  std::snprintf(buf, sizeof buf, "%-10s %5s %7s %9s %9s %9s %9s %10s", "topology", "load", "samples", "WNC",
                "NC", "gain_max", "gain_mean", "coding_ops");
  out << buf;
  if (exact) out << "      EXACT exact_gain optimal";
  out << '\n';
  for (const ResultRow& x : r.rows) {
    std::snprintf(buf, sizeof buf, "%-10s %4.0f%% %7d %9.2f %9.2f %8.1f%% %8.1f%% %10.2f", x.topology.c_str(),
                  100.0 * x.load, x.samples, x.mean_wnc, x.mean_nc, x.gain_max, x.gain_mean, x.mean_coding_ops);
    out << buf;
    if (x.mean_exact) {
      std::snprintf(buf, sizeof buf, " %10.2f %9.1f%% %4d/%d", *x.mean_exact, x.exact_gain_mean.value_or(0.0),
                    x.exact_optimal, x.samples);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace ncplan
