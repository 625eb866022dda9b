// Command-line front end: plan, experiment, export-ilp, verify.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncplan/ncplan.hpp"

namespace {

using namespace ncplan;

struct InstanceArgs {
  std::string topology = "six_node";
  std::string demands;
  double load = 0.3;
  std::uint64_t seed = 1;
  int sample = 0;
  int wavelengths = 40;
};

void add_instance_options(CLI::App* app, InstanceArgs& a) {
  app->add_option("-t,--topology", a.topology, "builtin name (six_node, nsfnet, cost239) or .topo file")
      ->capture_default_str();
  app->add_option("-d,--demands", a.demands, "demand file; overrides --load/--seed/--sample");
  app->add_option("--load", a.load, "load fraction in (0, 1]")->capture_default_str();
  app->add_option("--seed", a.seed, "base seed")->capture_default_str();
  app->add_option("--sample", a.sample, "sample index")->capture_default_str();
  app->add_option("-w,--wavelengths", a.wavelengths, "wavelengths per fiber")->capture_default_str();
}

DemandSet instance_demands(const Topology& topo, const InstanceArgs& a) {
  if (!a.demands.empty()) return load_demands(a.demands, topo);
  return generate_demands(topo, a.load, a.seed, a.sample);
}

template <typename Fn>
void with_output(const std::string& path, Fn fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  fn(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Survivable WDM planning with XOR network-coded protection"};
  app.require_subcommand(1);

  InstanceArgs plan_args;
  std::string plan_mode = "nc";
  int plan_k = 8;
  double plan_time = 600.0;
  std::string plan_out;
  bool plan_quiet = false;
  auto* plan_cmd = app.add_subcommand("plan", "plan one instance and print the plan");
  add_instance_options(plan_cmd, plan_args);
  plan_cmd->add_option("-m,--mode", plan_mode, "wnc, nc or exact")->capture_default_str();
  plan_cmd->add_option("-k,--k", plan_k, "candidate cycles per demand")->capture_default_str();
  plan_cmd->add_option("--time-limit", plan_time, "seconds (exact mode)")->capture_default_str();
  plan_cmd->add_option("-o,--out", plan_out, "plan file (default stdout)");
  plan_cmd->add_flag("-q,--quiet", plan_quiet, "no summary on stderr");

  ExperimentConfig cfg;
  std::string cfg_path, exp_topology, exp_modes, exp_loads, exp_out = "results.csv";
  std::optional<int> exp_samples, exp_wavelengths, exp_k;
  std::optional<std::uint64_t> exp_seed;
  std::optional<double> exp_time;
  auto* exp_cmd = app.add_subcommand("experiment", "run WNC/NC/EXACT over seeded samples");
  exp_cmd->add_option("-c,--config", cfg_path, "key = value config file; flags override it");
  exp_cmd->add_option("-t,--topology", exp_topology, "builtin name or .topo file");
  exp_cmd->add_option("--load", exp_loads, "comma-separated load fractions");
  exp_cmd->add_option("--samples", exp_samples, "samples per load (full mesh always runs one)");
  exp_cmd->add_option("--seed", exp_seed, "base seed");
  exp_cmd->add_option("-w,--wavelengths", exp_wavelengths, "wavelengths per fiber");
  exp_cmd->add_option("-k,--k", exp_k, "candidate cycles per demand");
  exp_cmd->add_option("--modes", exp_modes, "comma-separated subset of WNC,NC,EXACT");
  exp_cmd->add_option("--time-limit", exp_time, "seconds per EXACT solve");
  exp_cmd->add_option("-o,--out", exp_out, "CSV output path")->capture_default_str();

  InstanceArgs ilp_args;
  std::string ilp_mode = "wnc", ilp_out;
  std::size_t ilp_budget = ModelOptions{}.max_variables;
  auto* ilp_cmd = app.add_subcommand("export-ilp", "write the edge-based ILP in LP format");
  add_instance_options(ilp_cmd, ilp_args);
  ilp_cmd->add_option("-m,--mode", ilp_mode, "wnc or nc")->capture_default_str();
  ilp_cmd->add_option("--max-variables", ilp_budget, "variable budget")->capture_default_str();
  ilp_cmd->add_option("-o,--out", ilp_out, "LP file (default stdout)");

  std::string verify_topology = "six_node", verify_plan, verify_demands, verify_out;
  int verify_wavelengths = 40;
  auto* verify_cmd = app.add_subcommand("verify", "single-fiber failure sweep of a plan file");
  verify_cmd->add_option("-t,--topology", verify_topology, "builtin name or .topo file")->capture_default_str();
  verify_cmd->add_option("plan", verify_plan, "plan file")->required();
  verify_cmd->add_option("-d,--demands", verify_demands, "demand file; also runs the plan validator");
  verify_cmd->add_option("-w,--wavelengths", verify_wavelengths, "wavelengths per fiber")->capture_default_str();
  verify_cmd->add_option("-o,--out", verify_out, "CSV report (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan_cmd) {
      const Topology topo = resolve_topology(plan_args.topology);
      const DemandSet demands = instance_demands(topo, plan_args);
      const WavelengthGrid grid(plan_args.wavelengths);
      ExperimentConfig one;
      one.k = plan_k;
      one.time_limit_seconds = plan_time;
      bool optimal = true;
      const Mode mode = parse_mode(plan_mode);
      const Plan plan = plan_checked(topo, demands, grid, mode, one, &optimal);
      with_output(plan_out, [&](std::ostream& out) { write_plan(out, plan); });
      if (!plan_quiet) {
        std::cerr << topo.name() << ": " << demands.size() << " demands, mode " << to_string(mode) << ", cost "
                  << plan.cost << ", coding ops " << plan.coding_ops;
        if (mode == Mode::EXACT) std::cerr << (optimal ? " (optimal)" : " (incumbent, time limit)");
        std::cerr << '\n';
      }
      return 0;
    }

    if (*exp_cmd) {
      if (!cfg_path.empty()) cfg = load_config(cfg_path);
      if (!exp_topology.empty()) cfg.topology = exp_topology;
      if (!exp_loads.empty()) {
        std::istringstream in("loads = " + exp_loads);
        cfg = parse_config(in, cfg);
      }
      if (!exp_modes.empty()) {
        std::istringstream in("modes = " + exp_modes);
        cfg = parse_config(in, cfg);
      }
      if (exp_samples) cfg.samples = *exp_samples;
      if (exp_seed) cfg.seed = *exp_seed;
      if (exp_wavelengths) cfg.wavelengths = *exp_wavelengths;
      if (exp_k) cfg.k = *exp_k;
      if (exp_time) cfg.time_limit_seconds = *exp_time;
      const ExperimentResult result = run_experiment(cfg);
      with_output(exp_out, [&](std::ostream& out) { write_csv(out, result); });
      write_table(std::cout, result);
      return 0;
    }

    if (*ilp_cmd) {
      const Topology topo = resolve_topology(ilp_args.topology);
      const DemandSet demands = instance_demands(topo, ilp_args);
      const Mode mode = parse_mode(ilp_mode);
      if (mode == Mode::EXACT) throw Error("export-ilp mode must be wnc or nc");
      ModelOptions mo;
      mo.max_variables = ilp_budget;
      const IlpModel model = build_model(topo, demands, WavelengthGrid(ilp_args.wavelengths),
                                         mode == Mode::WNC ? DesignMode::WNC : DesignMode::NC, mo);
      with_output(ilp_out, [&](std::ostream& out) { write_lp(out, model); });
      std::cerr << model.variable_count() << " binaries, " << model.constraints.size() << " rows\n";
      return 0;
    }

    if (*verify_cmd) {
      const Topology topo = resolve_topology(verify_topology);
      const Plan plan = load_plan(verify_plan, topo);
      int status = 0;
      if (!verify_demands.empty()) {
        const DemandSet demands = load_demands(verify_demands, topo);
        for (const Violation& v : validate_plan(topo, demands, WavelengthGrid(verify_wavelengths), plan)) {
          std::cerr << "violation: " << v << '\n';
          status = 1;
        }
      }
      with_output(verify_out, [&](std::ostream& out) { write_failure_csv(out, topo, plan); });
      const SurvivabilityResult r = verify_all_failures(topo, plan);
      if (r.passed) {
        std::cerr << "PASS: no demand lost under any single fiber failure\n";
      } else {
        const Fiber& f = topo.fiber(r.first_failure->failed_fiber);
        std::cerr << "FAIL: fiber " << f.u << '-' << f.v << " loses";
        for (const auto& [id, rec] : r.first_failure->per_demand)
          if (rec == Recovery::Lost) std::cerr << " d" << id;
        std::cerr << '\n';
        status = 1;
      }
      return status;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
