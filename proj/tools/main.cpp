#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solitonflow/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"solitonflow - cohomogeneity-one steady soliton and Ricci-flat flows"};
  app.require_subcommand(1);

  solitonflow::RunOptions run_opt;
  auto* run = app.add_subcommand("run", "integrate a configured experiment, write CSV + report");
  run->add_option("--config", run_opt.config_paths, "config file (repeat to sweep)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", run_opt.out_override, "override the report output path");
  run->add_option("--decimate", run_opt.decimate_override, "keep every K-th sample");
  run->add_option("--threads", run_opt.max_threads,
                  "sweep parallelism cap (default: SOLITONFLOW_THREADS or all cores)");

  std::vector<int> cp_d;
  std::vector<double> cp_lambda;
  std::string cp_json;
  auto* cp = app.add_subcommand("critical-points", "stationary points of the phase-space flow");
  cp->add_option("--d", cp_d, "factor dimensions, e.g. --d 1 2 3")->required();
  cp->add_option("--lambda", cp_lambda, "Einstein constants, e.g. --lambda 0 1 1")->required();
  cp->add_option("--out", cp_json, "also write the table as JSON");

  std::string suite;
  auto* check = app.add_subcommand("check", "run a verification suite");
  check->add_option("--suite,suite", suite, "invariants | example1 | ricci-flat | two-summands | convergence-order")
      ->required();

  std::string cmp_config, cmp_json;
  double cmp_t_lo = 1.0, cmp_t_hi = 50.0;
  auto* cmp = app.add_subcommand("compare",
                                 "z-system vs phase-space trajectory deviation from one seed");
  cmp->add_option("--config", cmp_config, "warped soliton config")->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("--t-lo", cmp_t_lo, "comparison window start");
  cmp->add_option("--t-hi", cmp_t_hi, "comparison window end");
  cmp->add_option("--out", cmp_json, "write the deviation report as JSON");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return solitonflow::cmd_run(run_opt);
  if (cp->parsed()) return solitonflow::cmd_critical_points(cp_d, cp_lambda, cp_json);
  if (check->parsed()) return solitonflow::cmd_check(suite);
  if (cmp->parsed()) return solitonflow::cmd_compare(cmp_config, cmp_t_lo, cmp_t_hi, cmp_json);
  return solitonflow::kExitUsage;
}
