#pragma once

#include <string>
#include <vector>

#include "solitonflow/run_config.hpp"

namespace solitonflow {

/// Exit-code contract shared by all subcommands:
/// 0 success, 1 usage/config error, 2 early termination.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitEarlyStop = 2;

struct RunOptions {
  std::vector<std::string> config_paths;
  std::string out_override;   // overrides output.report of a single run
  int decimate_override = 0;  // 0 = keep config value
  int max_threads = 0;        // 0 = SOLITONFLOW_THREADS or hardware
};

/// Execute one or more configured runs (CSV + JSON report per run).
/// Multiple configs fan out over a worker pool.
int cmd_run(const RunOptions& opt);

/// Print the stationary-point table for a warped-product spec; optionally
/// write it as JSON.
int cmd_critical_points(const std::vector<int>& d, const std::vector<double>& lambda,
                        const std::string& json_out);

/// Run a verification suite by name (see checks::suite_names), printing one
/// line per claim and a summary with wall time.
int cmd_check(const std::string& suite);

/// Integrate the metric-coordinate and phase-space systems from matching
/// seeds and report the reparameterized deviation.
int cmd_compare(const std::string& config_path, double t_lo, double t_hi,
                const std::string& json_out);

}  // namespace solitonflow
