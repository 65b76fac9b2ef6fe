#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "solitonflow/integrate.hpp"
#include "solitonflow/model.hpp"
#include "solitonflow/seed.hpp"

namespace solitonflow {

/// Configuration error with the offending field path baked into what().
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class ConfiguredSystem { warped, two_summands, xy };

const char* to_string(ConfiguredSystem s);

/// One experiment, as described by a JSON config file.  Exactly one of
/// `warped` (for warped/xy systems) or `two_summands`/preset is present.
struct RunConfig {
  ConfiguredSystem system = ConfiguredSystem::warped;
  Mode mode = Mode::soliton;
  std::optional<WarpedProductSpec> warped;
  std::optional<TwoSummandsSpec> two_summands;
  std::string preset_name;  // empty when the spec is explicit
  SolitonParams params;
  SeedConfig seed;
  IntegratorConfig integrator;
  bool project_constraint = false;
  std::string csv_path;
  std::string report_path;
};

/// Parse and validate a config from JSON text.  Throws ConfigError with a
/// field path on any violation.
RunConfig parse_run_config(const std::string& json_text);

/// Convenience: read the file, then parse.
RunConfig load_run_config(const std::string& path);

}  // namespace solitonflow
