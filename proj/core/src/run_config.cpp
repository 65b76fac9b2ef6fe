#include "solitonflow/run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace solitonflow {

using nlohmann::json;

const char* to_string(ConfiguredSystem s) {
  switch (s) {
    case ConfiguredSystem::warped: return "warped";
    case ConfiguredSystem::two_summands: return "two-summands";
    case ConfiguredSystem::xy: return "xy";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing field");
  return *it;
}

double need_number(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double opt_number(const json& j, const char* key, const std::string& path, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) fail(path + "." + key, "expected a number");
  return it->get<double>();
}

std::string need_string(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  RunConfig cfg;

  const std::string system = need_string(j, "system", "config");
  if (system == "warped") cfg.system = ConfiguredSystem::warped;
  else if (system == "two-summands") cfg.system = ConfiguredSystem::two_summands;
  else if (system == "xy") cfg.system = ConfiguredSystem::xy;
  else fail("config.system", "expected one of warped | two-summands | xy");

  const std::string mode = need_string(j, "mode", "config");
  if (mode == "soliton") cfg.mode = Mode::soliton;
  else if (mode == "ricci-flat") cfg.mode = Mode::ricci_flat;
  else fail("config.mode", "expected soliton | ricci-flat");

  const bool has_spec = j.contains("spec");
  const bool has_preset = j.contains("preset");
  if (has_spec == has_preset)
    fail("config", "exactly one of spec | preset must be present");

  if (cfg.system == ConfiguredSystem::two_summands) {
    if (has_preset) {
      const json& p = j["preset"];
      const std::string name = need_string(p, "name", "config.preset");
      const json& mj = need(p, "m", "config.preset");
      if (!mj.is_number_integer()) fail("config.preset.m", "expected an integer");
      const int m = mj.get<int>();
      try {
        if (name == "example2") cfg.two_summands = TwoSummandsSpec::twistor_orbit(m);
        else if (name == "example3") cfg.two_summands = TwoSummandsSpec::sp1_orbit(m);
        else fail("config.preset.name", "expected example2 | example3");
      } catch (const std::invalid_argument& e) {
        fail("config.preset", e.what());
      }
      cfg.preset_name = name;
    } else {
      const json& s = j["spec"];
      TwoSummandsSpec ts;
      const json& d1 = need(s, "d1", "config.spec");
      const json& d2 = need(s, "d2", "config.spec");
      if (!d1.is_number_integer() || !d2.is_number_integer())
        fail("config.spec", "d1, d2 must be integers");
      try {
        ts = TwoSummandsSpec(d1.get<int>(), d2.get<int>(),
                             need_number(s, "A2", "config.spec"),
                             need_number(s, "A3", "config.spec"));
      } catch (const std::invalid_argument& e) {
        fail("config", e.what());
      }
      cfg.two_summands = ts;
    }
  } else {
    if (has_preset) fail("config.preset", "presets exist only for the two-summands system");
    const json& s = j["spec"];
    const json& dj = need(s, "d", "config.spec");
    const json& lj = need(s, "lambda", "config.spec");
    if (!dj.is_array() || !lj.is_array())
      fail("config.spec", "d and lambda must be arrays");
    std::vector<int> d;
    std::vector<double> lambda;
    for (const auto& v : dj) {
      if (!v.is_number_integer()) fail("config.spec.d", "entries must be integers");
      d.push_back(v.get<int>());
    }
    for (const auto& v : lj) {
      if (!v.is_number()) fail("config.spec.lambda", "entries must be numbers");
      lambda.push_back(v.get<double>());
    }
    try {
      cfg.warped = WarpedProductSpec(std::move(d), std::move(lambda));
    } catch (const std::invalid_argument& e) {
      fail("config", e.what());
    }
  }

  if (j.contains("params")) {
    const json& p = j["params"];
    cfg.params.C = opt_number(p, "C", "config.params", cfg.mode == Mode::soliton ? -1.0 : 0.0);
    cfg.params.epsilon = opt_number(p, "epsilon", "config.params", 0.0);
  } else {
    cfg.params.C = cfg.mode == Mode::soliton ? -1.0 : 0.0;
  }
  try {
    validate_params(cfg.params, cfg.mode);
  } catch (const std::invalid_argument& e) {
    fail("config", e.what());
  }

  const json& seed = need(j, "seed", "config");
  cfg.seed.mode = cfg.mode;
  cfg.seed.t0 = opt_number(seed, "t0", "config.seed", 1e-3);
  cfg.seed.u0 = opt_number(seed, "u0", "config.seed", 0.0);
  if (cfg.system == ConfiguredSystem::two_summands) {
    cfg.seed.l = {need_number(seed, "h_bar", "config.seed")};
  } else {
    const json& lj = need(seed, "l", "config.seed");
    if (!lj.is_array()) fail("config.seed.l", "expected an array of radii");
    for (const auto& v : lj) {
      if (!v.is_number()) fail("config.seed.l", "entries must be numbers");
      cfg.seed.l.push_back(v.get<double>());
    }
    if (static_cast<int>(cfg.seed.l.size()) != cfg.warped->r() - 1)
      fail("config.seed.l", "expected one radius per non-collapsing factor");
  }
  try {
    cfg.seed.validate();
  } catch (const std::invalid_argument& e) {
    fail("config", e.what());
  }

  const json& integ = need(j, "integrator", "config");
  cfg.integrator.h = opt_number(integ, "h", "config.integrator", 1e-3);
  cfg.integrator.t_max = need_number(integ, "t_max", "config.integrator");
  // the order-2 two-summands seed has an O(1) conservation residual that
  // decays along the flow; its default gate sits above that defect
  const double abort_default =
      cfg.system == ConfiguredSystem::two_summands ? 1.0 : 1e-3;
  cfg.integrator.residual_abort =
      opt_number(integ, "residual_abort", "config.integrator", abort_default);
  if (integ.contains("decimate")) {
    if (!integ["decimate"].is_number_integer())
      fail("config.integrator.decimate", "expected an integer");
    cfg.integrator.decimate = integ["decimate"].get<int>();
  }
  if (!(cfg.integrator.h > 0.0)) fail("config.integrator.h", "must be > 0");
  if (cfg.integrator.decimate < 1) fail("config.integrator.decimate", "must be >= 1");
  if (integ.contains("project_constraint")) {
    if (!integ["project_constraint"].is_boolean())
      fail("config.integrator.project_constraint", "expected a boolean");
    cfg.project_constraint = integ["project_constraint"].get<bool>();
  }

  if (j.contains("output")) {
    const json& o = j["output"];
    if (o.contains("csv")) cfg.csv_path = need_string(o, "csv", "config.output");
    if (o.contains("report")) cfg.report_path = need_string(o, "report", "config.output");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace solitonflow
