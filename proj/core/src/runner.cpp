#include "solitonflow/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include <json.hpp>

#include "solitonflow/analyze.hpp"
#include "solitonflow/checks.hpp"
#include "solitonflow/integrate.hpp"
#include "solitonflow/io.hpp"
#include "solitonflow/seed.hpp"
#include "solitonflow/systems.hpp"

namespace solitonflow {

namespace {

using nlohmann::json;

double nan_d() { return std::numeric_limits<double>::quiet_NaN(); }

int thread_cap(int override_cap) {
  if (override_cap > 0) return override_cap;
  if (const char* env = std::getenv("SOLITONFLOW_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// ---- z-system runs ----------------------------------------------------------

struct ZRun {
  Trajectory traj;
  int r = 0;
  std::vector<int> d;
};

ZRun execute_z(const RunConfig& cfg) {
  ZRun run;
  if (cfg.system == ConfiguredSystem::two_summands) {
    ZState z0 = two_summands_seed(*cfg.two_summands, cfg.params, cfg.seed);
    std::vector<double> y0(z0.dim());
    z0.pack(y0);
    run.traj = integrate(make_two_summands_z_field(*cfg.two_summands, cfg.params), y0, z0.t,
                         cfg.integrator, make_z_probe(*cfg.two_summands, cfg.params),
                         SystemKind::two_summands_z);
    run.r = 2;
    run.d = {cfg.two_summands->d1, cfg.two_summands->d2};
  } else {
    ZState z0 = soliton_seed(*cfg.warped, cfg.params, cfg.seed);
    std::vector<double> y0(z0.dim());
    z0.pack(y0);
    run.traj = integrate(make_warped_z_field(*cfg.warped, cfg.params), y0, z0.t,
                         cfg.integrator, make_z_probe(*cfg.warped, cfg.params),
                         SystemKind::warped_z);
    run.r = cfg.warped->r();
    run.d = cfg.warped->d;
  }
  return run;
}

void write_z_csv(const std::string& path, const ZRun& run, const RunConfig& cfg) {
  CsvWriter csv(path);
  csv.header(trajectory_csv_header(run.r));
  const int r = run.r;
  std::vector<double> row(1 + 2 * r + 2 + 5 + 2 * r + 1);
  for (std::size_t k = 0; k < run.traj.size(); ++k) {
    auto y = run.traj.state_row(k);
    const auto& sc = run.traj.scalars[k];
    const auto& mon = run.traj.monitors[k];
    std::size_t c = 0;
    row[c++] = run.traj.time[k];
    for (int i = 0; i < r; ++i) row[c++] = y[2 * i];
    for (int i = 0; i < r; ++i) row[c++] = y[2 * i + 1];
    row[c++] = y[2 * r];
    row[c++] = y[2 * r + 1];
    row[c++] = sc.xi;
    row[c++] = sc.trL;
    row[c++] = sc.Rbar;
    row[c++] = sc.Lcal.value_or(nan_d());
    row[c++] = sc.H.value_or(nan_d());
    for (int i = 0; i < r; ++i) {
      const double L = y[2 * i + 1] / y[2 * i];
      row[c++] = sc.xi != 0.0 ? L / sc.xi : nan_d();
    }
    for (int i = 0; i < r; ++i)
      row[c++] = sc.xi != 0.0 ? 1.0 / (sc.xi * y[2 * i]) : nan_d();
    row[c++] = mon.res2;
    csv.row(row);
  }
}

// ---- xy-system runs ---------------------------------------------------------

struct XYRun {
  Trajectory traj;
  XYState xy0;
  ZState z0;
  bool reconstructed = false;
  MetricSeries ms;
};

Trajectory truncate_to(const Trajectory& traj, std::size_t count) {
  Trajectory out = traj;
  out.time.resize(count);
  out.states.resize(count * traj.state_dim);
  if (!out.scalars.empty()) out.scalars.resize(count);
  if (!out.monitors.empty()) out.monitors.resize(count);
  return out;
}

XYRun execute_xy(const RunConfig& cfg) {
  const WarpedProductSpec& spec = *cfg.warped;
  XYRun run;
  run.z0 = soliton_seed(spec, cfg.params, cfg.seed);
  run.xy0 = xy_from_z(run.z0, spec, cfg.params);
  run.xy0.s = 0.0;
  std::vector<double> y0(2 * spec.r());
  run.xy0.pack(y0);
  run.traj = integrate(make_xy_field(spec, cfg.project_constraint), y0, 0.0, cfg.integrator,
                       make_xy_probe(spec), SystemKind::xy_full);

  // reconstruct the metric on the prefix where the map is defined
  std::size_t valid = run.traj.size();
  for (std::size_t k = 0; k < run.traj.size(); ++k) {
    const auto& mon = run.traj.monitors[k];
    const bool ok = cfg.mode == Mode::soliton
                        ? mon.lyap < 0.0
                        : std::abs(mon.lyap) <= 1e-3 && std::abs(mon.h_drift) <= 1e-3;
    if (!ok) {
      valid = k;
      break;
    }
  }
  if (valid >= 2) {
    const Trajectory& source = run.traj;
    Trajectory prefix = valid == source.size() ? source : truncate_to(source, valid);
    if (cfg.mode == Mode::soliton) {
      run.ms = reconstruct_soliton_metric(prefix, spec, cfg.params.C, run.xy0.Y[0], run.z0.u,
                                          run.z0.t);
    } else {
      const double trL0 = scalars_from_z(run.z0, spec, cfg.params).xi;
      run.ms = reconstruct_ricci_flat_metric(prefix, spec, run.xy0.Y[0], run.z0.u,
                                             run.z0.t, trL0);
    }
    run.reconstructed = true;
  }
  return run;
}

void write_xy_csv(const std::string& path, const XYRun& run, const RunConfig& cfg) {
  const WarpedProductSpec& spec = *cfg.warped;
  const int r = spec.r();
  CsvWriter csv(path);
  csv.header(trajectory_csv_header(r));
  if (!run.reconstructed) return;  // header only; report carries the reason

  const std::size_t m = run.ms.t.size();
  std::vector<double> row(1 + 2 * r + 2 + 5 + 2 * r + 1);
  for (std::size_t k = 0; k < m; ++k) {
    auto y = run.traj.state_row(k);
    std::size_t c = 0;
    row[c++] = run.ms.t[k];
    ZState z;
    z.t = run.ms.t[k];
    z.g.resize(r);
    z.gdot.resize(r);
    for (int i = 0; i < r; ++i) {
      z.g[i] = run.ms.g[i][k];
      z.gdot[i] = run.ms.gdot[i][k];
    }
    z.u = run.ms.u[k];
    z.udot = run.ms.udot[k];
    for (int i = 0; i < r; ++i) row[c++] = z.g[i];
    for (int i = 0; i < r; ++i) row[c++] = z.gdot[i];
    row[c++] = z.u;
    row[c++] = z.udot;
    row[c++] = run.ms.xi[k];
    row[c++] = run.ms.trL[k];
    row[c++] = -cfg.params.C - z.udot * z.udot;
    XYState xy = XYState::unpack(run.traj.time[k], y);
    row[c++] = lyapunov_L(xy, spec);
    row[c++] = script_H(xy, spec);
    for (int i = 0; i < r; ++i)
      row[c++] = xy.X[i] / std::sqrt(static_cast<double>(spec.d[i]));
    for (int i = 0; i < r; ++i)
      row[c++] = xy.Y[i] / std::sqrt(static_cast<double>(spec.d[i]));
    row[c++] = conservation_residual(z, spec, cfg.params).res2;
    csv.row(row);
  }
}

// soliton-mode phase-space run report: tail behaviour of the Lyapunov and
// the sign structure of the trajectory
DiagnosticsReport xy_soliton_report(const XYRun& run, const WarpedProductSpec& spec) {
  DiagnosticsReport rep;
  rep.termination = to_string(run.traj.termination);
  rep.termination_detail = run.traj.termination_detail;
  if (run.traj.termination != Termination::reached_t_max) return rep;
  rep.has_fits = true;

  const std::size_t m = run.traj.size();
  std::vector<double> lyap(m);
  double min_coord = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m; ++k) {
    lyap[k] = run.traj.monitors[k].lyap;
    auto y = run.traj.state_row(k);
    for (double v : y) min_coord = std::min(min_coord, v);
  }
  rep.tail_lo = run.traj.time[static_cast<std::size_t>(0.8 * m)];
  rep.tail_hi = run.traj.time[m - 1];
  const double tail = tail_mean(lyap);
  rep.claims.push_back(make_claim("lyap-tail-near-minus-1", std::abs(tail + 1.0), 0.0, 0.05));
  rep.claims.push_back(make_claim("coordinates-positive", min_coord, 0.0,
                                  std::numeric_limits<double>::infinity(),
                                  "min over all X_i, Y_i and samples"));
  return rep;
}

int run_one(const RunConfig& cfg, const std::string& cfg_path) {
  ReportMeta meta;
  meta.system = to_string(cfg.system);
  meta.mode = to_string(cfg.mode);
  meta.preset = cfg.preset_name;

  Termination term;
  if (cfg.system == ConfiguredSystem::xy) {
    XYRun run = execute_xy(cfg);
    term = run.traj.termination;
    if (!cfg.csv_path.empty()) write_xy_csv(cfg.csv_path, run, cfg);
    if (!cfg.report_path.empty()) {
      if (cfg.mode == Mode::ricci_flat) {
        const double seed_drift = std::max(
            {std::abs(lyapunov_L(run.xy0, *cfg.warped)),
             std::abs(script_H(run.xy0, *cfg.warped) - 1.0), 1e-15});
        RicciFlatConvergence conv = ricci_flat_convergence(run.traj, *cfg.warped, seed_drift);
        write_text_file(cfg.report_path, report_json(meta, run.traj, conv));
      } else {
        write_text_file(cfg.report_path,
                        report_json(meta, xy_soliton_report(run, *cfg.warped)));
      }
    }
  } else {
    ZRun run = execute_z(cfg);
    term = run.traj.termination;
    if (!cfg.csv_path.empty()) write_z_csv(cfg.csv_path, run, cfg);
    if (!cfg.report_path.empty()) {
      DiagnosticsReport rep;
      if (cfg.system == ConfiguredSystem::two_summands) {
        rep = asymptotic_report(run.traj, *cfg.two_summands, cfg.params);
      } else {
        rep = asymptotic_report(run.traj, *cfg.warped, cfg.params, cfg.mode);
      }
      if (run.traj.termination == Termination::reached_t_max) {
        auto mono = monotonicity_monitors(run.traj, cfg.params.C,
                                          cfg.system == ConfiguredSystem::two_summands
                                              ? cfg.two_summands->n()
                                              : cfg.warped->n());
        if (cfg.mode == Mode::soliton)
          rep.claims.insert(rep.claims.end(), mono.begin(), mono.end());
      }
      write_text_file(cfg.report_path, report_json(meta, rep));
    }
  }

  if (term != Termination::reached_t_max) {
    std::fprintf(stderr, "%s: terminated early (%s)\n", cfg_path.c_str(), to_string(term));
    return kExitEarlyStop;
  }
  return kExitOk;
}

}  // namespace

int cmd_run(const RunOptions& opt) {
  if (opt.config_paths.empty()) {
    std::fprintf(stderr, "run: at least one --config is required\n");
    return kExitUsage;
  }

  std::vector<RunConfig> configs;
  try {
    for (const auto& path : opt.config_paths) {
      RunConfig cfg = load_run_config(path);
      if (opt.decimate_override > 0) cfg.integrator.decimate = opt.decimate_override;
      if (!opt.out_override.empty()) {
        if (opt.config_paths.size() > 1) {
          std::fprintf(stderr, "run: --out cannot be combined with multiple configs\n");
          return kExitUsage;
        }
        cfg.report_path = opt.out_override;
      }
      configs.push_back(std::move(cfg));
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  }

  // distinct output paths across a sweep
  for (std::size_t i = 0; i < configs.size(); ++i)
    for (std::size_t j = i + 1; j < configs.size(); ++j) {
      const bool csv_clash = !configs[i].csv_path.empty() &&
                             configs[i].csv_path == configs[j].csv_path;
      const bool rep_clash = !configs[i].report_path.empty() &&
                             configs[i].report_path == configs[j].report_path;
      if (csv_clash || rep_clash) {
        std::fprintf(stderr, "config error: %s and %s share an output path\n",
                     opt.config_paths[i].c_str(), opt.config_paths[j].c_str());
        return kExitUsage;
      }
    }

  if (configs.size() == 1) {
    try {
      return run_one(configs[0], opt.config_paths[0]);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kExitUsage;
    }
  }

  const int workers =
      std::min<int>(thread_cap(opt.max_threads), static_cast<int>(configs.size()));
  std::atomic<std::size_t> next{0};
  std::atomic<int> worst{kExitOk};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t idx = next.fetch_add(1);
        if (idx >= configs.size()) return;
        int code;
        try {
          code = run_one(configs[idx], opt.config_paths[idx]);
        } catch (const std::exception& e) {
          std::fprintf(stderr, "%s: error: %s\n", opt.config_paths[idx].c_str(), e.what());
          code = kExitUsage;
        }
        int cur = worst.load();
        while (code > cur && !worst.compare_exchange_weak(cur, code)) {
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  return worst.load();
}

int cmd_critical_points(const std::vector<int>& d, const std::vector<double>& lambda,
                        const std::string& json_out) {
  std::vector<StationaryPoint> points;
  WarpedProductSpec spec;
  try {
    spec = WarpedProductSpec(d, lambda);
    points = critical_points(spec);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }

  json arr = json::array();
  std::printf("%-14s %6s %12s  %s\n", "kind", "L", "|rhs|_inf", "coordinates");
  for (const auto& pt : points) {
    XYState rhs = xy_rhs(pt.sample, spec);
    double res = 0.0;
    for (int i = 0; i < spec.r(); ++i)
      res = std::max({res, std::abs(rhs.X[i]), std::abs(rhs.Y[i])});

    std::string coords = "X=(";
    char buf[32];
    for (int i = 0; i < spec.r(); ++i) {
      std::snprintf(buf, sizeof buf, "%.6g%s", pt.sample.X[i], i + 1 < spec.r() ? "," : "");
      coords += buf;
    }
    coords += ") Y=(";
    for (int i = 0; i < spec.r(); ++i) {
      std::snprintf(buf, sizeof buf, "%.6g%s", pt.sample.Y[i], i + 1 < spec.r() ? "," : "");
      coords += buf;
    }
    coords += ")";
    if (!pt.family.empty()) coords += "  [" + pt.family + "]";
    if (!pt.subset.empty()) {
      coords += "  A={";
      for (std::size_t i = 0; i < pt.subset.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%d%s", pt.subset[i] + 1,
                      i + 1 < pt.subset.size() ? "," : "");
        coords += buf;
      }
      coords += "}";
    }
    std::printf("%-14s %6.1f %12.3e  %s\n", to_string(pt.kind), pt.lyapunov, res,
                coords.c_str());

    json item;
    item["kind"] = to_string(pt.kind);
    item["X"] = pt.sample.X;
    item["Y"] = pt.sample.Y;
    item["lyapunov"] = pt.lyapunov;
    item["residual"] = res;
    if (!pt.subset.empty()) {
      json sub = json::array();
      for (int s : pt.subset) sub.push_back(s + 1);
      item["subset"] = sub;
    }
    if (!pt.family.empty()) item["family"] = pt.family;
    arr.push_back(item);
  }
  if (!json_out.empty()) write_text_file(json_out, arr.dump(2) + "\n");
  return kExitOk;
}

int cmd_check(const std::string& suite) {
  checks::SuiteResult result;
  try {
    result = checks::run_suite(suite);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error while running suite %s: %s\n", suite.c_str(), e.what());
    return kExitUsage;
  }

  for (const auto& c : result.claims) {
    std::string band;
    char buf[96];
    if (std::isinf(c.lo) && !std::isinf(c.hi))
      std::snprintf(buf, sizeof buf, "<= %.6g", c.hi);
    else if (!std::isinf(c.lo) && std::isinf(c.hi))
      std::snprintf(buf, sizeof buf, ">= %.6g", c.lo);
    else
      std::snprintf(buf, sizeof buf, "in [%.6g, %.6g]", c.lo, c.hi);
    band = buf;
    std::printf("%s %-42s value=%-13.6g %s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.value, band.c_str(), c.detail.empty() ? "" : "  -- ",
                c.detail.c_str());
  }
  std::printf("suite %s: %s (%zu claims, %.2f s)\n", result.name.c_str(),
              result.pass() ? "PASS" : "FAIL", result.claims.size(), result.wall_seconds);
  return result.pass() ? kExitOk : kExitUsage;
}

int cmd_compare(const std::string& config_path, double t_lo, double t_hi,
                const std::string& json_out) {
  RunConfig cfg;
  try {
    cfg = load_run_config(config_path);
    if (cfg.system != ConfiguredSystem::warped || cfg.mode != Mode::soliton)
      throw ConfigError("config.system: compare expects a warped soliton config");
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  }

  try {
    const WarpedProductSpec& spec = *cfg.warped;
    ZRun zrun = execute_z(cfg);
    if (zrun.traj.termination != Termination::reached_t_max) {
      std::fprintf(stderr, "compare: z-run terminated early (%s)\n",
                   zrun.traj.termination_detail.c_str());
      return kExitEarlyStop;
    }
    XYState xy0 = xy_seed(spec, cfg.params, cfg.seed);
    const double s_end = phase_time_from_z(zrun.traj, spec.d[0]).back();
    IntegratorConfig xycfg = cfg.integrator;
    xycfg.t_max = std::ceil(s_end) + 1.0;
    xycfg.decimate = 1;
    std::vector<double> y0(2 * spec.r());
    xy0.pack(y0);
    Trajectory xytraj = integrate(make_xy_field(spec, false), y0, 0.0, xycfg,
                                  make_xy_probe(spec), SystemKind::xy_full);

    CompareReport rep = oracle_compare(zrun.traj, xytraj, spec, cfg.params, t_lo, t_hi);
    std::printf("z-system vs phase-space deviation on t in [%g, %g]\n", t_lo, t_hi);
    for (int i = 0; i < spec.r(); ++i)
      std::printf("  X_%d: %.3e   Y_%d: %.3e\n", i + 1, rep.per_coordinate[i], i + 1,
                  rep.per_coordinate[spec.r() + i]);
    std::printf("  max: %.3e\n", rep.max_deviation);

    if (!json_out.empty()) {
      json j;
      j["t_window"] = {rep.t_lo, rep.t_hi};
      j["max_deviation"] = rep.max_deviation;
      j["per_coordinate"] = rep.per_coordinate;
      write_text_file(json_out, j.dump(2) + "\n");
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}

}  // namespace solitonflow
