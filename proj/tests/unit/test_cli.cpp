#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "solitonflow/run_config.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = SOLITONFLOW_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("solitonflow-test-" + std::to_string(std::rand()) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this) & 0xffff));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int run_cli(const std::string& args, const fs::path& stderr_to = {}) {
  std::string cmd = kCli + " " + args + " >/dev/null";
  if (!stderr_to.empty())
    cmd += " 2>" + stderr_to.string();
  else
    cmd += " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

json example1_config(const fs::path& dir, double t_max, int decimate) {
  json j;
  j["system"] = "warped";
  j["mode"] = "soliton";
  j["spec"] = {{"d", {1, 2, 3}}, {"lambda", {0.0, 1.0, 1.0}}};
  j["params"] = {{"C", -1.0}, {"epsilon", 0.0}};
  j["seed"] = {{"t0", 1e-3}, {"l", {6.0, 3.0}}, {"u0", 0.0}};
  j["integrator"] = {{"h", 1e-3}, {"t_max", t_max}, {"decimate", decimate}};
  j["output"] = {{"csv", (dir / "run.csv").string()},
                 {"report", (dir / "report.json").string()}};
  return j;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  TempDir dir;
  json base = example1_config(dir.path, 10.0, 10);

  SUBCASE("a valid config round-trips") {
    solitonflow::RunConfig cfg = solitonflow::parse_run_config(base.dump());
    CHECK(cfg.system == solitonflow::ConfiguredSystem::warped);
    CHECK(cfg.warped->r() == 3);
    CHECK(cfg.integrator.decimate == 10);
    CHECK(cfg.csv_path == (dir.path / "run.csv").string());
  }

  SUBCASE("C >= 0 in soliton mode is rejected with the field path") {
    base["params"]["C"] = 1.0;
    try {
      solitonflow::parse_run_config(base.dump());
      FAIL("expected ConfigError");
    } catch (const solitonflow::ConfigError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("params.C") != std::string::npos);
      CHECK(msg.find("C < 0") != std::string::npos);
    }
  }

  SUBCASE("spec and preset are mutually exclusive") {
    base["preset"] = {{"name", "example2"}, {"m", 1}};
    CHECK_THROWS_AS(solitonflow::parse_run_config(base.dump()), solitonflow::ConfigError);
  }

  SUBCASE("two-summands presets expand to the orbit constants") {
    json j;
    j["system"] = "two-summands";
    j["mode"] = "soliton";
    j["preset"] = {{"name", "example3"}, {"m", 2}};
    j["seed"] = {{"t0", 1e-3}, {"h_bar", 6.0}};
    j["integrator"] = {{"h", 1e-3}, {"t_max", 1.0}};
    solitonflow::RunConfig cfg = solitonflow::parse_run_config(j.dump());
    CHECK(cfg.two_summands->d1 == 3);
    CHECK(cfg.two_summands->d2 == 8);
    CHECK(cfg.two_summands->A2 == 32.0);
    CHECK(cfg.two_summands->A3 == 1.5);
  }

  SUBCASE("seed radii must match the factor count") {
    base["seed"]["l"] = {6.0};
    CHECK_THROWS_AS(solitonflow::parse_run_config(base.dump()), solitonflow::ConfigError);
  }
}

TEST_CASE("cli run") {
  TempDir dir;
  const fs::path cfg_path = dir.path / "cfg.json";

  SUBCASE("short reference run: exit 0, expected row count, valid report") {
    write(cfg_path, example1_config(dir.path, 10.0, 10).dump());
    CHECK(run_cli("run --config " + cfg_path.string()) == 0);

    const std::string csv = slurp(dir.path / "run.csv");
    // 9999 steps, every 10th sample stored, plus the header line
    CHECK(count_lines(csv) == 1001);
    CHECK(csv.rfind("t,g_1,g_2,g_3,gdot_1,gdot_2,gdot_3,u,udot,xi,trL,Rbar,Lcal,H,", 0) == 0);

    const json report = json::parse(slurp(dir.path / "report.json"));
    CHECK(report["termination"]["reason"] == "reached-t-max");
    CHECK(report["has_fits"] == true);
    REQUIRE(report.contains("claims"));
    CHECK(report["claims"].size() > 4);
    for (const auto& c : report["claims"]) {
      CHECK(c.contains("value"));
      CHECK(c.contains("tolerance"));
      CHECK(c.contains("pass"));
    }
  }

  SUBCASE("byte-identical CSV on repeated runs") {
    write(cfg_path, example1_config(dir.path, 5.0, 5).dump());
    REQUIRE(run_cli("run --config " + cfg_path.string()) == 0);
    const std::string first = slurp(dir.path / "run.csv");
    REQUIRE(run_cli("run --config " + cfg_path.string()) == 0);
    CHECK(first == slurp(dir.path / "run.csv"));
  }

  SUBCASE("config errors exit 1 and cite the field") {
    json bad = example1_config(dir.path, 10.0, 10);
    bad["params"]["C"] = 1.0;
    write(cfg_path, bad.dump());
    const fs::path err = dir.path / "stderr.txt";
    CHECK(run_cli("run --config " + cfg_path.string(), err) == 1);
    const std::string msg = slurp(err);
    CHECK(msg.find("params.C") != std::string::npos);
  }

  SUBCASE("early termination exits 2 but still writes the report") {
    json degenerate = example1_config(dir.path, 10.0, 1);
    degenerate["seed"]["l"] = {1e-6, 3.0};
    write(cfg_path, degenerate.dump());
    CHECK(run_cli("run --config " + cfg_path.string()) == 2);
    const json report = json::parse(slurp(dir.path / "report.json"));
    CHECK(report["termination"]["reason"] != "reached-t-max");
    CHECK(report["has_fits"] == false);
  }

  SUBCASE("two-summands preset run") {
    json j;
    j["system"] = "two-summands";
    j["mode"] = "soliton";
    j["preset"] = {{"name", "example2"}, {"m", 1}};
    j["seed"] = {{"t0", 1e-3}, {"h_bar", 6.0}};
    j["integrator"] = {{"h", 1e-3}, {"t_max", 20.0}, {"decimate", 10}};
    j["output"] = {{"csv", (dir.path / "ts.csv").string()},
                   {"report", (dir.path / "ts.json").string()}};
    write(cfg_path, j.dump());
    CHECK(run_cli("run --config " + cfg_path.string()) == 0);
    const std::string csv = slurp(dir.path / "ts.csv");
    CHECK(csv.rfind("t,g_1,g_2,gdot_1,gdot_2,u,udot,", 0) == 0);
    const json report = json::parse(slurp(dir.path / "ts.json"));
    CHECK(report["run"]["preset"] == "example2");
  }

  SUBCASE("full reference run: 500/h/decimate rows, all claims pass") {
    json j = example1_config(dir.path, 500.0, 100);
    write(cfg_path, j.dump());
    CHECK(run_cli("run --config " + cfg_path.string()) == 0);
    const std::string csv = slurp(dir.path / "run.csv");
    CHECK(count_lines(csv) == 5001);  // 500/h/decimate data rows + header
    const json report = json::parse(slurp(dir.path / "report.json"));
    CHECK(report["termination"]["reason"] == "reached-t-max");
    for (const auto& c : report["claims"]) {
      INFO(c["name"].get<std::string>());
      CHECK(c["pass"] == true);
    }
    const double udot = report["estimates"]["udot_limit"].get<double>();
    CHECK(udot > -1.0);
    CHECK(udot < -0.95);
    CHECK(report["estimates"]["g1_limit"].get<double>() < 2.0);
  }

  SUBCASE("xy soliton run reconstructs the metric columns") {
    json j;
    j["system"] = "xy";
    j["mode"] = "soliton";
    j["spec"] = {{"d", {1, 2, 3}}, {"lambda", {0.0, 1.0, 1.0}}};
    j["params"] = {{"C", -1.0}};
    j["seed"] = {{"t0", 1e-3}, {"l", {6.0, 3.0}}};
    j["integrator"] = {{"h", 1e-3}, {"t_max", 20.0}, {"decimate", 20}};
    j["output"] = {{"csv", (dir.path / "xys.csv").string()},
                   {"report", (dir.path / "xys.json").string()}};
    write(cfg_path, j.dump());
    CHECK(run_cli("run --config " + cfg_path.string()) == 0);
    const std::string csv = slurp(dir.path / "xys.csv");
    CHECK(count_lines(csv) > 900);
    const json report = json::parse(slurp(dir.path / "xys.json"));
    CHECK(report["termination"]["reason"] == "reached-t-max");
    REQUIRE(report.contains("claims"));
  }

  SUBCASE("xy ricci-flat run emits reconstruction-backed CSV") {
    json j;
    j["system"] = "xy";
    j["mode"] = "ricci-flat";
    j["spec"] = {{"d", {1, 2, 3}}, {"lambda", {0.0, 1.0, 1.0}}};
    j["params"] = {{"C", 0.0}};
    j["seed"] = {{"t0", 1e-3}, {"l", {1.0, 1.0}}};
    j["integrator"] = {{"h", 1e-3}, {"t_max", 20.0}, {"decimate", 20},
                       {"project_constraint", true}};
    j["output"] = {{"csv", (dir.path / "xy.csv").string()},
                   {"report", (dir.path / "xy.json").string()}};
    write(cfg_path, j.dump());
    CHECK(run_cli("run --config " + cfg_path.string()) == 0);
    const json report = json::parse(slurp(dir.path / "xy.json"));
    CHECK(report["estimates"].contains("max_lyap_drift"));
    for (const auto& c : report["claims"]) {
      CHECK(c.contains("pass"));
    }
  }

  SUBCASE("sweep over two configs") {
    json a = example1_config(dir.path, 2.0, 10);
    a["output"] = {{"csv", (dir.path / "a.csv").string()},
                   {"report", (dir.path / "a.json").string()}};
    json b = example1_config(dir.path, 3.0, 10);
    b["output"] = {{"csv", (dir.path / "b.csv").string()},
                   {"report", (dir.path / "b.json").string()}};
    write(dir.path / "a.cfg", a.dump());
    write(dir.path / "b.cfg", b.dump());
    CHECK(run_cli("run --config " + (dir.path / "a.cfg").string() + " --config " +
                  (dir.path / "b.cfg").string()) == 0);
    CHECK(fs::exists(dir.path / "a.csv"));
    CHECK(fs::exists(dir.path / "b.csv"));

    // clashing outputs are rejected
    write(dir.path / "c.cfg", a.dump());
    CHECK(run_cli("run --config " + (dir.path / "a.cfg").string() + " --config " +
                  (dir.path / "c.cfg").string()) == 1);
  }
}

TEST_CASE("shipped configs parse and validate") {
  const fs::path dir = SOLITONFLOW_CONFIG_DIR;
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    INFO(entry.path().string());
    CHECK_NOTHROW(solitonflow::load_run_config(entry.path().string()));
  }
  CHECK(seen >= 6);
}

TEST_CASE("cli critical-points") {
  TempDir dir;
  const fs::path out = dir.path / "points.json";
  CHECK(run_cli("critical-points --d 1 2 --lambda 0 1 --out " + out.string()) == 0);
  const json points = json::parse(slurp(out));
  CHECK(points.size() == 5);
  int subsets = 0;
  for (const auto& p : points) {
    if (p["kind"] == "subset-type") ++subsets;
    CHECK(p["residual"].get<double>() < 1e-12);
  }
  CHECK(subsets == 1);

  CHECK(run_cli("critical-points --d 2 3 --lambda 1 1") == 1);
}

TEST_CASE("cli check") {
  CHECK(run_cli("check unknown-suite") == 1);
  // the cheapest full suite doubles as an end-to-end smoke test
  CHECK(run_cli("check convergence-order") == 0);
}

TEST_CASE("cli compare") {
  TempDir dir;
  json j = example1_config(dir.path, 10.0, 1);
  j.erase("output");
  const fs::path cfg_path = dir.path / "cmp.json";
  write(cfg_path, j.dump());
  const fs::path out = dir.path / "cmp-out.json";
  CHECK(run_cli("compare --config " + cfg_path.string() + " --t-lo 1 --t-hi 10 --out " +
                out.string()) == 0);
  const json rep = json::parse(slurp(out));
  CHECK(rep["max_deviation"].get<double>() < 1e-5);
}
