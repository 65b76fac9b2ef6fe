#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <cstring>

#include "solitonflow/integrate.hpp"
#include "solitonflow/seed.hpp"
#include "solitonflow/systems.hpp"

using namespace solitonflow;
using doctest::Approx;

namespace {

const WarpedProductSpec spec123({1, 2, 3}, {0.0, 1.0, 1.0});
const SolitonParams soliton{0.0, -1.0};

VectorField scalar_decay() {
  VectorField f;
  f.label = "decay";
  f.arity = 1;
  f.eval = [](std::span<const double> y, std::span<double> dy) { dy[0] = -y[0]; };
  return f;
}

Trajectory example1_run(double t0, double h, double t_max, IntegratorConfig base = {}) {
  SeedConfig cfg;
  cfg.t0 = t0;
  cfg.l = {6.0, 3.0};
  ZState z0 = soliton_seed(spec123, soliton, cfg);
  std::vector<double> y0(z0.dim());
  z0.pack(y0);
  base.h = h;
  base.t_max = t_max;
  return integrate(make_warped_z_field(spec123, soliton), y0, z0.t, base,
                   make_z_probe(spec123, soliton), SystemKind::warped_z);
}

}  // namespace

TEST_CASE("rk4_step") {
  SUBCASE("zero field leaves the state untouched") {
    VectorField f;
    f.arity = 3;
    f.eval = [](std::span<const double>, std::span<double> dy) {
      for (auto& v : dy) v = 0.0;
    };
    std::vector<double> y = {0.1, -2.0, 3.5};
    const std::vector<double> orig = y;
    Rk4Workspace ws;
    CHECK(rk4_step(f, y, 0.25, ws).ok());
    CHECK(std::memcmp(y.data(), orig.data(), y.size() * sizeof(double)) == 0);
  }

  SUBCASE("one step of y' = -y is the degree-4 Taylor polynomial") {
    VectorField f = scalar_decay();
    std::vector<double> y = {1.0};
    Rk4Workspace ws;
    CHECK(rk4_step(f, y, 0.1, ws).ok());
    const double h = 0.1;
    const double poly = 1.0 - h + h * h / 2.0 - h * h * h / 6.0 + h * h * h * h / 24.0;
    CHECK(y[0] == Approx(poly).epsilon(1e-15));
    CHECK(y[0] == Approx(0.9048375).epsilon(1e-9));
    CHECK(std::abs(y[0] - std::exp(-0.1)) < 1e-7);
  }

  SUBCASE("failing stage reports its index and leaves the state") {
    VectorField f;
    f.arity = 1;
    f.positive = {0};
    f.eval = [](std::span<const double>, std::span<double> dy) { dy[0] = -1.0; };
    std::vector<double> y = {0.4};
    Rk4Workspace ws;
    StepStatus st = rk4_step(f, y, 1.0, ws);  // midpoint stage goes negative
    CHECK_FALSE(st.ok());
    CHECK(st.error == StageError::nonpositive);
    CHECK(st.stage > 1);
    CHECK(y[0] == 0.4);
  }
}

TEST_CASE("integrate") {
  SUBCASE("smooth problem converges at fourth order") {
    VectorField f = scalar_decay();
    auto endpoint = [&](double h) {
      IntegratorConfig cfg;
      cfg.h = h;
      cfg.t_max = 1.0;
      std::vector<double> y0 = {1.0};
      return integrate(f, y0, 0.0, cfg).end_state[0];
    };
    const double ref = endpoint(0.00625);
    const double e1 = std::abs(endpoint(0.05) - ref);
    const double e2 = std::abs(endpoint(0.025) - ref);
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
  }

  SUBCASE("halving h on the triple-warped run cuts the error ~16x") {
    auto endpoint = [&](double h) { return example1_run(1e-3, h, 1.0).end_state; };
    const auto ref = endpoint(2.5e-4);
    auto err = [&](const std::vector<double>& y) {
      double e = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) e = std::max(e, std::abs(y[i] - ref[i]));
      return e;
    };
    const double ratio = err(endpoint(1e-3)) / err(endpoint(5e-4));
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
  }

  SUBCASE("identical configs give bit-identical trajectories") {
    Trajectory a = example1_run(1e-3, 1e-3, 2.0);
    Trajectory b = example1_run(1e-3, 1e-3, 2.0);
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.states.data(), b.states.data(),
                      a.states.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.time.data(), b.time.data(), a.time.size() * sizeof(double)) == 0);
  }

  SUBCASE("terminates cleanly on degenerate seeds") {
    SeedConfig cfg;
    cfg.t0 = 1e-3;
    cfg.l = {1e-6, 3.0};
    ZState z0 = soliton_seed(spec123, soliton, cfg);
    std::vector<double> y0(z0.dim());
    z0.pack(y0);
    IntegratorConfig icfg;
    icfg.h = 1e-3;
    icfg.t_max = 10.0;
    Trajectory traj = integrate(make_warped_z_field(spec123, soliton), y0, z0.t, icfg,
                                make_z_probe(spec123, soliton), SystemKind::warped_z);
    CHECK(traj.termination != Termination::reached_t_max);
    CHECK_FALSE(traj.termination_detail.empty());
  }

  SUBCASE("zero field is bit-stable over a million steps") {
    VectorField f;
    f.arity = 4;
    f.eval = [](std::span<const double>, std::span<double> dy) {
      for (auto& v : dy) v = 0.0;
    };
    std::vector<double> y0 = {0.1, -2.0, 3.5, 1e-7};
    IntegratorConfig cfg;
    cfg.h = 1e-3;
    cfg.t_max = 1000.0;
    cfg.decimate = 10000;
    Trajectory traj = integrate(f, y0, 0.0, cfg);
    for (int i = 0; i < 4; ++i) CHECK(traj.end_state[i] == y0[i]);
    CHECK(traj.termination == Termination::reached_t_max);
  }

  SUBCASE("monitor completeness and decimation") {
    IntegratorConfig base;
    base.decimate = 10;
    Trajectory traj = example1_run(1e-3, 1e-3, 2.0, base);
    CHECK(traj.size() == 200);  // 1999 steps, every 10th stored
    CHECK(traj.scalars.size() == traj.size());
    CHECK(traj.monitors.size() == traj.size());
    CHECK(traj.h == Approx(0.01));
    for (std::size_t k = 0; k < traj.size(); ++k) {
      CHECK(std::isfinite(traj.monitors[k].res2));
      CHECK(std::isfinite(traj.monitors[k].lyap));
      CHECK(std::isfinite(traj.scalars[k].Rbar));
      CHECK(std::isfinite(traj.scalars[k].xi));
      CHECK(std::isfinite(traj.scalars[k].trL));
      CHECK(traj.scalars[k].H.has_value());
      CHECK(traj.scalars[k].Lcal.has_value());
    }

    IntegratorConfig bare;
    bare.with_scalars = false;
    bare.with_monitors = false;
    Trajectory plain = example1_run(1e-3, 1e-3, 2.0, bare);
    CHECK(plain.scalars.empty());
    CHECK(plain.monitors.empty());
  }

  SUBCASE("residual gate stops the run") {
    IntegratorConfig base;
    base.residual_abort = 1e-12;  // far below the seed defect
    Trajectory traj = example1_run(1e-3, 1e-3, 2.0, base);
    CHECK(traj.termination == Termination::residual_blowup);
  }

  SUBCASE("grid validation") {
    std::vector<double> y0 = {1.0};
    IntegratorConfig cfg;
    cfg.h = 0.3;
    cfg.t_max = 1.0;  // not a whole number of steps
    CHECK_THROWS_AS(integrate(scalar_decay(), y0, 0.0, cfg), std::invalid_argument);
  }
}

TEST_CASE("cumulative_trapezoid") {
  SUBCASE("constant integrand, binary-exact step") {
    std::vector<double> f(9, 1.0);
    auto F = cumulative_trapezoid(f, 0.125);
    CHECK(F.front() == 0.0);
    CHECK(F.back() == 1.0);
  }

  SUBCASE("sine over a half period") {
    const double h = M_PI / 1000.0;
    std::vector<double> f(1001);
    for (int k = 0; k <= 1000; ++k) f[k] = std::sin(k * h);
    auto F = cumulative_trapezoid(f, h);
    CHECK(std::abs(F.back() - 2.0) < 1e-5);
  }

  SUBCASE("affine integrands are exact") {
    const double h = 0.25;
    std::vector<double> f(21);
    for (int k = 0; k <= 20; ++k) f[k] = 3.0 * (k * h) - 1.0;
    auto F = cumulative_trapezoid(f, h);
    for (int k = 0; k <= 20; ++k) {
      const double x = k * h;
      CHECK(F[k] == Approx(1.5 * x * x - x).epsilon(1e-14));
    }
  }

  SUBCASE("needs two samples") {
    std::vector<double> f = {1.0};
    CHECK_THROWS_AS(cumulative_trapezoid(f, 0.1), std::invalid_argument);
  }
}
