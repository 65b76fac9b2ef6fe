#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "solitonflow/integrate.hpp"
#include "solitonflow/seed.hpp"
#include "solitonflow/systems.hpp"

using namespace solitonflow;
using doctest::Approx;

namespace {

const WarpedProductSpec spec123({1, 2, 3}, {0.0, 1.0, 1.0});
const SolitonParams soliton{0.0, -1.0};
const SolitonParams ricci{0.0, 0.0};

}  // namespace

TEST_CASE("triple-warped series seed") {
  SeedConfig cfg;
  cfg.t0 = 1e-3;
  cfg.l = {6.0, 3.0};

  ZState z = soliton_seed(spec123, soliton, cfg);
  // u''(0) = C / (d_1 + 1) = -1/2 and c_i = lambda_i / (2 l_i)
  CHECK(z.t == 1e-3);
  CHECK(z.g[0] == 1e-3);
  CHECK(z.gdot[0] == 1.0);
  CHECK(z.g[1] == Approx(6.0 + 0.5 / 12.0 * 1e-6).epsilon(1e-15));
  CHECK(z.gdot[1] == Approx(1.0 / 12.0 * 1e-3).epsilon(1e-15));
  CHECK(z.g[2] == Approx(3.0 + 0.5 / 6.0 * 1e-6).epsilon(1e-15));
  CHECK(z.gdot[2] == Approx(1.0 / 6.0 * 1e-3).epsilon(1e-15));
  CHECK(z.u == Approx(-0.25 * 1e-6).epsilon(1e-15));
  CHECK(z.udot == Approx(-0.5 * 1e-3).epsilon(1e-15));

  SUBCASE("ricci-flat mode freezes the potential") {
    cfg.mode = Mode::ricci_flat;
    cfg.u0 = 0.7;
    ZState zr = soliton_seed(spec123, ricci, cfg);
    CHECK(zr.u == 0.7);
    CHECK(zr.udot == 0.0);
  }

  SUBCASE("rejects bad construction data") {
    CHECK_THROWS_AS(soliton_seed(WarpedProductSpec({2, 2}, {1.0, 1.0}), soliton, cfg),
                    std::invalid_argument);  // no collapsing circle
    SeedConfig bad = cfg;
    bad.t0 = 0.1;
    CHECK_THROWS_AS(soliton_seed(spec123, soliton, bad), std::invalid_argument);
    bad = cfg;
    bad.l = {6.0};
    CHECK_THROWS_AS(soliton_seed(spec123, soliton, bad), std::invalid_argument);
    CHECK_THROWS_AS(soliton_seed(spec123, SolitonParams{0.0, 1.0}, cfg),
                    std::invalid_argument);
  }
}

TEST_CASE("two-summands series seed") {
  SeedConfig cfg;
  cfg.t0 = 1e-3;
  cfg.l = {6.0};

  SUBCASE("twistor orbit m=1: u''(0) = -1/3") {
    ZState z = two_summands_seed(TwoSummandsSpec::twistor_orbit(1), soliton, cfg);
    CHECK(z.udot / cfg.t0 == Approx(-1.0 / 3.0).epsilon(1e-14));
    // g_2''(0) = A2 / ((d1+1) d2 hbar) = 6 / (3*4*6) = 1/12
    CHECK(z.gdot[1] == Approx(1.0 / 12.0 * 1e-3).epsilon(1e-14));
    CHECK(z.g[0] == 1e-3);
    CHECK(z.gdot[0] == 1.0);
  }

  SUBCASE("sp1 orbit m=1: u''(0) = -1/4") {
    ZState z = two_summands_seed(TwoSummandsSpec::sp1_orbit(1), soliton, cfg);
    CHECK(z.udot / cfg.t0 == Approx(-0.25).epsilon(1e-14));
  }

  SUBCASE("rejects a nonpositive radius") {
    SeedConfig bad = cfg;
    bad.l = {-1.0};
    CHECK_THROWS_AS(two_summands_seed(TwoSummandsSpec::twistor_orbit(1), soliton, bad),
                    std::invalid_argument);
  }
}

TEST_CASE("phase-space seed") {
  SeedConfig cfg;
  cfg.t0 = 1e-3;
  cfg.l = {6.0, 3.0};

  SUBCASE("lands near P0") {
    XYState xy = xy_seed(spec123, soliton, cfg);
    double dist = std::max(std::abs(xy.X[0] - 1.0), std::abs(xy.Y[0] - 1.0));
    for (int i = 1; i < 3; ++i)
      dist = std::max({dist, std::abs(xy.X[i]), std::abs(xy.Y[i])});
    CHECK(dist < 0.01);
    CHECK(xy.s == 0.0);
  }

  SUBCASE("ricci-flat seed sits on the constraint locus") {
    SeedConfig rf = cfg;
    rf.mode = Mode::ricci_flat;
    XYState xy = xy_seed(spec123, ricci, rf);
    CHECK(std::abs(lyapunov_L(xy, spec123)) < 1e-4);
    CHECK(std::abs(script_H(xy, spec123) - 1.0) < 1e-4);
  }

  SUBCASE("distance to P0 in the second factor scales with t0") {
    SeedConfig fine = cfg;
    fine.t0 = 5e-4;
    XYState a = xy_seed(spec123, soliton, cfg);
    XYState b = xy_seed(spec123, soliton, fine);
    CHECK(a.Y[1] / b.Y[1] == Approx(2.0).epsilon(0.01));   // Y-deviation is linear
    CHECK(a.X[1] / b.X[1] == Approx(4.0).epsilon(0.01));   // X-deviation is quadratic
    const double da = std::max(std::abs(a.X[1]), std::abs(a.Y[1]));
    const double db = std::max(std::abs(b.X[1]), std::abs(b.Y[1]));
    CHECK(da / db == Approx(2.0).epsilon(0.02));
  }
}

TEST_CASE("seed residual decay") {
  SeedConfig cfg;
  cfg.l = {6.0, 3.0};
  double ratio[3];
  int idx = 0;
  for (double t0 : {1e-2, 1e-3, 1e-4}) {
    cfg.t0 = t0;
    ZState z = soliton_seed(spec123, soliton, cfg);
    ratio[idx++] = std::abs(conservation_residual(z, spec123, soliton).res2) / (t0 * t0);
  }
  // |res2| / t0^2 stays bounded (it converges to (w + 1/2)^2)
  for (int i = 0; i < 3; ++i) {
    CHECK(ratio[i] > 0.3);
    CHECK(ratio[i] < 0.7);
  }
}

TEST_CASE("seed self-consistency under the flow") {
  // integrate the finer seed (t0/2) up to t0 and compare with the coarser
  // seed.  The even-order state components agree at O(t0^3); gdot_1 carries
  // the O(t0^2) truncation of the odd series g_1 = t + gamma t^3 + ...
  SeedConfig cfg;
  cfg.l = {6.0, 3.0};

  auto seed_gap = [&](double t0) {
    SeedConfig coarse = cfg, fine = cfg;
    coarse.t0 = t0;
    fine.t0 = 0.5 * t0;
    ZState zc = soliton_seed(spec123, soliton, coarse);
    ZState zf = soliton_seed(spec123, soliton, fine);
    std::vector<double> y(zf.dim());
    zf.pack(y);
    VectorField f = make_warped_z_field(spec123, soliton);
    Rk4Workspace ws;
    const int steps = 64;
    const double h = 0.5 * t0 / steps;
    for (int k = 0; k < steps; ++k) REQUIRE(rk4_step(f, y, h, ws).ok());
    ZState at_t0 = ZState::unpack(t0, y);
    std::vector<double> gap(zc.dim());
    std::vector<double> yc(zc.dim());
    zc.pack(yc);
    for (int i = 0; i < zc.dim(); ++i) gap[i] = std::abs(y[i] - yc[i]);
    return gap;
  };

  auto g1 = seed_gap(1e-2);
  auto g2 = seed_gap(5e-3);
  // gdot_1 (index 1): O(t0^2), coefficient (9/4)|gamma| with gamma = -A/6
  const double A = 2.0 / (2.0 * 36.0) + 3.0 / (2.0 * 9.0) + 0.5;
  CHECK(g1[1] / (1e-2 * 1e-2) == Approx(2.25 * A / 6.0).epsilon(0.05));
  CHECK(g1[1] / g2[1] == Approx(4.0).epsilon(0.1));
  // the remaining components agree at O(t0^3) or better
  for (int i : {0, 2, 3, 4, 5, 6, 7}) {
    CHECK(g1[i] <= 10.0 * 1e-6);
    if (g2[i] > 1e-14) CHECK(g1[i] / g2[i] > 5.0);
  }
}

TEST_CASE("ricci-flat runs keep the potential frozen") {
  SeedConfig cfg;
  cfg.t0 = 1e-3;
  cfg.l = {1.0, 1.0};
  cfg.mode = Mode::ricci_flat;
  ZState z0 = soliton_seed(spec123, ricci, cfg);
  std::vector<double> y(z0.dim());
  z0.pack(y);
  VectorField f = make_warped_z_field(spec123, ricci);
  Rk4Workspace ws;
  for (int k = 0; k < 1000; ++k) REQUIRE(rk4_step(f, y, 1e-3, ws).ok());
  CHECK(y[6] == 0.0);
  CHECK(y[7] == 0.0);
}
