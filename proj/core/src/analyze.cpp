#include "solitonflow/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "solitonflow/integrate.hpp"
#include "solitonflow/systems.hpp"

namespace solitonflow {

namespace {

constexpr double kStrictSlack = 1e-10;

double nan_d() { return std::numeric_limits<double>::quiet_NaN(); }

int traj_r(const Trajectory& traj) {
  switch (traj.system) {
    case SystemKind::warped_z:
    case SystemKind::two_summands_z:
      return (traj.state_dim - 2) / 2;
    case SystemKind::xy_full:
      return traj.state_dim / 2;
    case SystemKind::xy_subsystem:
      return (traj.state_dim + 1) / 2;
  }
  return 0;
}

XYState xy_sample(const Trajectory& traj, std::size_t k, const std::vector<double>* y1) {
  const int r = traj_r(traj);
  auto row = traj.state_row(k);
  XYState xy;
  xy.s = traj.time[k];
  xy.X.assign(row.begin(), row.begin() + r);
  xy.Y.resize(r, 0.0);
  if (traj.system == SystemKind::xy_full) {
    for (int i = 0; i < r; ++i) xy.Y[i] = row[r + i];
  } else {
    for (int i = 1; i < r; ++i) xy.Y[i] = row[r + i - 1];
    if (y1) xy.Y[0] = (*y1)[k];
  }
  return xy;
}

}  // namespace

const char* to_string(StationaryKind k) {
  switch (k) {
    case StationaryKind::origin: return "origin";
    case StationaryKind::sphere_locus: return "sphere-locus";
    case StationaryKind::subset_type: return "subset-type";
    case StationaryKind::y1_line: return "y1-line";
    case StationaryKind::x1_line: return "x1-line";
  }
  return "?";
}

ClaimFlag make_claim(std::string name, double value, double lo, double hi, std::string detail) {
  ClaimFlag c;
  c.name = std::move(name);
  c.value = value;
  c.lo = lo;
  c.hi = hi;
  c.pass = std::isfinite(value) && value >= lo && value <= hi;
  c.detail = std::move(detail);
  return c;
}

std::vector<StationaryPoint> critical_points(const WarpedProductSpec& spec) {
  spec.validate();
  const int r = spec.r();
  if (spec.d[0] != 1 || spec.lambda[0] != 0.0)
    throw std::invalid_argument("critical_points: requires d_1 = 1, lambda_1 = 0");
  for (int i = 1; i < r; ++i)
    if (spec.d[i] < 2 || !(spec.lambda[i] > 0.0))
      throw std::invalid_argument("critical_points: requires d_i > 1, lambda_i > 0 for i > 1");

  const int n = spec.n();
  std::vector<StationaryPoint> out;

  auto zero_state = [r]() {
    XYState xy;
    xy.X.assign(r, 0.0);
    xy.Y.assign(r, 0.0);
    return xy;
  };

  {
    StationaryPoint p;
    p.kind = StationaryKind::origin;
    p.sample = zero_state();
    p.lyapunov = -1.0;
    out.push_back(std::move(p));
  }
  {
    // any point with sum X_i^2 = 1, Y = 0; the diagonal sample is canonical
    StationaryPoint p;
    p.kind = StationaryKind::sphere_locus;
    p.sample = zero_state();
    for (int i = 0; i < r; ++i)
      p.sample.X[i] = std::sqrt(static_cast<double>(spec.d[i]) / n);
    p.family = "any X with sum X_i^2 = 1, Y = 0";
    p.lyapunov = 0.0;
    out.push_back(std::move(p));
  }
  // one point per nonempty subset A of the non-flat factors
  for (unsigned mask = 1; mask < (1u << (r - 1)); ++mask) {
    StationaryPoint p;
    p.kind = StationaryKind::subset_type;
    p.sample = zero_state();
    int dsum = 0;
    for (int i = 1; i < r; ++i)
      if (mask & (1u << (i - 1))) dsum += spec.d[i];
    const double rho = 1.0 / dsum;
    for (int i = 1; i < r; ++i) {
      if (!(mask & (1u << (i - 1)))) continue;
      p.subset.push_back(i);
      p.sample.X[i] = std::sqrt(static_cast<double>(spec.d[i])) * rho;
      p.sample.Y[i] = std::sqrt(spec.d[i] / spec.lambda[i] * rho * (1.0 - rho));
    }
    p.lyapunov = 0.0;
    out.push_back(std::move(p));
  }
  {
    StationaryPoint p;
    p.kind = StationaryKind::y1_line;
    p.sample = zero_state();
    p.sample.Y[0] = 1.0;
    p.family = "Y_1 free";
    p.lyapunov = -1.0;
    out.push_back(std::move(p));
  }
  {
    // canonical sample is P0 = (X_1 = 1, Y_1 = 1)
    StationaryPoint p;
    p.kind = StationaryKind::x1_line;
    p.sample = zero_state();
    p.sample.X[0] = 1.0;
    p.sample.Y[0] = 1.0;
    p.family = "X_1 = 1, Y_1 free";
    p.lyapunov = 0.0;
    out.push_back(std::move(p));
  }
  return out;
}

XYState point_E(const WarpedProductSpec& spec) {
  const int r = spec.r();
  if (r < 2) throw std::invalid_argument("point_E: requires r >= 2");
  for (int i = 1; i < r; ++i)
    if (!(spec.lambda[i] > 0.0))
      throw std::invalid_argument("point_E: requires lambda_i > 0 for i >= 2");
  const double n = spec.n();
  XYState xy;
  xy.X.assign(r, 0.0);
  xy.Y.assign(r, 0.0);
  for (int i = 1; i < r; ++i) {
    xy.X[i] = std::sqrt(static_cast<double>(spec.d[i])) / (n - 1.0);
    xy.Y[i] = std::sqrt((n - 2.0) / spec.lambda[i]) * xy.X[i];
  }
  return xy;
}

double distance_to_E(const XYState& xy, const XYState& E) {
  double dist = 0.0;
  for (int i = 0; i < xy.r(); ++i) {
    dist = std::max(dist, std::abs(xy.X[i] - E.X[i]));
    if (i >= 1) dist = std::max(dist, std::abs(xy.Y[i] - E.Y[i]));
  }
  return dist;
}

// ---- reconstruction ---------------------------------------------------------

namespace {

std::vector<double> y1_column(const Trajectory& traj, double Y1_at_s0) {
  if (traj.system == SystemKind::xy_full) {
    const int r = traj_r(traj);
    std::vector<double> y1(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) y1[k] = traj.state_row(k)[r];
    return y1;
  }
  return recover_Y1(traj, Y1_at_s0);
}

}  // namespace

MetricSeries reconstruct_soliton_metric(const Trajectory& xy_traj, const WarpedProductSpec& spec,
                                        double C, double Y1_at_s0, double u_at_s0,
                                        double t_at_s0) {
  if (xy_traj.system != SystemKind::xy_full && xy_traj.system != SystemKind::xy_subsystem)
    throw std::invalid_argument("reconstruct_soliton_metric: expects a phase-space trajectory");
  if (!(C < 0.0)) throw std::invalid_argument("reconstruct_soliton_metric: requires C < 0");

  const int r = spec.r();
  const std::size_t m = xy_traj.size();
  std::vector<double> y1 = y1_column(xy_traj, Y1_at_s0);

  std::vector<double> xi(m), hminus1(m);
  for (std::size_t k = 0; k < m; ++k) {
    XYState xy = xy_sample(xy_traj, k, &y1);
    const double L = lyapunov_L(xy, spec);
    if (!(L < 0.0))
      throw std::domain_error("reconstruct_soliton_metric: trajectory leaves {L < 0}");
    xi[k] = std::sqrt(C / L);
    hminus1[k] = script_H(xy, spec) - 1.0;
  }

  MetricSeries out;
  out.s = xy_traj.time;
  out.xi = xi;

  std::vector<double> dt_ds(m);
  for (std::size_t k = 0; k < m; ++k) dt_ds[k] = 1.0 / xi[k];
  out.t = cumulative_trapezoid(dt_ds, xy_traj.h);
  for (double& v : out.t) v += t_at_s0;

  out.u = cumulative_trapezoid(hminus1, xy_traj.h);  // u' = H - 1 in phase time
  for (double& v : out.u) v += u_at_s0;

  out.udot.resize(m);
  out.trL.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    out.udot[k] = xi[k] * hminus1[k];
    out.trL[k] = xi[k] * (hminus1[k] + 1.0);
  }

  out.g.assign(r, std::vector<double>(m));
  out.gdot.assign(r, std::vector<double>(m));
  for (std::size_t k = 0; k < m; ++k) {
    XYState xy = xy_sample(xy_traj, k, &y1);
    for (int i = 0; i < r; ++i) {
      const double sq = std::sqrt(static_cast<double>(spec.d[i]));
      out.g[i][k] = sq / (xy.Y[i] * xi[k]);
      out.gdot[i][k] = out.g[i][k] * xi[k] * xy.X[i] / sq;
    }
  }
  return out;
}

MetricSeries reconstruct_ricci_flat_metric(const Trajectory& xy_traj,
                                           const WarpedProductSpec& spec, double Y1_at_s0,
                                           double u0, double t_at_s0, double trL_at_s0,
                                           double drift_tol) {
  if (xy_traj.system != SystemKind::xy_full && xy_traj.system != SystemKind::xy_subsystem)
    throw std::invalid_argument("reconstruct_ricci_flat_metric: expects a phase-space trajectory");
  if (!(trL_at_s0 > 0.0))
    throw std::invalid_argument("reconstruct_ricci_flat_metric: trL(s0) must be > 0");

  const int r = spec.r();
  const std::size_t m = xy_traj.size();
  std::vector<double> y1 = y1_column(xy_traj, Y1_at_s0);

  std::vector<double> G(m), H(m);
  for (std::size_t k = 0; k < m; ++k) {
    XYState xy = xy_sample(xy_traj, k, &y1);
    const double L = lyapunov_L(xy, spec);
    H[k] = script_H(xy, spec);
    if (std::abs(L) > drift_tol || std::abs(H[k] - 1.0) > drift_tol) {
      char msg[120];
      std::snprintf(msg, sizeof msg,
                    "reconstruct_ricci_flat_metric: constraint drift %.3e above %.3e at s = %.6g",
                    std::max(std::abs(L), std::abs(H[k] - 1.0)), drift_tol, xy_traj.time[k]);
      throw std::domain_error(msg);
    }
    G[k] = script_G(xy);
  }

  std::vector<double> intG = cumulative_trapezoid(G, xy_traj.h);
  // homothety gauge: scale so the reconstructed mean curvature at s0 is
  // trL_at_s0 (the normalized form has trL(s0) = H(s0))
  const double scale = H[0] / trL_at_s0;
  std::vector<double> expG(m);
  for (std::size_t k = 0; k < m; ++k) expG[k] = scale * std::exp(intG[k]);

  MetricSeries out;
  out.s = xy_traj.time;
  out.t = cumulative_trapezoid(expG, xy_traj.h);
  for (double& v : out.t) v += t_at_s0;

  out.u.assign(m, u0);
  out.udot.assign(m, 0.0);
  out.trL.resize(m);
  out.xi.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    out.trL[k] = H[k] / expG[k];
    out.xi[k] = out.trL[k];
  }

  out.g.assign(r, std::vector<double>(m));
  out.gdot.assign(r, std::vector<double>(m));
  for (std::size_t k = 0; k < m; ++k) {
    XYState xy = xy_sample(xy_traj, k, &y1);
    for (int i = 0; i < r; ++i) {
      const double sq = std::sqrt(static_cast<double>(spec.d[i]));
      out.g[i][k] = sq / xy.Y[i] * expG[k];
      out.gdot[i][k] = out.g[i][k] * xy.X[i] / (sq * expG[k]);
    }
  }
  return out;
}

// ---- monotonicity monitors --------------------------------------------------

namespace {

struct WorstMargin {
  double margin = std::numeric_limits<double>::infinity();
  double at = nan_d();
  int violations = 0;

  void update(double m, double t, double slack) {
    if (m < margin) {
      margin = m;
      at = t;
    }
    if (m < -slack) ++violations;
  }

  ClaimFlag claim(const std::string& name, double slack) const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "worst margin %.3e at t = %.6g (%d violations)", margin, at,
                  violations);
    return make_claim(name, margin, -slack, std::numeric_limits<double>::infinity(), buf);
  }
};

}  // namespace

std::vector<ClaimFlag> monotonicity_monitors(const Trajectory& traj, double C, int n,
                                             int skip_initial) {
  if (traj.system != SystemKind::warped_z && traj.system != SystemKind::two_summands_z)
    throw std::invalid_argument("monotonicity_monitors: expects a metric-coordinate trajectory");
  if (traj.scalars.size() != traj.size())
    throw std::invalid_argument("monotonicity_monitors: scalar series required");

  const std::size_t m = traj.size();
  const int r = traj_r(traj);
  const std::size_t lo = static_cast<std::size_t>(std::max(skip_initial, 1));
  if (m < lo + 3) throw std::invalid_argument("monotonicity_monitors: trajectory too short");

  std::vector<double> udot(m), F0(m), F(m);
  for (std::size_t k = 0; k < m; ++k) {
    udot[k] = traj.state_row(k)[2 * r + 1];
    const auto& sc = traj.scalars[k];
    const double v2n = std::pow(sc.relvol, 2.0 / n);
    F0[k] = v2n * (sc.S + sc.trL2 - sc.trL * sc.trL / n);
    F[k] = v2n * (sc.S + sc.trL2);
  }

  const double sqC = std::sqrt(-C);
  WorstMargin udot_neg, uddot_neg, trL_dec, trL_pos, trL_cap, xi_dec, rbar_dec, rbar_low,
      low_pos, rbar_up, f_dec, f0_noninc;

  for (std::size_t k = lo; k < m; ++k) {
    const double t = traj.time[k];
    const auto& sc = traj.scalars[k];
    udot_neg.update(-udot[k], t, kStrictSlack);
    trL_pos.update(sc.trL, t, kStrictSlack);
    trL_cap.update(n / t - sc.trL, t, kStrictSlack);
    low_pos.update(-udot[k] * sc.trL, t, kStrictSlack);
    rbar_low.update(sc.Rbar - (-udot[k] * sc.trL), t, kStrictSlack);
    rbar_up.update(2.0 * sqC * n / t + n * n / (t * t) - sc.Rbar, t, kStrictSlack);

    if (k + 1 < m) {
      // second derivative of u by central differences, monotonicity by
      // forward pairs
      uddot_neg.update(udot[k - 1] - udot[k + 1], traj.time[k], kStrictSlack);
      trL_dec.update(sc.trL - traj.scalars[k + 1].trL, t, kStrictSlack);
      xi_dec.update(sc.xi - traj.scalars[k + 1].xi, t, kStrictSlack);
      rbar_dec.update(sc.Rbar - traj.scalars[k + 1].Rbar, t, kStrictSlack);
      f_dec.update(F[k] - F[k + 1], t, kStrictSlack);
      f0_noninc.update(F0[k] - F0[k + 1], t, kStrictSlack);
    }
  }

  std::vector<ClaimFlag> claims;
  claims.push_back(udot_neg.claim("udot-negative", kStrictSlack));
  claims.push_back(uddot_neg.claim("uddot-negative", kStrictSlack));
  claims.push_back(trL_dec.claim("trL-strictly-decreasing", kStrictSlack));
  claims.push_back(trL_pos.claim("trL-positive", kStrictSlack));
  claims.push_back(trL_cap.claim("trL-at-most-n-over-t", kStrictSlack));
  claims.push_back(xi_dec.claim("xi-strictly-decreasing", kStrictSlack));
  claims.push_back(rbar_dec.claim("Rbar-strictly-decreasing", kStrictSlack));
  claims.push_back(low_pos.claim("udot-trL-product-positive", kStrictSlack));
  claims.push_back(rbar_low.claim("Rbar-above-minus-udot-trL", kStrictSlack));
  claims.push_back(rbar_up.claim("Rbar-below-decay-bound", kStrictSlack));
  claims.push_back(f_dec.claim("calF-strictly-decreasing", kStrictSlack));
  claims.push_back(f0_noninc.claim("F0-nonincreasing", kStrictSlack));
  return claims;
}

// ---- asymptotic reports -----------------------------------------------------

namespace {

std::size_t tail_start(std::size_t m, double tail_fraction) {
  const auto win = static_cast<std::size_t>(static_cast<double>(m) * tail_fraction);
  return m - std::max<std::size_t>(win, 2);
}

double mean_of(std::span<const double> v, std::size_t from) {
  double acc = 0.0;
  for (std::size_t k = from; k < v.size(); ++k) acc += v[k];
  return acc / static_cast<double>(v.size() - from);
}

double cv_of(std::span<const double> v, std::size_t from) {
  const double mu = mean_of(v, from);
  double var = 0.0;
  for (std::size_t k = from; k < v.size(); ++k) var += (v[k] - mu) * (v[k] - mu);
  var /= static_cast<double>(v.size() - from);
  return std::sqrt(var) / std::abs(mu);
}

// common tail extraction for warped and two-summands z-runs
DiagnosticsReport z_run_report(const Trajectory& traj, std::span<const int> d,
                               std::span<const double> lambda, const SolitonParams& p, Mode mode,
                               double tail_fraction) {
  DiagnosticsReport rep;
  rep.termination = to_string(traj.termination);
  rep.termination_detail = traj.termination_detail;
  if (traj.termination != Termination::reached_t_max) return rep;
  if (traj.scalars.size() != traj.size())
    throw std::invalid_argument("asymptotic_report: scalar series required");

  const std::size_t m = traj.size();
  const int r = static_cast<int>(d.size());
  const std::size_t k0 = tail_start(m, tail_fraction);
  rep.has_fits = true;
  rep.tail_lo = traj.time[k0];
  rep.tail_hi = traj.time[m - 1];

  std::vector<double> udot(m), xi(m), g1(m);
  std::vector<std::vector<double>> xt(r, std::vector<double>(m)), yt(r, std::vector<double>(m)),
      xoy2(r, std::vector<double>(m));
  for (std::size_t k = 0; k < m; ++k) {
    auto y = traj.state_row(k);
    const double ud = y[2 * r + 1];
    udot[k] = ud;
    xi[k] = traj.scalars[k].xi;
    g1[k] = y[0];
    for (int i = 0; i < r; ++i) {
      const double gi = y[2 * i], gidot = y[2 * i + 1];
      const double L = gidot / gi;
      xt[i][k] = L / xi[k];
      yt[i][k] = 1.0 / (xi[k] * gi);
      xoy2[i][k] = xi[k] * gi * gidot / std::sqrt(static_cast<double>(d[i]));
    }
  }

  rep.udot_limit = mean_of(udot, k0);
  rep.xi_limit = mean_of(xi, k0);
  rep.g1_limit = mean_of(g1, k0);
  rep.ytilde1_cv = cv_of(yt[0], k0);

  rep.xtilde_tail.resize(r);
  rep.ytilde_tail.resize(r);
  rep.x_over_y2_tail.resize(r);
  for (int i = 0; i < r; ++i) {
    rep.xtilde_tail[i] = mean_of(xt[i], k0);
    rep.ytilde_tail[i] = mean_of(yt[i], k0);
    rep.x_over_y2_tail[i] = mean_of(xoy2[i], k0);
  }

  if (r >= 2) {
    std::vector<double> xr(m), yr(m);
    for (std::size_t k = 0; k < m; ++k) {
      xr[k] = xt[0][k] / xt[1][k];
      yr[k] = yt[0][k] / yt[1][k];
    }
    rep.xt_ratio_tail = mean_of(xr, k0);
    rep.yt_ratio_tail = mean_of(yr, k0);
  }

  const double sqC = std::sqrt(-p.C);
  if (mode == Mode::soliton) {
    rep.growth_ratios.assign(r, nan_d());
    for (int i = 1; i < r; ++i) {
      if (!(lambda[i] > 0.0)) continue;
      std::vector<double> ratio(m);
      for (std::size_t k = 0; k < m; ++k) {
        const double gi = traj.state_row(k)[2 * i];
        ratio[k] = gi * gi * sqC / (2.0 * lambda[i] * traj.time[k]);
      }
      rep.growth_ratios[i] = mean_of(ratio, k0);
    }
    rep.claims.push_back(make_claim("udot-limit-near-sqrt-C",
                                    std::abs(rep.udot_limit + sqC) / sqC, 0.0, 0.05));
    rep.claims.push_back(make_claim("xi-limit-near-sqrt-C",
                                    std::abs(rep.xi_limit - sqC) / sqC, 0.0, 0.05));
    double worst = 0.0;
    for (int i = 1; i < r; ++i) {
      if (!(lambda[i] > 0.0)) continue;
      const double target = lambda[i] / std::sqrt(static_cast<double>(d[i]));
      worst = std::max(worst, std::abs(rep.x_over_y2_tail[i] - target) / target);
    }
    rep.claims.push_back(make_claim("X-over-Y2-limit-near-lambda", worst, 0.0, 0.05));
    rep.claims.push_back(make_claim("Ytilde1-flat-cv", rep.ytilde1_cv, 0.0, 1e-2));
  } else {
    // ricci-flat z-run: power-law growth of g_i^2 and a flat g_1 tail
    rep.loglog_exponents.assign(r, nan_d());
    std::vector<double> logt(m - k0);
    for (std::size_t k = k0; k < m; ++k) logt[k - k0] = std::log(traj.time[k]);
    for (int i = 1; i < r; ++i) {
      std::vector<double> lg(m - k0);
      for (std::size_t k = k0; k < m; ++k) {
        const double gi = traj.state_row(k)[2 * i];
        lg[k - k0] = 2.0 * std::log(gi);
      }
      rep.loglog_exponents[i] = least_squares_slope(logt, lg);
    }
  }
  return rep;
}

}  // namespace

DiagnosticsReport asymptotic_report(const Trajectory& traj, const WarpedProductSpec& spec,
                                    const SolitonParams& p, Mode mode, double tail_fraction) {
  if (traj.system != SystemKind::warped_z)
    throw std::invalid_argument("asymptotic_report: expects a warped-z trajectory");
  return z_run_report(traj, spec.d, spec.lambda, p, mode, tail_fraction);
}

DiagnosticsReport asymptotic_report(const Trajectory& traj, const TwoSummandsSpec& spec,
                                    const SolitonParams& p, double tail_fraction) {
  if (traj.system != SystemKind::two_summands_z)
    throw std::invalid_argument("asymptotic_report: expects a two-summands trajectory");
  const int d[2] = {spec.d1, spec.d2};
  const double lambda[2] = {0.0, 0.0};  // growth-ratio targets not defined here
  DiagnosticsReport rep = z_run_report(traj, d, lambda, p, Mode::soliton, tail_fraction);
  if (!rep.has_fits) return rep;

  // replace the warped-only claims with the two-summands observations
  rep.claims.clear();
  rep.growth_ratios.clear();
  rep.x_over_y2_tail.clear();
  const double sqC = std::sqrt(-p.C);
  rep.claims.push_back(make_claim("udot-limit-near-sqrt-C",
                                  std::abs(rep.udot_limit + sqC) / sqC, 0.0, 0.1));
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i)
    worst = std::min(worst, rep.ytilde_tail[i] - rep.xtilde_tail[i]);
  rep.claims.push_back(make_claim("Xtilde-below-Ytilde", worst, 0.0,
                                  std::numeric_limits<double>::infinity()));
  return rep;
}

RicciFlatConvergence ricci_flat_convergence(const Trajectory& xy_traj,
                                            const WarpedProductSpec& spec, double seed_drift_ref,
                                            double tail_fraction) {
  if (xy_traj.system != SystemKind::xy_full && xy_traj.system != SystemKind::xy_subsystem)
    throw std::invalid_argument("ricci_flat_convergence: expects a phase-space trajectory");

  const std::size_t m = xy_traj.size();
  if (m < 4) throw std::invalid_argument("ricci_flat_convergence: trajectory too short");

  RicciFlatConvergence out;
  const XYState E = point_E(spec);
  std::vector<double> fhat(m);
  double max_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m; ++k) {
    XYState xy = xy_sample(xy_traj, k, nullptr);
    out.max_lyap = std::max(out.max_lyap, std::abs(lyapunov_L(xy, spec)));
    out.max_h_drift = std::max(out.max_h_drift, std::abs(script_H(xy, spec) - 1.0));
    fhat[k] = f_hat(xy, spec);
    if (k > 0) max_increase = std::max(max_increase, fhat[k] - fhat[k - 1]);
  }
  out.dist_E_final = distance_to_E(xy_sample(xy_traj, m - 1, nullptr), E);

  const std::size_t k0 = tail_start(m, tail_fraction);
  out.fhat_tail = mean_of(fhat, k0);
  const double n = spec.n();
  double fmin = n - 1.0;
  for (int i = 1; i < spec.r(); ++i)
    fmin *= std::pow(static_cast<double>(spec.d[i]), -spec.d[i] / (n - 1.0));
  out.fhat_min = fmin;

  out.claims.push_back(make_claim("lyap-drift-max", out.max_lyap, 0.0, 1e-3));
  out.claims.push_back(make_claim("H-drift-max", out.max_h_drift, 0.0, 1e-3));
  out.claims.push_back(make_claim("fhat-nonincreasing", -max_increase, -kStrictSlack,
                                  std::numeric_limits<double>::infinity()));
  out.claims.push_back(make_claim("distance-to-E-final", out.dist_E_final, 0.0, 1e-3));
  out.claims.push_back(
      make_claim("fhat-tail-at-minimum", std::abs(out.fhat_tail - fmin), 0.0, 1e-3));
  out.claims.push_back(make_claim("drift-within-10x-seed",
                                  std::max(out.max_lyap, out.max_h_drift), 0.0,
                                  10.0 * seed_drift_ref));
  return out;
}

// ---- oracle comparison ------------------------------------------------------

std::vector<double> phase_time_from_z(const Trajectory& z_traj, int d1, double s0) {
  const std::size_t m = z_traj.size();
  if (z_traj.scalars.size() != m)
    throw std::invalid_argument("phase_time_from_z: scalar series required");
  // xi - d1/t is bounded near the collapsed orbit; the d1/t part integrates
  // to the exact logarithm
  std::vector<double> regular(m);
  for (std::size_t k = 0; k < m; ++k)
    regular[k] = z_traj.scalars[k].xi - d1 / z_traj.time[k];
  std::vector<double> s = cumulative_trapezoid(regular, z_traj.h);
  const double t0 = z_traj.time[0];
  for (std::size_t k = 0; k < m; ++k)
    s[k] += s0 + d1 * std::log(z_traj.time[k] / t0);
  return s;
}

double tail_mean(std::span<const double> v, double tail_fraction) {
  return mean_of(v, tail_start(v.size(), tail_fraction));
}

std::vector<double> growth_exponents(const MetricSeries& ms, double tail_fraction) {
  const std::size_t m = ms.t.size();
  const std::size_t k0 = tail_start(m, tail_fraction);
  std::vector<double> logt(m - k0);
  for (std::size_t k = k0; k < m; ++k) logt[k - k0] = std::log(ms.t[k]);
  std::vector<double> out(ms.g.size());
  for (std::size_t i = 0; i < ms.g.size(); ++i) {
    std::vector<double> lg(m - k0);
    for (std::size_t k = k0; k < m; ++k) lg[k - k0] = 2.0 * std::log(ms.g[i][k]);
    out[i] = least_squares_slope(logt, lg);
  }
  return out;
}

double tail_relative_change(std::span<const double> v, double tail_fraction) {
  const std::size_t k0 = tail_start(v.size(), tail_fraction);
  double lo = v[k0], hi = v[k0];
  for (std::size_t k = k0; k < v.size(); ++k) {
    lo = std::min(lo, v[k]);
    hi = std::max(hi, v[k]);
  }
  return (hi - lo) / std::abs(v.back());
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  return sxy / sxx;
}

double linear_interp(std::span<const double> xs, std::span<const double> ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return (1.0 - w) * ys[j - 1] + w * ys[j];
}

CompareReport oracle_compare(const Trajectory& z_traj, const Trajectory& xy_traj,
                             const WarpedProductSpec& spec, const SolitonParams& p,
                             double t_lo, double t_hi) {
  if (z_traj.system != SystemKind::warped_z || xy_traj.system != SystemKind::xy_full)
    throw std::invalid_argument("oracle_compare: expects a warped-z and an xy-full trajectory");

  const int r = spec.r();
  std::vector<double> s_of_t = phase_time_from_z(z_traj, spec.d[0], xy_traj.start);

  // per-coordinate series of the phase-space run
  const std::size_t mx = xy_traj.size();
  std::vector<std::vector<double>> xy_cols(2 * r, std::vector<double>(mx));
  for (std::size_t k = 0; k < mx; ++k) {
    auto y = xy_traj.state_row(k);
    for (int c = 0; c < 2 * r; ++c) xy_cols[c][k] = y[c];
  }

  CompareReport rep;
  rep.t_lo = t_lo;
  rep.t_hi = t_hi;
  rep.per_coordinate.assign(2 * r, 0.0);
  const double s_max = xy_traj.time.back();

  for (std::size_t k = 0; k < z_traj.size(); ++k) {
    const double t = z_traj.time[k];
    if (t < t_lo || t > t_hi) continue;
    if (s_of_t[k] > s_max) break;
    XYState mapped = xy_from_z(ZState::unpack(t, z_traj.state_row(k)), spec, p);
    for (int c = 0; c < 2 * r; ++c) {
      const double ref = (c < r) ? mapped.X[c] : mapped.Y[c - r];
      const double got = linear_interp(xy_traj.time, xy_cols[c], s_of_t[k]);
      rep.per_coordinate[c] = std::max(rep.per_coordinate[c], std::abs(got - ref));
    }
  }
  rep.max_deviation = *std::max_element(rep.per_coordinate.begin(), rep.per_coordinate.end());
  return rep;
}

}  // namespace solitonflow
