#pragma once

#include <string>
#include <vector>

#include "solitonflow/model.hpp"

namespace solitonflow {

// ---- stationary structure ---------------------------------------------------

enum class StationaryKind { origin, sphere_locus, subset_type, y1_line, x1_line };

const char* to_string(StationaryKind k);

/// One stationary point of the phase-space flow, or a canonical sample of a
/// stationary family (the sphere locus and the two lines carry free
/// parameters, described in `family`).
struct StationaryPoint {
  StationaryKind kind = StationaryKind::origin;
  XYState sample;
  std::vector<int> subset;  // factor indices (0-based) for subset_type
  std::string family;       // free-parameter description, empty for isolated points
  double lyapunov = 0.0;    // classification value: -1 or 0
};

/// Enumerate the stationary points: the origin, the sphere locus
/// {sum X^2 = 1, Y = 0}, the 2^{r-1}-1 subset points, and the two lines
/// {X = 0, Y_i = 0 (i>1)} and {X_1 = 1, rest 0, Y_1 free}.  Requires
/// d_1 = 1, lambda_1 = 0 and d_i > 1, lambda_i > 0 for i > 1.
std::vector<StationaryPoint> critical_points(const WarpedProductSpec& spec);

/// The attractor of the Ricci-flat flow: X_1 = 0, X_i = sqrt(d_i)/(n-1),
/// Y_i = sqrt((n-2)/lambda_i) X_i for i >= 2 (Y_1 = 0 in the full space).
XYState point_E(const WarpedProductSpec& spec);

/// Max-norm distance ignoring the Y_1 coordinate, which is unbounded along
/// Ricci-flat trajectories.
double distance_to_E(const XYState& xy, const XYState& E);

// ---- reconstruction ---------------------------------------------------------

/// Metric data recovered from a phase-space trajectory.
struct MetricSeries {
  std::vector<double> s, t, u, udot, trL, xi;
  std::vector<std::vector<double>> g;     // per factor
  std::vector<std::vector<double>> gdot;  // per factor
};

/// Soliton-mode reconstruction on {L < 0}:
///   dt = sqrt(L/C) ds,  g_i = (sqrt(d_i)/Y_i) sqrt(L/C),  u' = H - 1 in s.
/// Throws std::domain_error if any sample has L >= 0.  `Y1_at_s0` feeds the
/// Y_1 recovery for subsystem trajectories; full trajectories use their own
/// Y_1 column.
MetricSeries reconstruct_soliton_metric(const Trajectory& xy_traj, const WarpedProductSpec& spec,
                                        double C, double Y1_at_s0, double u_at_s0,
                                        double t_at_s0);

/// Ricci-flat reconstruction on {L = 0, H = 1}:
///   dt = exp(int G) ds,  g_i = (sqrt(d_i)/Y_i) exp(int G),  u constant.
/// Phase-space data determine a Ricci-flat metric only up to homothety, and
/// the exponential normalization pins dt/ds = 1 at the first sample, so the
/// physical scale enters through `trL_at_s0`, the mean curvature there
/// (use 1 to keep the normalized gauge).  Requires the constraint drift
/// |L|, |H-1| to stay below `drift_tol`.
MetricSeries reconstruct_ricci_flat_metric(const Trajectory& xy_traj,
                                           const WarpedProductSpec& spec, double Y1_at_s0,
                                           double u0, double t_at_s0, double trL_at_s0,
                                           double drift_tol = 1e-3);

// ---- claim flags and reports ------------------------------------------------

/// A monitored claim with the measured value and the tolerance band used.
/// Bounds are inclusive; an unused side is +-infinity.
struct ClaimFlag {
  std::string name;
  double value = 0.0;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool pass = false;
  std::string detail;
};

ClaimFlag make_claim(std::string name, double value, double lo, double hi,
                     std::string detail = "");

/// Discrete monotonicity and bound checks along a metric-coordinate soliton
/// trajectory: u' < 0, u'' < 0, trL strictly decreasing with 0 < trL <= n/t,
/// xi strictly decreasing, Rbar strictly decreasing with
/// -u' trL < Rbar < 2 sqrt(-C) n/t + n^2/t^2, F strictly decreasing and F0
/// non-increasing.  Derivatives are central differences; strictness uses a
/// slack of 1e-10 and the first `skip_initial` post-seed samples are
/// excluded (series truncation dominates there).
std::vector<ClaimFlag> monotonicity_monitors(const Trajectory& traj, double C, int n,
                                             int skip_initial = 10);

/// Tail-window asymptotic estimates and pass/fail results for the
/// monitored claims of a run.
struct DiagnosticsReport {
  std::string termination;
  std::string termination_detail;
  bool has_fits = false;
  double tail_lo = 0.0, tail_hi = 0.0;

  double udot_limit = std::numeric_limits<double>::quiet_NaN();
  double xi_limit = std::numeric_limits<double>::quiet_NaN();
  double g1_limit = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> growth_ratios;    // g_i^2 sqrt(-C) / (2 lambda_i t), i >= 2
  std::vector<double> xtilde_tail;      // X_i / sqrt(d_i)
  std::vector<double> ytilde_tail;      // Y_i / sqrt(d_i)
  std::vector<double> x_over_y2_tail;   // X_i / Y_i^2
  double xt_ratio_tail = std::numeric_limits<double>::quiet_NaN();  // Xt_1 / Xt_2
  double yt_ratio_tail = std::numeric_limits<double>::quiet_NaN();  // Yt_1 / Yt_2
  double ytilde1_cv = std::numeric_limits<double>::quiet_NaN();     // tail coeff. of variation
  std::vector<double> loglog_exponents;  // d log g_i^2 / d log t (ricci-flat runs)

  std::vector<ClaimFlag> claims;
};

/// Tail asymptotics of a warped-product z-run.  Limits are tail means,
/// slopes least-squares fits; the tail window is the final `tail_fraction`
/// of samples.  Early-terminated runs get a report with no fits.
DiagnosticsReport asymptotic_report(const Trajectory& traj, const WarpedProductSpec& spec,
                                    const SolitonParams& p, Mode mode,
                                    double tail_fraction = 0.2);

/// Same for a two-summands z-run (phase variables observed via xy_from_z).
DiagnosticsReport asymptotic_report(const Trajectory& traj, const TwoSummandsSpec& spec,
                                    const SolitonParams& p, double tail_fraction = 0.2);

/// Convergence diagnostics of a Ricci-flat phase-space run: constraint
/// drift maxima, monotonicity of the modified Lyapunov, distance to E and
/// the Lyapunov's minimum value.  `seed_drift_ref` is the unprojected seed
/// defect used for the drift-growth claim.
struct RicciFlatConvergence {
  double max_lyap = 0.0;
  double max_h_drift = 0.0;
  double dist_E_final = 0.0;
  double fhat_tail = 0.0;
  double fhat_min = 0.0;  // (n-1) prod d_i^{-d_i/(n-1)}
  std::vector<ClaimFlag> claims;
};

RicciFlatConvergence ricci_flat_convergence(const Trajectory& xy_traj,
                                            const WarpedProductSpec& spec,
                                            double seed_drift_ref,
                                            double tail_fraction = 0.2);

/// Deviation between a metric-coordinate run and a phase-space run from
/// matching seeds, after reparameterizing the z-samples by s = int xi dt.
struct CompareReport {
  double t_lo = 0.0, t_hi = 0.0;
  double max_deviation = 0.0;
  std::vector<double> per_coordinate;  // (X_1..X_r, Y_1..Y_r)
};

CompareReport oracle_compare(const Trajectory& z_traj, const Trajectory& xy_traj,
                             const WarpedProductSpec& spec, const SolitonParams& p,
                             double t_lo, double t_hi);

// ---- small numerical helpers (shared by reports and tests) ------------------

/// Phase time s(t_k) = s0 + int_{t0}^{t_k} xi dt along a z-trajectory.
/// The integrand is split as xi = d_1/t + (xi - d_1/t): the first part is
/// integrated exactly, so the quadrature stays accurate across the
/// near-singular start where xi ~ d_1/t.
std::vector<double> phase_time_from_z(const Trajectory& z_traj, int d1, double s0 = 0.0);

double tail_mean(std::span<const double> v, double tail_fraction = 0.2);
double least_squares_slope(std::span<const double> x, std::span<const double> y);
double linear_interp(std::span<const double> xs, std::span<const double> ys, double x);

/// Tail log-log slope of g_i^2 against t for each factor of a
/// reconstructed metric.
std::vector<double> growth_exponents(const MetricSeries& ms, double tail_fraction = 0.2);

/// (max - min) / |last| over the tail window.
double tail_relative_change(std::span<const double> v, double tail_fraction = 0.2);

}  // namespace solitonflow
