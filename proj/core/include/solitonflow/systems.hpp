#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "solitonflow/linalg.hpp"
#include "solitonflow/model.hpp"

namespace solitonflow {

/// A right-hand side y' = f(y).  All systems in this project are
/// autonomous; eval must be deterministic and side-effect free.
/// `positive` lists state indices that have to stay above the integrator's
/// positivity floor at every step and stage (the warping functions g_i).
/// `post_step` is an optional renormalization applied after each accepted
/// step (used for the constraint-locus rescaling of the phase-space flow).
struct VectorField {
  std::string label;
  int arity = 0;
  std::vector<int> positive;
  std::function<void(std::span<const double>, std::span<double>)> eval;
  std::function<void(std::span<double>)> post_step;
};

// ---- metric-coordinate systems -------------------------------------------
//
// State layout (g_1, g_1', ..., g_r, g_r', u, u'), time is arclength t.
//   g_i'' = lambda_i/g_i - (trL - g_i'/g_i - u') g_i' + (eps/2) g_i
//   u''   = -u' trL + u'^2 + eps u + C
// and the two-summands variant replaces lambda_i/g_i by r_i(g) g_i.

void warped_z_rhs(std::span<const double> y, std::span<double> dy,
                  const WarpedProductSpec& spec, const SolitonParams& p);
void two_summands_z_rhs(std::span<const double> y, std::span<double> dy,
                        const TwoSummandsSpec& spec, const SolitonParams& p);

/// Typed wrappers; the returned ZState carries the componentwise time
/// derivative of `z` (g <- g', gdot <- g'', u <- u', udot <- u'').
ZState warped_z_rhs(const ZState& z, const WarpedProductSpec& spec, const SolitonParams& p);
ZState two_summands_z_rhs(const ZState& z, const TwoSummandsSpec& spec, const SolitonParams& p);

// ---- phase-space system ---------------------------------------------------
//
// State layout (X_1..X_r, Y_1..Y_r), time is the phase coordinate s.
//   X_i' = X_i (G - 1) + lambda_i Y_i^2 / sqrt(d_i),   G = sum X_j^2
//   Y_i' = Y_i (G - X_i / sqrt(d_i))
// The subsystem omits the Y_1 row; its layout is (X_1..X_r, Y_2..Y_r).

void xy_rhs(std::span<const double> y, std::span<double> dy, const WarpedProductSpec& spec);
void xy_subsystem_rhs(std::span<const double> y, std::span<double> dy,
                      const WarpedProductSpec& spec);

XYState xy_rhs(const XYState& xy, const WarpedProductSpec& spec);

/// Analytic Jacobian of the phase-space field at a point, a dense
/// 2r x 2r matrix in the (X, Y) layout.
Matrix xy_jacobian(const XYState& xy, const WarpedProductSpec& spec);

// ---- field factories -------------------------------------------------------

VectorField make_warped_z_field(const WarpedProductSpec& spec, const SolitonParams& p);
VectorField make_two_summands_z_field(const TwoSummandsSpec& spec, const SolitonParams& p);

/// Phase-space field.  With `project_constraint` set, every accepted step is
/// rescaled by 1/sqrt(sum X^2 + sum lambda Y^2) so the trajectory is pinned
/// to the constraint locus {L = 0}; the locus is invariant but exponentially
/// repelling, so long unprojected runs drift off it.
VectorField make_xy_field(const WarpedProductSpec& spec, bool project_constraint = false);
VectorField make_xy_subsystem_field(const WarpedProductSpec& spec);

/// Recover the omitted Y_1 series of a subsystem trajectory from
/// Y_1' / Y_1 = G - X_1 by composite-trapezoid quadrature on the grid.
/// Also accepts full-flavor trajectories (useful as a cross-check).
std::vector<double> recover_Y1(const Trajectory& sub_traj, double Y1_at_s0);

}  // namespace solitonflow
