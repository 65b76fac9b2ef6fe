#pragma once

#include "solitonflow/model.hpp"

namespace solitonflow {

/// Where to start the integration.  The flow has an irregular singular
/// point at t = 0 (the collapsed orbit), so runs start from a truncated
/// series solution evaluated at a small t0 > 0.
struct SeedConfig {
  double t0 = 1e-3;        // series evaluation point, 0 < t0 <= 0.01
  std::vector<double> l;   // initial radii of the non-collapsing factors
  double u0 = 0.0;         // potential at the singular orbit
  Mode mode = Mode::soliton;

  void validate() const;   // throws std::invalid_argument
};

/// Order-2 series state at t0 satisfying the C^2 smoothness conditions at
/// the collapsed circle: g_1 = t0, g_1' = 1, g_i = l_i + c_i t0^2 / 2,
/// g_i' = c_i t0 with c_i = l_i r_i(0) / (d_1 + 1), u = u0 + u2 t0^2 / 2,
/// u' = u2 t0 with (d_1 + 1) u2 = C + eps u0.  In Ricci-flat mode the
/// potential is frozen at u0.
ZState soliton_seed(const WarpedProductSpec& spec, const SolitonParams& p, const SeedConfig& cfg);

/// Same construction for a two-summands orbit with a collapsing d_1-sphere;
/// cfg.l holds the single initial radius of the second summand.
ZState two_summands_seed(const TwoSummandsSpec& spec, const SolitonParams& p,
                         const SeedConfig& cfg);

/// Phase-space image of the series seed (a point near the stationary point
/// P0 = (X_1 = 1, Y_1 = 1, 0, ...)), with phase time s set to 0.
XYState xy_seed(const WarpedProductSpec& spec, const SolitonParams& p, const SeedConfig& cfg);

}  // namespace solitonflow
