#include "solitonflow/seed.hpp"

#include <cmath>
#include <stdexcept>

namespace solitonflow {

void SeedConfig::validate() const {
  if (!(t0 > 0.0) || t0 > 0.01)
    throw std::invalid_argument("seed.t0: must satisfy 0 < t0 <= 0.01");
  for (double li : l)
    if (!(li > 0.0)) throw std::invalid_argument("seed.l: initial radii must be > 0");
}

ZState soliton_seed(const WarpedProductSpec& spec, const SolitonParams& p,
                    const SeedConfig& cfg) {
  spec.validate();
  validate_params(p, cfg.mode);
  cfg.validate();
  const int r = spec.r();
  if (spec.d[0] != 1)
    throw std::invalid_argument("seed: warped construction requires a collapsing circle (d_1 = 1)");
  for (int i = 1; i < r; ++i)
    if (spec.d[i] < 2)
      throw std::invalid_argument("seed: non-collapsing factors must have d_i >= 2");
  if (static_cast<int>(cfg.l.size()) != r - 1)
    throw std::invalid_argument("seed.l: expected one radius per non-collapsing factor");

  const double t0 = cfg.t0;
  const int d1 = spec.d[0];
  ZState z;
  z.t = t0;
  z.g.resize(r);
  z.gdot.resize(r);
  z.g[0] = t0;
  z.gdot[0] = 1.0;
  for (int i = 1; i < r; ++i) {
    const double li = cfg.l[i - 1];
    // second-order coefficient from the t -> 0 limit of the flow:
    // (d_1 + 1) g_i''(0) = l_i (lambda_i / l_i^2 + eps / 2)
    const double ri0 = spec.lambda[i] / (li * li);
    const double c = li * (ri0 + 0.5 * p.epsilon) / (d1 + 1);
    z.g[i] = li + 0.5 * c * t0 * t0;
    z.gdot[i] = c * t0;
  }
  if (cfg.mode == Mode::ricci_flat) {
    z.u = cfg.u0;
    z.udot = 0.0;
  } else {
    const double u2 = (p.C + p.epsilon * cfg.u0) / (d1 + 1);
    z.u = cfg.u0 + 0.5 * u2 * t0 * t0;
    z.udot = u2 * t0;
  }
  return z;
}

ZState two_summands_seed(const TwoSummandsSpec& spec, const SolitonParams& p,
                         const SeedConfig& cfg) {
  spec.validate();
  validate_params(p, cfg.mode);
  cfg.validate();
  if (cfg.l.size() != 1)
    throw std::invalid_argument("seed.l: two-summands seed takes a single radius h_bar");
  const double hbar = cfg.l[0];
  if (!(hbar > 0.0)) throw std::invalid_argument("seed.h_bar: must be > 0");

  const double t0 = cfg.t0;
  ZState z;
  z.t = t0;
  z.g.resize(2);
  z.gdot.resize(2);
  z.g[0] = t0;
  z.gdot[0] = 1.0;
  // r_2(0, hbar) = A2 / (d2 hbar^2): the A3 coupling vanishes as g_1 -> 0
  const double r20 = spec.A2 / (spec.d2 * hbar * hbar);
  const double c = hbar * (r20 + 0.5 * p.epsilon) / (spec.d1 + 1);
  z.g[1] = hbar + 0.5 * c * t0 * t0;
  z.gdot[1] = c * t0;
  if (cfg.mode == Mode::ricci_flat) {
    z.u = cfg.u0;
    z.udot = 0.0;
  } else {
    const double u2 = (p.C + p.epsilon * cfg.u0) / (spec.d1 + 1);
    z.u = cfg.u0 + 0.5 * u2 * t0 * t0;
    z.udot = u2 * t0;
  }
  return z;
}

XYState xy_seed(const WarpedProductSpec& spec, const SolitonParams& p, const SeedConfig& cfg) {
  XYState xy = xy_from_z(soliton_seed(spec, p, cfg), spec, p);
  xy.s = 0.0;
  return xy;
}

}  // namespace solitonflow
