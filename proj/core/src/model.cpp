#include "solitonflow/model.hpp"

#include <cmath>
#include <stdexcept>

namespace solitonflow {

namespace {

double ipow(double x, int k) {
  double y = 1.0;
  for (int i = 0; i < k; ++i) y *= x;
  return y;
}

}  // namespace

const char* to_string(Mode m) {
  return m == Mode::soliton ? "soliton" : "ricci-flat";
}

const char* to_string(SystemKind k) {
  switch (k) {
    case SystemKind::warped_z: return "warped-z";
    case SystemKind::two_summands_z: return "two-summands-z";
    case SystemKind::xy_full: return "xy-full";
    case SystemKind::xy_subsystem: return "xy-subsystem";
  }
  return "?";
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::reached_t_max: return "reached-t-max";
    case Termination::nonpositive_g: return "g-nonpositive";
    case Termination::nonfinite_state: return "nonfinite";
    case Termination::residual_blowup: return "residual-blowup";
  }
  return "?";
}

WarpedProductSpec::WarpedProductSpec(std::vector<int> dims, std::vector<double> einstein)
    : d(std::move(dims)), lambda(std::move(einstein)) {
  validate();
}

int WarpedProductSpec::n() const {
  int total = 0;
  for (int di : d) total += di;
  return total;
}

void WarpedProductSpec::validate() const {
  if (r() < 2) throw std::invalid_argument("spec.d: need at least two factors");
  if (lambda.size() != d.size())
    throw std::invalid_argument("spec.lambda: need one Einstein constant per factor");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < 1) throw std::invalid_argument("spec.d: factor dimensions must be >= 1");
    if (lambda[i] < 0.0)
      throw std::invalid_argument("spec.lambda: Einstein constants must be >= 0");
    // circle factors are exactly the flat ones
    if ((d[i] == 1) != (lambda[i] == 0.0))
      throw std::invalid_argument("spec.lambda: lambda_i = 0 exactly when d_i = 1");
  }
  if (n() < 3) throw std::invalid_argument("spec.d: total hypersurface dimension must be >= 3");
}

TwoSummandsSpec::TwoSummandsSpec(int d1_, int d2_, double A2_, double A3_)
    : d1(d1_), d2(d2_), A1(static_cast<double>(d1_) * (d1_ - 1)), A2(A2_), A3(A3_) {
  validate();
}

void TwoSummandsSpec::validate() const {
  if (d1 < 1) throw std::invalid_argument("spec.d1: must be a positive integer");
  if (d2 < 2) throw std::invalid_argument("spec.d2: must be >= 2");
  if (A1 != static_cast<double>(d1) * (d1 - 1))
    throw std::invalid_argument("spec.A1: must equal d1 (d1 - 1)");
  if (!(A2 > 0.0)) throw std::invalid_argument("spec.A2: must be > 0");
  if (!(A3 > 0.0)) throw std::invalid_argument("spec.A3: must be > 0");
}

TwoSummandsSpec TwoSummandsSpec::twistor_orbit(int m) {
  if (m < 1) throw std::invalid_argument("preset.m: must be >= 1");
  return TwoSummandsSpec(2, 4 * m, 2.0 * m * (m + 2), 0.5 * m);
}

TwoSummandsSpec TwoSummandsSpec::sp1_orbit(int m) {
  if (m < 1) throw std::invalid_argument("preset.m: must be >= 1");
  return TwoSummandsSpec(3, 4 * m, 4.0 * m * (m + 2), 0.75 * m);
}

void validate_params(const SolitonParams& p, Mode mode) {
  if (p.epsilon != 0.0)
    throw std::invalid_argument("params.epsilon: only the steady case epsilon = 0 is supported");
  if (mode == Mode::soliton && !(p.C < 0.0))
    throw std::invalid_argument("params.C: soliton mode requires C < 0");
  if (mode == Mode::ricci_flat && p.C != 0.0)
    throw std::invalid_argument("params.C: ricci-flat mode requires C = 0");
}

bool ZState::valid() const {
  if (g.size() != gdot.size() || g.empty()) return false;
  if (!std::isfinite(t) || !std::isfinite(u) || !std::isfinite(udot)) return false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] > 0.0) || !std::isfinite(g[i]) || !std::isfinite(gdot[i])) return false;
  }
  return true;
}

void ZState::pack(std::span<double> y) const {
  const int rr = r();
  for (int i = 0; i < rr; ++i) {
    y[2 * i] = g[i];
    y[2 * i + 1] = gdot[i];
  }
  y[2 * rr] = u;
  y[2 * rr + 1] = udot;
}

ZState ZState::unpack(double t, std::span<const double> y) {
  ZState z;
  const int rr = static_cast<int>(y.size() / 2) - 1;
  z.t = t;
  z.g.resize(rr);
  z.gdot.resize(rr);
  for (int i = 0; i < rr; ++i) {
    z.g[i] = y[2 * i];
    z.gdot[i] = y[2 * i + 1];
  }
  z.u = y[2 * rr];
  z.udot = y[2 * rr + 1];
  return z;
}

void XYState::pack(std::span<double> y) const {
  const int rr = r();
  for (int i = 0; i < rr; ++i) {
    y[i] = X[i];
    y[rr + i] = Y[i];
  }
}

XYState XYState::unpack(double s, std::span<const double> y) {
  XYState xy;
  const int rr = static_cast<int>(y.size() / 2);
  xy.s = s;
  xy.X.assign(y.begin(), y.begin() + rr);
  xy.Y.assign(y.begin() + rr, y.begin() + 2 * rr);
  return xy;
}

// ---- scalar evaluation ----------------------------------------------------

namespace {

// Shared part of scalars_from_z once S and n are known.
GeometryScalars scalars_common(const ZState& z, std::span<const int> d, double S, int n,
                               const SolitonParams& p) {
  GeometryScalars out;
  out.S = S;
  double trL = 0.0, trL2 = 0.0, vol = 1.0;
  for (std::size_t i = 0; i < z.g.size(); ++i) {
    const double L = z.gdot[i] / z.g[i];
    trL += d[i] * L;
    trL2 += d[i] * L * L;
    vol *= ipow(z.g[i], d[i]);
  }
  out.trL = trL;
  out.trL2 = trL2;
  out.relvol = vol;
  out.xi = trL - z.udot;
  out.Rbar = -p.C - z.udot * z.udot - p.epsilon * z.u - 0.5 * p.epsilon * (n + 1);
  out.G = trL2 / (out.xi * out.xi);  // NaN at xi = 0 by IEEE semantics
  if (out.xi != 0.0) {
    out.H = trL / out.xi;
    out.Lcal = p.C / (out.xi * out.xi);
  }
  return out;
}

double warped_S(const ZState& z, const WarpedProductSpec& spec) {
  double S = 0.0;
  for (int i = 0; i < spec.r(); ++i) {
    if (spec.lambda[i] == 0.0) continue;
    S += spec.lambda[i] * spec.d[i] / (z.g[i] * z.g[i]);
  }
  return S;
}

}  // namespace

GeometryScalars scalars_from_z(const ZState& z, const WarpedProductSpec& spec,
                               const SolitonParams& p) {
  return scalars_common(z, spec.d, warped_S(z, spec), spec.n(), p);
}

GeometryScalars scalars_from_z(const ZState& z, const TwoSummandsSpec& spec,
                               const SolitonParams& p) {
  auto [r1, r2] = two_summands_ricci(z.g[0], z.g[1], spec);
  const int d[2] = {spec.d1, spec.d2};
  return scalars_common(z, d, spec.d1 * r1 + spec.d2 * r2, spec.n(), p);
}

namespace {

XYState xy_from_state(const ZState& z, std::span<const int> d) {
  double trL = 0.0;
  for (std::size_t i = 0; i < z.g.size(); ++i) trL += d[i] * z.gdot[i] / z.g[i];
  const double xi = trL - z.udot;
  if (!(xi > 0.0)) throw std::domain_error("xy_from_z: requires xi > 0");
  XYState xy;
  xy.X.resize(z.g.size());
  xy.Y.resize(z.g.size());
  for (std::size_t i = 0; i < z.g.size(); ++i) {
    const double sq = std::sqrt(static_cast<double>(d[i]));
    xy.X[i] = sq / xi * (z.gdot[i] / z.g[i]);
    xy.Y[i] = sq / (xi * z.g[i]);
  }
  return xy;
}

}  // namespace

XYState xy_from_z(const ZState& z, const WarpedProductSpec& spec, const SolitonParams&) {
  return xy_from_state(z, spec.d);
}

XYState xy_from_z(const ZState& z, const TwoSummandsSpec& spec, const SolitonParams&) {
  const int d[2] = {spec.d1, spec.d2};
  return xy_from_state(z, d);
}

double lyapunov_L(const XYState& xy, const WarpedProductSpec& spec) {
  double acc = -1.0;
  for (int i = 0; i < spec.r(); ++i) {
    acc += xy.X[i] * xy.X[i];
    if (spec.lambda[i] != 0.0) acc += spec.lambda[i] * xy.Y[i] * xy.Y[i];
  }
  return acc;
}

double script_H(const XYState& xy, const WarpedProductSpec& spec) {
  double acc = 0.0;
  for (int i = 0; i < spec.r(); ++i)
    acc += std::sqrt(static_cast<double>(spec.d[i])) * xy.X[i];
  return acc;
}

double script_G(const XYState& xy) {
  double acc = 0.0;
  for (double x : xy.X) acc += x * x;
  return acc;
}

namespace {

std::pair<double, double> f0_calF_common(const ZState& z, std::span<const int> d, double S,
                                         int n) {
  double trL = 0.0, trL2 = 0.0, vol = 1.0;
  for (std::size_t i = 0; i < z.g.size(); ++i) {
    const double L = z.gdot[i] / z.g[i];
    trL += d[i] * L;
    trL2 += d[i] * L * L;
    vol *= ipow(z.g[i], d[i]);
  }
  const double v2n = std::pow(vol, 2.0 / n);
  const double traceless = trL2 - trL * trL / n;
  return {v2n * (S + traceless), v2n * (S + trL2)};
}

}  // namespace

std::pair<double, double> f0_and_calF(const ZState& z, const WarpedProductSpec& spec,
                                      const SolitonParams&) {
  return f0_calF_common(z, spec.d, warped_S(z, spec), spec.n());
}

std::pair<double, double> f0_and_calF(const ZState& z, const TwoSummandsSpec& spec,
                                      const SolitonParams&) {
  auto [r1, r2] = two_summands_ricci(z.g[0], z.g[1], spec);
  const int d[2] = {spec.d1, spec.d2};
  return f0_calF_common(z, d, spec.d1 * r1 + spec.d2 * r2, spec.n());
}

namespace {

double f_hat_denominator(const XYState& xy, const WarpedProductSpec& spec) {
  const double nm1 = spec.n() - 1;
  double denom = 1.0;
  for (int i = 1; i < spec.r(); ++i) {
    if (!(xy.Y[i] > 0.0))
      throw std::domain_error("f_hat: requires Y_i > 0 for i >= 2");
    denom *= std::pow(spec.lambda[i] * xy.Y[i] * xy.Y[i], spec.d[i] / nm1);
  }
  return denom;
}

}  // namespace

double f_hat(const XYState& xy, const WarpedProductSpec& spec) {
  const double x1 = xy.X[0];
  if (!(std::abs(x1 - 1.0) < std::sqrt(2.0)))
    throw std::domain_error("f_hat: requires |X_1 - 1| < sqrt(2)");
  const double nm1 = spec.n() - 1;
  const double numer = 1.0 - (1.0 - x1) * (1.0 - x1) / nm1;
  return numer / f_hat_denominator(xy, spec);
}

double f_hat_constraint_form(const XYState& xy, const WarpedProductSpec& spec) {
  const double nm1 = spec.n() - 1;
  double numer = 0.0;
  for (int i = 0; i < spec.r(); ++i) numer += xy.X[i] * xy.X[i];
  for (int i = 1; i < spec.r(); ++i) numer += spec.lambda[i] * xy.Y[i] * xy.Y[i];
  const double h = script_H(xy, spec);
  const double hx = h - xy.X[0];
  numer -= hx * hx / nm1;
  return numer / f_hat_denominator(xy, spec);
}

double f_bohm(const XYState& xy, const WarpedProductSpec& spec) {
  const double n = spec.n();
  double acc = 1.0;
  for (int i = 0; i < spec.r(); ++i) {
    if (!(xy.Y[i] > 0.0)) throw std::domain_error("f_bohm: requires all Y_j > 0");
    acc *= std::pow(xy.Y[i], -2.0 * spec.d[i] / n);
  }
  return acc;
}

std::pair<double, double> two_summands_ricci(double g1, double g2, const TwoSummandsSpec& spec) {
  const double mix = g1 * g1 / (g2 * g2 * g2 * g2);
  const double r1 = spec.A1 / spec.d1 / (g1 * g1) + spec.A3 / spec.d1 * mix;
  const double r2 = spec.A2 / spec.d2 / (g2 * g2) - 2.0 * spec.A3 / spec.d2 * mix;
  return {r1, r2};
}

// ---- conservation residuals -----------------------------------------------
//
// res2 = S + trL^2 - xi^2 - C expanded so the 1/t^2 pieces coming from the
// collapsing factor cancel algebraically instead of numerically:
//
//   res2 = [S - sum_i d_i (d_i - 1) L_i^2] - 2 sum_{i<j} d_i d_j L_i L_j
//          + 2 u' trL - u'^2 - C.
//
// The bracket is grouped per factor; for the circle factor (d_1 = 1,
// lambda_1 = 0) it vanishes identically, and in the two-summands case the
// A1/g1^2 curvature term pairs with A1 L_1^2 as A1 (1 - g1')(1 + g1')/g1^2.

namespace {

double cross_term(std::span<const double> L, std::span<const int> d) {
  double acc = 0.0;
  const std::size_t r = L.size();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) acc += d[i] * d[j] * L[i] * L[j];
  return 2.0 * acc;
}

}  // namespace

ConservationResidual conservation_residual(const ZState& z, const WarpedProductSpec& spec,
                                           const SolitonParams& p) {
  const int r = spec.r();
  std::vector<double> L(r);
  double trL = 0.0;
  for (int i = 0; i < r; ++i) {
    L[i] = z.gdot[i] / z.g[i];
    trL += spec.d[i] * L[i];
  }
  double curv = 0.0;
  for (int i = 0; i < r; ++i) {
    curv += spec.d[i] * (spec.lambda[i] - (spec.d[i] - 1) * z.gdot[i] * z.gdot[i]) /
            (z.g[i] * z.g[i]);
  }
  ConservationResidual out;
  out.res2 = curv - cross_term(L, spec.d) + 2.0 * z.udot * trL - z.udot * z.udot - p.C;
  const double uddot = -z.udot * trL + z.udot * z.udot + p.epsilon * z.u + p.C;
  out.res1 = uddot + (-z.udot + trL) * z.udot - p.epsilon * z.u - p.C;
  return out;
}

ConservationResidual conservation_residual(const ZState& z, const TwoSummandsSpec& spec,
                                           const SolitonParams& p) {
  const int d[2] = {spec.d1, spec.d2};
  const double L[2] = {z.gdot[0] / z.g[0], z.gdot[1] / z.g[1]};
  const double trL = spec.d1 * L[0] + spec.d2 * L[1];
  const double g1sq = z.g[0] * z.g[0];
  const double g2sq = z.g[1] * z.g[1];
  const double curv = spec.A1 * (1.0 - z.gdot[0]) * (1.0 + z.gdot[0]) / g1sq +
                      (spec.A2 - spec.d2 * (spec.d2 - 1) * z.gdot[1] * z.gdot[1]) / g2sq -
                      spec.A3 * g1sq / (g2sq * g2sq);
  ConservationResidual out;
  out.res2 = curv - cross_term(L, d) + 2.0 * z.udot * trL - z.udot * z.udot - p.C;
  const double uddot = -z.udot * trL + z.udot * z.udot + p.epsilon * z.u + p.C;
  out.res1 = uddot + (-z.udot + trL) * z.udot - p.epsilon * z.u - p.C;
  return out;
}

// rbar_direct = (trL)^2 - trL^2 - 2 u' trL - S - n eps, grouped like res2.

double rbar_direct(const ZState& z, const WarpedProductSpec& spec, const SolitonParams& p) {
  const int r = spec.r();
  std::vector<double> L(r);
  double trL = 0.0;
  for (int i = 0; i < r; ++i) {
    L[i] = z.gdot[i] / z.g[i];
    trL += spec.d[i] * L[i];
  }
  double perfactor = 0.0;
  for (int i = 0; i < r; ++i) {
    perfactor += spec.d[i] * ((spec.d[i] - 1) * z.gdot[i] * z.gdot[i] - spec.lambda[i]) /
                 (z.g[i] * z.g[i]);
  }
  return perfactor + cross_term(L, spec.d) - 2.0 * z.udot * trL - spec.n() * p.epsilon;
}

double rbar_direct(const ZState& z, const TwoSummandsSpec& spec, const SolitonParams& p) {
  const int d[2] = {spec.d1, spec.d2};
  const double L[2] = {z.gdot[0] / z.g[0], z.gdot[1] / z.g[1]};
  const double trL = spec.d1 * L[0] + spec.d2 * L[1];
  const double g1sq = z.g[0] * z.g[0];
  const double g2sq = z.g[1] * z.g[1];
  const double perfactor = spec.A1 * (z.gdot[0] - 1.0) * (z.gdot[0] + 1.0) / g1sq +
                           (spec.d2 * (spec.d2 - 1) * z.gdot[1] * z.gdot[1] - spec.A2) / g2sq +
                           spec.A3 * g1sq / (g2sq * g2sq);
  return perfactor + cross_term(L, d) - 2.0 * z.udot * trL - spec.n() * p.epsilon;
}

}  // namespace solitonflow
