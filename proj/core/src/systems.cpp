#include "solitonflow/systems.hpp"

#include <cmath>
#include <stdexcept>

namespace solitonflow {

namespace {

void z_rhs_common(std::span<const double> y, std::span<double> dy, std::span<const int> d,
                  std::span<const double> ricci_times_g, const SolitonParams& p) {
  const int r = static_cast<int>(d.size());
  const double u = y[2 * r];
  const double udot = y[2 * r + 1];

  double trL = 0.0;
  for (int i = 0; i < r; ++i) trL += d[i] * y[2 * i + 1] / y[2 * i];

  for (int i = 0; i < r; ++i) {
    const double gi = y[2 * i];
    const double gidot = y[2 * i + 1];
    dy[2 * i] = gidot;
    dy[2 * i + 1] =
        ricci_times_g[i] - gidot * (trL - gidot / gi - udot) + 0.5 * p.epsilon * gi;
  }
  dy[2 * r] = udot;
  dy[2 * r + 1] = -udot * trL + udot * udot + p.epsilon * u + p.C;
}

void require_positive_g(std::span<const double> y, int r, const char* who) {
  for (int i = 0; i < r; ++i)
    if (!(y[2 * i] > 0.0)) throw std::domain_error(std::string(who) + ": requires all g_i > 0");
}

}  // namespace

void warped_z_rhs(std::span<const double> y, std::span<double> dy,
                  const WarpedProductSpec& spec, const SolitonParams& p) {
  const int r = spec.r();
  require_positive_g(y, r, "warped_z_rhs");
  std::vector<double> rg(r);
  for (int i = 0; i < r; ++i) rg[i] = spec.lambda[i] / y[2 * i];  // r_i(g) g_i
  z_rhs_common(y, dy, spec.d, rg, p);
}

void two_summands_z_rhs(std::span<const double> y, std::span<double> dy,
                        const TwoSummandsSpec& spec, const SolitonParams& p) {
  require_positive_g(y, 2, "two_summands_z_rhs");
  auto [r1, r2] = two_summands_ricci(y[0], y[2], spec);
  const int d[2] = {spec.d1, spec.d2};
  const double rg[2] = {r1 * y[0], r2 * y[2]};
  z_rhs_common(y, dy, d, rg, p);
}

namespace {

ZState typed_rhs(const ZState& z, const std::function<void(std::span<const double>, std::span<double>)>& f) {
  std::vector<double> y(z.dim()), dy(z.dim());
  z.pack(y);
  f(y, dy);
  return ZState::unpack(z.t, dy);
}

}  // namespace

ZState warped_z_rhs(const ZState& z, const WarpedProductSpec& spec, const SolitonParams& p) {
  return typed_rhs(z, [&](std::span<const double> y, std::span<double> dy) {
    warped_z_rhs(y, dy, spec, p);
  });
}

ZState two_summands_z_rhs(const ZState& z, const TwoSummandsSpec& spec, const SolitonParams& p) {
  return typed_rhs(z, [&](std::span<const double> y, std::span<double> dy) {
    two_summands_z_rhs(y, dy, spec, p);
  });
}

void xy_rhs(std::span<const double> y, std::span<double> dy, const WarpedProductSpec& spec) {
  const int r = spec.r();
  double G = 0.0;
  for (int i = 0; i < r; ++i) G += y[i] * y[i];
  for (int i = 0; i < r; ++i) {
    const double sq = std::sqrt(static_cast<double>(spec.d[i]));
    const double Yi = y[r + i];
    dy[i] = y[i] * (G - 1.0) + spec.lambda[i] * Yi * Yi / sq;
    dy[r + i] = Yi * (G - y[i] / sq);
  }
}

void xy_subsystem_rhs(std::span<const double> y, std::span<double> dy,
                      const WarpedProductSpec& spec) {
  const int r = spec.r();
  double G = 0.0;
  for (int i = 0; i < r; ++i) G += y[i] * y[i];
  for (int i = 0; i < r; ++i) {
    const double sq = std::sqrt(static_cast<double>(spec.d[i]));
    dy[i] = y[i] * (G - 1.0);
    if (i >= 1) {
      const double Yi = y[r + i - 1];
      dy[i] += spec.lambda[i] * Yi * Yi / sq;
      dy[r + i - 1] = Yi * (G - y[i] / sq);
    }
  }
}

XYState xy_rhs(const XYState& xy, const WarpedProductSpec& spec) {
  const int r = xy.r();
  std::vector<double> y(2 * r), dy(2 * r);
  xy.pack(y);
  xy_rhs(y, dy, spec);
  return XYState::unpack(xy.s, dy);
}

Matrix xy_jacobian(const XYState& xy, const WarpedProductSpec& spec) {
  const int r = spec.r();
  Matrix J(2 * r);
  double G = 0.0;
  for (int i = 0; i < r; ++i) G += xy.X[i] * xy.X[i];
  for (int i = 0; i < r; ++i) {
    const double sq = std::sqrt(static_cast<double>(spec.d[i]));
    for (int j = 0; j < r; ++j) {
      J(i, j) = 2.0 * xy.X[i] * xy.X[j];
      J(r + i, j) = 2.0 * xy.Y[i] * xy.X[j];
    }
    J(i, i) += G - 1.0;
    J(i, r + i) = 2.0 * spec.lambda[i] * xy.Y[i] / sq;
    J(r + i, i) -= xy.Y[i] / sq;
    J(r + i, r + i) = G - xy.X[i] / sq;
  }
  return J;
}

VectorField make_warped_z_field(const WarpedProductSpec& spec, const SolitonParams& p) {
  VectorField f;
  f.label = "warped-z";
  f.arity = 2 * spec.r() + 2;
  for (int i = 0; i < spec.r(); ++i) f.positive.push_back(2 * i);
  f.eval = [spec, p](std::span<const double> y, std::span<double> dy) {
    warped_z_rhs(y, dy, spec, p);
  };
  return f;
}

VectorField make_two_summands_z_field(const TwoSummandsSpec& spec, const SolitonParams& p) {
  VectorField f;
  f.label = "two-summands-z";
  f.arity = 6;
  f.positive = {0, 2};
  f.eval = [spec, p](std::span<const double> y, std::span<double> dy) {
    two_summands_z_rhs(y, dy, spec, p);
  };
  return f;
}

VectorField make_xy_field(const WarpedProductSpec& spec, bool project_constraint) {
  VectorField f;
  f.label = "xy-full";
  f.arity = 2 * spec.r();
  f.eval = [spec](std::span<const double> y, std::span<double> dy) { xy_rhs(y, dy, spec); };
  if (project_constraint) {
    f.post_step = [spec](std::span<double> y) {
      const int r = spec.r();
      double q = 0.0;
      for (int i = 0; i < r; ++i) {
        q += y[i] * y[i];
        if (spec.lambda[i] != 0.0) q += spec.lambda[i] * y[r + i] * y[r + i];
      }
      if (!(q > 0.0)) return;
      const double c = 1.0 / std::sqrt(q);
      for (int i = 0; i < 2 * r; ++i) y[i] *= c;
    };
  }
  return f;
}

VectorField make_xy_subsystem_field(const WarpedProductSpec& spec) {
  VectorField f;
  f.label = "xy-subsystem";
  f.arity = 2 * spec.r() - 1;
  f.eval = [spec](std::span<const double> y, std::span<double> dy) {
    xy_subsystem_rhs(y, dy, spec);
  };
  return f;
}

std::vector<double> recover_Y1(const Trajectory& sub_traj, double Y1_at_s0) {
  if (!(Y1_at_s0 > 0.0)) throw std::invalid_argument("recover_Y1: Y1(s0) must be > 0");
  if (sub_traj.system != SystemKind::xy_subsystem && sub_traj.system != SystemKind::xy_full)
    throw std::invalid_argument("recover_Y1: expects a phase-space trajectory");

  const std::size_t m = sub_traj.size();
  // r from the state layout: 2r for full, 2r-1 for the subsystem
  const int r = (sub_traj.system == SystemKind::xy_full) ? sub_traj.state_dim / 2
                                                         : (sub_traj.state_dim + 1) / 2;
  std::vector<double> integrand(m);
  for (std::size_t k = 0; k < m; ++k) {
    auto y = sub_traj.state_row(k);
    double G = 0.0;
    for (int i = 0; i < r; ++i) G += y[i] * y[i];
    integrand[k] = G - y[0];
  }
  std::vector<double> out(m);
  double acc = 0.0;
  out[0] = Y1_at_s0;
  for (std::size_t k = 1; k < m; ++k) {
    acc += 0.5 * sub_traj.h * (integrand[k - 1] + integrand[k]);
    out[k] = Y1_at_s0 * std::exp(acc);
  }
  return out;
}

}  // namespace solitonflow
