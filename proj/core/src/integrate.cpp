#include "solitonflow/integrate.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace solitonflow {

namespace {

StageError check_stage(std::span<const double> y, std::span<const int> positive, double floor,
                       int* component) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) {
      *component = static_cast<int>(i);
      return StageError::nonfinite;
    }
  }
  for (int idx : positive) {
    if (y[idx] <= floor) {
      *component = idx;
      return StageError::nonpositive;
    }
  }
  return StageError::none;
}

}  // namespace

StepStatus rk4_step(const VectorField& f, std::span<double> y, double h, Rk4Workspace& ws,
                    double floor) {
  const int n = f.arity;
  ws.resize(n);
  StepStatus st;

  auto stage = [&](std::span<const double> yin, std::vector<double>& k, int stage_no) {
    st.stage = stage_no;
    st.error = check_stage(yin, f.positive, floor, &st.component);
    if (st.error != StageError::none) return false;
    f.eval(yin, k);
    return true;
  };

  if (!stage(y, ws.k1, 1)) return st;
  for (int i = 0; i < n; ++i) ws.ytmp[i] = y[i] + 0.5 * h * ws.k1[i];
  if (!stage(ws.ytmp, ws.k2, 2)) return st;
  for (int i = 0; i < n; ++i) ws.ytmp[i] = y[i] + 0.5 * h * ws.k2[i];
  if (!stage(ws.ytmp, ws.k3, 3)) return st;
  for (int i = 0; i < n; ++i) ws.ytmp[i] = y[i] + h * ws.k3[i];
  if (!stage(ws.ytmp, ws.k4, 4)) return st;

  for (int i = 0; i < n; ++i)
    y[i] += h / 6.0 * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
  return st;
}

SampleProbe make_z_probe(const WarpedProductSpec& spec, const SolitonParams& p) {
  return [spec, p](double time, std::span<const double> y) {
    ZState z = ZState::unpack(time, y);
    StepRecord rec;
    rec.scalars = scalars_from_z(z, spec, p);
    auto res = conservation_residual(z, spec, p);
    rec.monitors.res1 = res.res1;
    rec.monitors.res2 = res.res2;
    rec.monitors.ham_gap = rbar_direct(z, spec, p) - rec.scalars.Rbar;
    if (rec.scalars.xi > 0.0) {
      XYState xy = xy_from_z(z, spec, p);
      rec.monitors.lyap = lyapunov_L(xy, spec);
      rec.monitors.h_drift = script_H(xy, spec) - 1.0;
    }
    return rec;
  };
}

SampleProbe make_z_probe(const TwoSummandsSpec& spec, const SolitonParams& p) {
  return [spec, p](double time, std::span<const double> y) {
    ZState z = ZState::unpack(time, y);
    StepRecord rec;
    rec.scalars = scalars_from_z(z, spec, p);
    auto res = conservation_residual(z, spec, p);
    rec.monitors.res1 = res.res1;
    rec.monitors.res2 = res.res2;
    rec.monitors.ham_gap = rbar_direct(z, spec, p) - rec.scalars.Rbar;
    return rec;
  };
}

SampleProbe make_xy_probe(const WarpedProductSpec& spec, bool subsystem) {
  return [spec, subsystem](double time, std::span<const double> y) {
    const int r = spec.r();
    XYState xy;
    xy.s = time;
    xy.X.assign(y.begin(), y.begin() + r);
    if (subsystem) {
      // Y_1 unavailable; the Lyapunov does not involve it (lambda_1 = 0)
      xy.Y.assign(r, 0.0);
      for (int i = 1; i < r; ++i) xy.Y[i] = y[r + i - 1];
    } else {
      xy.Y.assign(y.begin() + r, y.begin() + 2 * r);
    }
    StepRecord rec;
    rec.scalars.G = script_G(xy);
    const double L = lyapunov_L(xy, spec);
    const double H = script_H(xy, spec);
    rec.scalars.H = H;
    rec.scalars.Lcal = L;
    rec.monitors.lyap = L;
    rec.monitors.h_drift = H - 1.0;
    return rec;
  };
}

Trajectory integrate(const VectorField& f, std::span<const double> y0, double start,
                     const IntegratorConfig& cfg, const SampleProbe& probe, SystemKind kind) {
  if (!(cfg.h > 0.0)) throw std::invalid_argument("integrator.h: must be > 0");
  if (!(cfg.t_max > start)) throw std::invalid_argument("integrator.t_max: must exceed the start time");
  if (cfg.decimate < 1) throw std::invalid_argument("integrator.decimate: must be >= 1");
  if (static_cast<int>(y0.size()) != f.arity)
    throw std::invalid_argument("integrate: seed dimension does not match the field");

  const double steps_exact = (cfg.t_max - start) / cfg.h;
  const long long nsteps = std::llround(steps_exact);
  if (nsteps < 1 || std::abs(steps_exact - static_cast<double>(nsteps)) > 0.01)
    throw std::invalid_argument("integrator: (t_max - t0)/h must be a whole number of steps");

  int bad_component = 0;
  if (check_stage(y0, f.positive, cfg.positivity_floor, &bad_component) != StageError::none)
    throw std::invalid_argument("integrate: invalid seed state");

  Trajectory traj;
  traj.system = kind;
  traj.state_dim = f.arity;
  traj.start = start;
  traj.h = cfg.h * cfg.decimate;
  traj.termination = Termination::reached_t_max;

  const std::size_t reserve = static_cast<std::size_t>(nsteps / cfg.decimate) + 2;
  traj.time.reserve(reserve);
  traj.states.reserve(reserve * f.arity);
  if (probe && cfg.with_scalars) traj.scalars.reserve(reserve);
  if (probe && cfg.with_monitors) traj.monitors.reserve(reserve);

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> comp(f.arity, 0.0);  // compensated-summation carry
  Rk4Workspace ws;
  ws.resize(f.arity);

  char detail[160];
  double t = start;
  bool stopped = false;

  auto record = [&](long long step_index) -> bool {
    // monitors are evaluated every step (the residual gate), samples are
    // stored on the decimation stride
    if (!probe) return true;
    StepRecord rec = probe(t, y);
    const bool store = (step_index % cfg.decimate) == 0;
    if (store) {
      traj.time.push_back(t);
      traj.states.insert(traj.states.end(), y.begin(), y.end());
      if (cfg.with_scalars) traj.scalars.push_back(rec.scalars);
      if (cfg.with_monitors) traj.monitors.push_back(rec.monitors);
    }
    if (cfg.with_monitors && std::isfinite(rec.monitors.res2) &&
        std::abs(rec.monitors.res2) > cfg.residual_abort) {
      std::snprintf(detail, sizeof detail, "|res2| = %.3e exceeds %.3e at t = %.6g",
                    std::abs(rec.monitors.res2), cfg.residual_abort, t);
      traj.termination = Termination::residual_blowup;
      traj.termination_detail = detail;
      return false;
    }
    return true;
  };

  if (!probe) {
    traj.time.push_back(t);
    traj.states.insert(traj.states.end(), y.begin(), y.end());
  } else if (!record(0)) {
    stopped = true;
  }

  for (long long m = 1; m <= nsteps && !stopped; ++m) {
    // staged update with compensated accumulation
    StepStatus st;
    auto stage_ok = [&](std::span<const double> yin, std::vector<double>& k, int sno) {
      st.stage = sno;
      st.error = check_stage(yin, f.positive, cfg.positivity_floor, &st.component);
      if (st.error != StageError::none) return false;
      f.eval(yin, k);
      return true;
    };
    bool ok = stage_ok(y, ws.k1, 1);
    if (ok) {
      for (int i = 0; i < f.arity; ++i) ws.ytmp[i] = y[i] + 0.5 * cfg.h * ws.k1[i];
      ok = stage_ok(ws.ytmp, ws.k2, 2);
    }
    if (ok) {
      for (int i = 0; i < f.arity; ++i) ws.ytmp[i] = y[i] + 0.5 * cfg.h * ws.k2[i];
      ok = stage_ok(ws.ytmp, ws.k3, 3);
    }
    if (ok) {
      for (int i = 0; i < f.arity; ++i) ws.ytmp[i] = y[i] + cfg.h * ws.k3[i];
      ok = stage_ok(ws.ytmp, ws.k4, 4);
    }
    if (ok) {
      for (int i = 0; i < f.arity; ++i) {
        const double delta =
            cfg.h / 6.0 * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]) - comp[i];
        const double ynew = y[i] + delta;
        comp[i] = (ynew - y[i]) - delta;
        y[i] = ynew;
      }
      if (f.post_step) {
        f.post_step(y);
        std::fill(comp.begin(), comp.end(), 0.0);
      }
    }

    if (st.error != StageError::none) {
      std::snprintf(detail, sizeof detail, "%s at stage %d, component %d, t = %.6g",
                    st.error == StageError::nonpositive ? "positivity floor hit" : "non-finite value",
                    st.stage, st.component, t);
      traj.termination = st.error == StageError::nonpositive ? Termination::nonpositive_g
                                                             : Termination::nonfinite_state;
      traj.termination_detail = detail;
      break;
    }

    t = start + static_cast<double>(m) * cfg.h;

    int bad = 0;
    StageError perr = check_stage(y, f.positive, cfg.positivity_floor, &bad);
    if (perr != StageError::none) {
      std::snprintf(detail, sizeof detail, "%s in component %d after step at t = %.6g",
                    perr == StageError::nonpositive ? "positivity floor hit" : "non-finite value",
                    bad, t);
      traj.termination = perr == StageError::nonpositive ? Termination::nonpositive_g
                                                         : Termination::nonfinite_state;
      traj.termination_detail = detail;
      break;
    }

    if (probe) {
      if (!record(m)) break;
    } else if ((m % cfg.decimate) == 0) {
      traj.time.push_back(t);
      traj.states.insert(traj.states.end(), y.begin(), y.end());
    }
  }

  traj.end_time = t;
  traj.end_state = y;
  return traj;
}

std::vector<double> cumulative_trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2)
    throw std::invalid_argument("cumulative_trapezoid: need at least 2 samples");
  std::vector<double> out(f.size());
  out[0] = 0.0;
  double acc = 0.0;
  for (std::size_t k = 1; k < f.size(); ++k) {
    acc += 0.5 * h * (f[k - 1] + f[k]);
    out[k] = acc;
  }
  return out;
}

}  // namespace solitonflow
