#pragma once

#include <functional>
#include <span>

#include "solitonflow/model.hpp"
#include "solitonflow/systems.hpp"

namespace solitonflow {

struct IntegratorConfig {
  double h = 1e-3;
  double t_max = 0.0;
  double residual_abort = 1e-3;   // terminate when |res2| exceeds this
  int decimate = 1;               // keep every k-th sample
  bool with_scalars = true;
  bool with_monitors = true;
  double positivity_floor = 1e-12;
};

enum class StageError { none, nonpositive, nonfinite };

struct StepStatus {
  StageError error = StageError::none;
  int stage = 0;      // 1..4, failing stage
  int component = 0;  // offending state index
  bool ok() const { return error == StageError::none; }
};

/// Scratch buffers for the four-stage scheme; reuse across steps.
struct Rk4Workspace {
  std::vector<double> k1, k2, k3, k4, ytmp;
  void resize(int n) {
    k1.resize(n); k2.resize(n); k3.resize(n); k4.resize(n); ytmp.resize(n);
  }
};

/// One classical RK4 step in place.  Stage states violating the field's
/// positivity list (below `floor`) or containing non-finite entries abort
/// the step; `y` is left untouched in that case.
StepStatus rk4_step(const VectorField& f, std::span<double> y, double h, Rk4Workspace& ws,
                    double floor = 1e-12);

/// Per-sample scalar/monitor evaluation attached to a run.
struct StepRecord {
  GeometryScalars scalars;
  MonitorSample monitors;
};
using SampleProbe = std::function<StepRecord(double time, std::span<const double> y)>;

SampleProbe make_z_probe(const WarpedProductSpec& spec, const SolitonParams& p);
SampleProbe make_z_probe(const TwoSummandsSpec& spec, const SolitonParams& p);
SampleProbe make_xy_probe(const WarpedProductSpec& spec, bool subsystem = false);

/// Fixed-step RK4 run from `y0` at `start` until t_max or a stop condition
/// (positivity floor at a step or stage, non-finite entry, residual above
/// residual_abort).  Records every decimate-th sample; the final state is
/// kept in Trajectory::end_state regardless of decimation.  The state
/// update uses compensated summation, so identical configs produce
/// bit-identical trajectories and invariant drift is not dominated by
/// accumulation roundoff.
///
/// (t_max - start)/h must be a whole number of steps (to ~1% of h).
Trajectory integrate(const VectorField& f, std::span<const double> y0, double start,
                     const IntegratorConfig& cfg, const SampleProbe& probe = {},
                     SystemKind kind = SystemKind::warped_z);

/// Cumulative composite-trapezoid integral on a uniform grid; result[0] = 0.
/// Throws std::invalid_argument with fewer than 2 samples.
std::vector<double> cumulative_trapezoid(std::span<const double> f, double h);

}  // namespace solitonflow
