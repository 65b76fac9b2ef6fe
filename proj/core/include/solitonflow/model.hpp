#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace solitonflow {

enum class Mode { soliton, ricci_flat };

const char* to_string(Mode m);

/// Orbit data for a multiply warped product: r Einstein factors of
/// dimension d_i with Einstein constants lambda_i on a hypersurface of
/// total dimension n = sum d_i.  A flat circle factor is encoded as
/// d_i = 1, lambda_i = 0; every other factor must carry lambda_i > 0.
struct WarpedProductSpec {
  std::vector<int> d;
  std::vector<double> lambda;

  WarpedProductSpec() = default;
  WarpedProductSpec(std::vector<int> dims, std::vector<double> einstein);

  int r() const { return static_cast<int>(d.size()); }
  int n() const;

  /// Throws std::invalid_argument unless r >= 2, all d_i >= 1, n >= 3,
  /// all lambda_i >= 0 and lambda_i == 0 exactly when d_i == 1.
  void validate() const;
};

/// Orbit data for a principal orbit G/K whose isotropy representation
/// splits into two inequivalent irreducible summands of dimensions d1
/// (the collapsing sphere H/K) and d2.  The Ricci curvature of the orbit
/// metric is controlled by the constants A1 = d1(d1-1), A2 and A3.
struct TwoSummandsSpec {
  int d1 = 0;
  int d2 = 0;
  double A1 = 0.0;
  double A2 = 0.0;
  double A3 = 0.0;

  TwoSummandsSpec() = default;
  TwoSummandsSpec(int d1_, int d2_, double A2_, double A3_);

  int n() const { return d1 + d2; }
  void validate() const;

  /// CP^{2m+1} principal orbit over HP^m (twistor fibration):
  /// d1=2, d2=4m, A2=2m(m+2), A3=m/2.
  static TwoSummandsSpec twistor_orbit(int m);
  /// S^{4m+3} principal orbit over HP^m (Sp(1) fibration):
  /// d1=3, d2=4m, A2=4m(m+2), A3=3m/4.
  static TwoSummandsSpec sp1_orbit(int m);
};

/// Soliton flow parameters.  epsilon is the soliton constant (only the
/// steady case epsilon = 0 is supported at run level; the field is kept so
/// the general equations stay visible) and C is the conservation constant:
/// C < 0 for nontrivial steady solitons, C = 0 in Ricci-flat mode.
struct SolitonParams {
  double epsilon = 0.0;
  double C = -1.0;
};

/// Throws std::invalid_argument if the parameters are not admissible for
/// the given mode (epsilon must be 0; C < 0 soliton mode, C == 0 Ricci-flat).
void validate_params(const SolitonParams& p, Mode mode);

/// Second-order metric state at arclength time t: warping functions g_i > 0,
/// their derivatives, and the soliton potential u with its derivative.
struct ZState {
  double t = 0.0;
  std::vector<double> g;
  std::vector<double> gdot;
  double u = 0.0;
  double udot = 0.0;

  int r() const { return static_cast<int>(g.size()); }
  int dim() const { return 2 * r() + 2; }
  bool valid() const;  // all g_i > 0 and every entry finite

  /// Flat layout (g_1, g_1', ..., g_r, g_r', u, u').
  void pack(std::span<double> y) const;
  static ZState unpack(double t, std::span<const double> y);
};

/// Autonomous phase coordinates X_i = (sqrt(d_i)/xi) g_i'/g_i and
/// Y_i = (sqrt(d_i)/xi) / g_i at phase time s.
struct XYState {
  double s = 0.0;
  std::vector<double> X;
  std::vector<double> Y;

  int r() const { return static_cast<int>(X.size()); }

  /// Flat layout (X_1..X_r, Y_1..Y_r).
  void pack(std::span<double> y) const;
  static XYState unpack(double s, std::span<const double> y);
};

/// Pointwise geometric and Lyapunov scalars of a state.
///
/// H = trL/xi and Lcal = C/xi^2 are undefined where the generalized mean
/// curvature xi = trL - u' vanishes; they are reported as disengaged
/// optionals there rather than infinities (xi = 0 never occurs on valid
/// soliton trajectories but can occur on user-supplied states).
struct GeometryScalars {
  double trL = 0.0;    // mean curvature, sum d_i g_i'/g_i
  double trL2 = 0.0;   // tr L^2, sum d_i (g_i'/g_i)^2
  double S = 0.0;      // hypersurface scalar curvature tr r_t
  double xi = 0.0;     // generalized mean curvature -u' + trL
  double Rbar = 0.0;   // ambient scalar curvature, Hamilton form
  double G = 0.0;      // sum X_i^2 = trL2/xi^2 (NaN at xi = 0)
  double relvol = 0.0; // relative volume, prod g_i^{d_i}
  std::optional<double> H;    // trL/xi
  std::optional<double> Lcal; // C/xi^2
};

/// Per-sample residual monitors recorded along trajectories.  Entries not
/// applicable to a trajectory flavor are NaN.
struct MonitorSample {
  double res1 = std::numeric_limits<double>::quiet_NaN();
  double res2 = std::numeric_limits<double>::quiet_NaN();
  double ham_gap = std::numeric_limits<double>::quiet_NaN();
  double lyap = std::numeric_limits<double>::quiet_NaN();     // XY-form Lyapunov
  double h_drift = std::numeric_limits<double>::quiet_NaN();  // H - 1
};

enum class SystemKind { warped_z, two_summands_z, xy_full, xy_subsystem };
enum class Termination { reached_t_max, nonpositive_g, nonfinite_state, residual_blowup };

const char* to_string(SystemKind k);
const char* to_string(Termination t);

/// Uniform-grid time series of states plus derived scalar series and
/// monitor flags.  `states` is row-major with `state_dim` entries per
/// sample; `h` is the stored grid step (integration step times decimation).
struct Trajectory {
  SystemKind system = SystemKind::warped_z;
  int state_dim = 0;
  double start = 0.0;
  double h = 0.0;
  std::vector<double> time;
  std::vector<double> states;
  std::vector<GeometryScalars> scalars;
  std::vector<MonitorSample> monitors;
  Termination termination = Termination::reached_t_max;
  std::string termination_detail;
  double end_time = 0.0;
  std::vector<double> end_state;  // state at end_time, independent of decimation

  std::size_t size() const { return time.size(); }
  std::span<const double> state_row(std::size_t k) const {
    return {states.data() + k * state_dim, static_cast<std::size_t>(state_dim)};
  }
};

struct ConservationResidual {
  double res1 = 0.0;  // potential conservation law, identically 0 on the flow
  double res2 = 0.0;  // first integral S + trL^2 - xi^2 - C (steady form)
};

// ---- pointwise scalar operations ----------------------------------------

GeometryScalars scalars_from_z(const ZState& z, const WarpedProductSpec& spec,
                               const SolitonParams& p);
GeometryScalars scalars_from_z(const ZState& z, const TwoSummandsSpec& spec,
                               const SolitonParams& p);

/// Phase coordinates of a metric state.  Requires xi > 0 (complete steady
/// solitons have xi > 0 everywhere); throws std::domain_error otherwise.
/// The phase time s is left at 0 for the caller to assign.
XYState xy_from_z(const ZState& z, const WarpedProductSpec& spec, const SolitonParams& p);
XYState xy_from_z(const ZState& z, const TwoSummandsSpec& spec, const SolitonParams& p);

/// Lyapunov value sum_i (X_i^2 + lambda_i Y_i^2) - 1.  Factors with
/// lambda_i = 0 do not contribute a Y term, so the value is well defined
/// on subsystem states where Y_1 is unavailable.
double lyapunov_L(const XYState& xy, const WarpedProductSpec& spec);

/// H = sum_i sqrt(d_i) X_i (equals trL/xi on metric states).
double script_H(const XYState& xy, const WarpedProductSpec& spec);

/// G = sum_i X_i^2.
double script_G(const XYState& xy);

/// Volume-normalized curvature monotones: F0 = v^{2/n} (S + tr (L^0)^2)
/// with L^0 the trace-free part of L, and F = v^{2/n} (S + tr L^2).
std::pair<double, double> f0_and_calF(const ZState& z, const WarpedProductSpec& spec,
                                      const SolitonParams& p);
std::pair<double, double> f0_and_calF(const ZState& z, const TwoSummandsSpec& spec,
                                      const SolitonParams& p);

/// Modified Lyapunov function for the Ricci-flat locus,
///   Fhat = (1 - (1-X_1)^2/(n-1)) / prod_{i>=2} (lambda_i Y_i^2)^{d_i/(n-1)},
/// defined for Y_i > 0 (i >= 2) and |X_1 - 1| < sqrt(2).
/// Throws std::domain_error outside that domain.
double f_hat(const XYState& xy, const WarpedProductSpec& spec);

/// Second algebraic form of f_hat; agrees with f_hat on the constraint
/// locus {L = 0, H = 1} and is used only as a cross-check there.
double f_hat_constraint_form(const XYState& xy, const WarpedProductSpec& spec);

/// Product Lyapunov F = prod_j Y_j^{-2 d_j / n}; requires all Y_j > 0.
double f_bohm(const XYState& xy, const WarpedProductSpec& spec);

/// Ricci endomorphism components of the two-summands orbit metric:
///   r1 = (A1/d1)/g1^2 + (A3/d1) g1^2/g2^4,
///   r2 = (A2/d2)/g2^2 - (2 A3/d2) g1^2/g2^4.
std::pair<double, double> two_summands_ricci(double g1, double g2, const TwoSummandsSpec& spec);

/// Conservation residuals of a state.  res2 is evaluated in a grouped,
/// cancellation-free form so it stays meaningful at states near the
/// collapsed orbit where trL ~ d1/t is large.
ConservationResidual conservation_residual(const ZState& z, const WarpedProductSpec& spec,
                                           const SolitonParams& p);
ConservationResidual conservation_residual(const ZState& z, const TwoSummandsSpec& spec,
                                           const SolitonParams& p);

/// Ambient scalar curvature computed from the second fundamental form with
/// tr Ldot eliminated through the trace of the shape-operator equation
/// (rather than through the Hamilton identity).  On exact solutions this
/// agrees with GeometryScalars::Rbar; off the conservation manifold the two
/// forms differ by exactly -res2.
double rbar_direct(const ZState& z, const WarpedProductSpec& spec, const SolitonParams& p);
double rbar_direct(const ZState& z, const TwoSummandsSpec& spec, const SolitonParams& p);

}  // namespace solitonflow
