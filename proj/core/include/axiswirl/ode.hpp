#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace axiswirl {

/// Pointwise model with convection and diffusion dropped:
///   u' = -d v u,   v' = u^2 - v^2.
/// d = 2 is the base model and has a closed-form solution.
struct OdeState {
  double u = 0.0;
  double v = 0.0;
  double t = 0.0;
};

struct OdeParams {
  double d = 2.0;

  void validate() const;
};

/// Polar chart of the (v, u) plane: v = r cos(theta), u = r sin(theta).
struct PolarState {
  double r = 0.0;
  double theta = 0.0;
};

struct OdeDerivative {
  double du = 0.0;
  double dv = 0.0;
};

struct PolarDerivative {
  double dr = 0.0;
  double dtheta = 0.0;
};

/// Closed-form solution of the d = 2 model, w(t) = w0 / (1 - i w0 t) with
/// w = u + i v. Throws BlowupAtPole when u0 = 0, v0 < 0 and t >= -1/v0.
OdeState ode_exact(double u0, double v0, double t);

OdeDerivative ode_rhs(const OdeState& s, const OdeParams& p);

PolarDerivative polar_rhs(const PolarState& s, const OdeParams& p);

PolarState to_polar(const OdeState& s);
OdeState from_polar(const PolarState& s, double t = 0.0);

/// Upper envelope r0 / (1 + r0 cos^3(theta0) t) for first-quadrant starts, d >= 1.
double r_envelope_bound(double r0, double theta0, double t);

struct IntegrateOptions {
  /// Step-doubling error control between samples instead of one fixed step.
  bool adaptive = false;
  double rtol = 1e-12;
  double blowup_threshold = 1e12;
};

struct OdeTrajectory {
  /// States at t = 0, dt, 2 dt, ... up to t_end (or the last finite time).
  std::vector<OdeState> samples;
  /// Last finite time before |u| + |v| exceeded the threshold or went non-finite.
  std::optional<double> blowup_time;

  bool blew_up() const noexcept { return blowup_time.has_value(); }
};

/// Classical fourth-order Runge-Kutta integration sampled at multiples of dt.
OdeTrajectory integrate_ode(const OdeState& s0, const OdeParams& p, double t_end, double dt,
                            const IntegrateOptions& opts = {});

enum class TrajectoryClass { Decay, Blowup, Undetermined };

const char* to_string(TrajectoryClass c) noexcept;

struct Classification {
  TrajectoryClass kind = TrajectoryClass::Undetermined;
  std::optional<double> t_star;
  double final_r = 0.0;
  double peak_r = 0.0;
  double peak_u = 0.0;
  double peak_v = 0.0;
  double final_u = 0.0;
  double final_v = 0.0;
};

struct ClassifyOptions {
  double rtol = 1e-11;
  std::size_t samples = 1000;
};

/// Decay: r(t_end) fell below 1e-6 r0, or the trajectory sits in the right
/// half plane (v > 0) with r shrinking below both r0 and its mid-run value.
/// Blowup: integration hit the blowup threshold. Otherwise Undetermined.
Classification classify_trajectory(const OdeState& s0, const OdeParams& p, double t_end,
                                   const ClassifyOptions& opts = {});

}  // namespace axiswirl
