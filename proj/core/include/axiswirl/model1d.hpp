#pragma once

#include <utility>

#include "axiswirl/spectral.hpp"

namespace axiswirl {

enum class Scheme {
  ImexEuler,    // forward Euler for explicit terms, backward Euler for diffusion
  Rk2Inviscid,  // Heun's method, nu = 0 only
};

enum class ModelKind {
  ReactionDiffusion,  // u_t = nu u_zz - 2uv,  v_t = nu v_zz + u^2 - v^2
  Euler1d,            // adds convection sign*2*psi*d/dz and the mean-fixing c(t)
};

const char* to_string(Scheme s) noexcept;
const char* to_string(ModelKind k) noexcept;

struct ModelConfig {
  double nu = 1.0;
  /// Convection velocity is sign * 2 psi. The physical model has sign = +1.
  int sign = +1;
  bool dealias_on = true;
  Scheme scheme = Scheme::ImexEuler;
  /// When false only the diffusion term is kept. Used to isolate the
  /// implicit solver in tests.
  bool nonlinear = true;

  void validate() const;
};

/// Adaptive step rule: dt * (|max u| + |min u| + |max v| + |min v|) <= cap,
/// dt <= dt0, and for convective runs dt <= cfl / (N max|2 psi|).
struct StepController {
  double cap = 0.01;
  double dt0 = 1e-5;
  double dt_min = 1e-13;
  double cfl = 0.1;
  /// Most recent step taken.
  double dt = 0.0;

  void validate() const;
};

/// (u, v) pair for the reaction-diffusion model.
struct RdState {
  ScalarField u;
  ScalarField v;
  double t = 0.0;
};

/// (u, v) pair of the Eulerian model with the cached stream function and c(t).
/// Construction projects v onto zero mean.
class EulerState {
 public:
  EulerState(ScalarField u, ScalarField v, double t = 0.0);

  const PeriodicGrid& grid() const noexcept { return u_.grid(); }
  const ScalarField& u() const noexcept { return u_; }
  const ScalarField& v() const noexcept { return v_; }
  const ScalarField& psi() const noexcept { return psi_; }
  double c() const noexcept { return c_; }
  double t() const noexcept { return t_; }

 private:
  ScalarField u_;
  ScalarField v_;
  ScalarField psi_;
  double c_ = 0.0;
  double t_ = 0.0;
};

struct FieldPair {
  ScalarField u;
  ScalarField v;
};

/// c(t) = 3 int v^2 - int u^2, the constant keeping mean(v) = 0.
double compute_c(const ScalarField& u, const ScalarField& v);

/// Nonlinear reaction terms (-2vu, u^2 - v^2).
FieldPair rd_rhs(const ScalarField& u, const ScalarField& v, const ModelConfig& cfg);

/// Explicit part of the Eulerian model:
///   du = -sign 2 psi u_z - 2 v u
///   dv = -sign 2 psi v_z + u^2 - v^2 + c
FieldPair euler1d_rhs(const EulerState& s, const ModelConfig& cfg);

/// Reaction-limited step: min(dt0, cap / S). Throws BlowupSignal with cause
/// StepCollapse if that falls below dt_min.
double adapt_dt(const ScalarField& u, const ScalarField& v, const StepController& ctrl);

/// min(dt, dt_limit), except that a step within a millionth of dt_limit is
/// stretched to it, so runs land on stop times instead of a few ulps short.
double clamp_step(double dt, double dt_limit);

/// cfl / (N max|2 psi|), or +inf for a motionless flow.
double convective_dt_limit(const ScalarField& psi, double cfl);

/// One IMEX step of length dt. The step never checks the step rule, which
/// lets tests drive it with arbitrary dt.
RdState step_imex(const RdState& s, const ModelConfig& cfg, double dt);
EulerState step_imex(const EulerState& s, const ModelConfig& cfg, double dt);

/// One Heun step of the inviscid Eulerian model.
EulerState step_rk2(const EulerState& s, const ModelConfig& cfg, double dt);

/// Picks dt from the controller (records it in ctrl.dt) and applies the
/// configured scheme. Throws BlowupSignal on step collapse or non-finite output.
RdState advance(const RdState& s, const ModelConfig& cfg, StepController& ctrl, double dt_limit);
EulerState advance(const EulerState& s, const ModelConfig& cfg, StepController& ctrl,
                   double dt_limit);

}  // namespace axiswirl
