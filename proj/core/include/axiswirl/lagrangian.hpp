#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "axiswirl/blowup.hpp"
#include "axiswirl/diagnostics.hpp"
#include "axiswirl/model1d.hpp"
#include "axiswirl/simulate.hpp"

namespace axiswirl {

/// Inviscid flow in particle labels alpha, convection velocity sign * 2 psi:
///   J_t = -2 sign J v,  u_t = -2 u v,  v_t = u^2 - v^2 + c,
///   c = (1 + 2 sign) int v^2 J - int u^2 J,  z_t = 2 sign psi(z(alpha, t)).
/// sign = +1 is the physical model (c = 3 int v^2 J - int u^2 J).
/// Positions are stored as z = alpha + disp so the periodic part stays
/// spectral. vdt accumulates int_0^t v dt per particle, so log J = -2 sign vdt.
struct LagrangianState {
  ScalarField j;
  ScalarField u;
  ScalarField v;
  ScalarField disp;
  ScalarField vdt;
  double t = 0.0;
  int sign = +1;

  /// J = 1, z = alpha, with v shifted so that int v J = 0 exactly.
  static LagrangianState from_initial(const ScalarField& u0, const ScalarField& v0, int sign = +1,
                                      double t0 = 0.0);

  const PeriodicGrid& grid() const noexcept { return j.grid(); }
  /// Particle positions z(alpha); not wrapped into [0, 1).
  std::vector<double> positions() const;
};

struct LagrangianDerivative {
  ScalarField j;
  ScalarField u;
  ScalarField v;
  ScalarField z;
  double c = 0.0;
};

/// Psi(alpha) = psi(z(alpha)): the antiderivative of -vJ in alpha, shifted so
/// psi has zero mean over z.
ScalarField lagrangian_stream(const LagrangianState& s);

LagrangianDerivative lag_rhs(const LagrangianState& s);

/// One Heun step of length dt. v is re-projected to int v J = 0 after each
/// stage, which keeps int J exact. Throws BlowupSignal (JacobianCollapse)
/// if J leaves (0, inf), (NonFinite) on non-finite output.
LagrangianState lag_step(const LagrangianState& s, double dt);

/// Chooses dt with adapt_dt (capped by dt_limit), steps, and records it in ctrl.dt.
LagrangianState lag_advance(const LagrangianState& s, StepController& ctrl, double dt_limit);

/// Reference magnitudes of the identity sqrt(u_a^2 + v_a^2) = g0 J.
struct IdentityLedger {
  ScalarField g0;
  double last_residual = 0.0;
  double worst_residual = 0.0;

  explicit IdentityLedger(const LagrangianState& initial);
};

struct LagrangianInvariants {
  double int_j = 0.0;
  double int_vj = 0.0;
  /// max |sqrt(u_a^2 + v_a^2) - g0 J| / max(g0 J).
  double identity_residual = 0.0;
  /// max |log J + 2 sign vdt|.
  double log_j_residual = 0.0;
  /// max |z_alpha - J| / max J.
  double z_alpha_residual = 0.0;
};

/// Also updates ledger.last_residual and ledger.worst_residual.
LagrangianInvariants lag_invariants(const LagrangianState& s, IdentityLedger& ledger);

/// Record of the Eulerian quantities seen through the flow map: extrema of u
/// and v, m_inf = max (u_a^2 + v_a^2) / J^2, c, L2 norms weighted by J.
DiagnosticsRecord lag_measure(const LagrangianState& s);

/// Resamples (u, v) onto the Eulerian target grid by periodic monotone cubic
/// (PCHIP) interpolation through (z(alpha), u(alpha)). Throws ParticleCrossing
/// if z is not strictly increasing.
FieldPair lag_to_euler(const LagrangianState& s, const PeriodicGrid& target);

struct LagrangianRunOptions {
  double t_end = 0.0;
  std::size_t max_steps = 0;
  std::size_t snapshot_stride = 0;
  std::vector<double> stop_times;
  bool keep_records = true;
  double blowup_threshold = 1e12;
  std::function<void(const DiagnosticsRecord&)> on_record;
  std::function<void(const LagrangianState&)> on_snapshot;
};

struct LagrangianRunResult {
  RunStatus status = RunStatus::Completed;
  std::optional<BlowupInfo> blowup;
  LagrangianState final_state;
  std::vector<DiagnosticsRecord> records;
  std::size_t steps = 0;
  /// Largest identity residual seen over the run.
  double worst_identity_residual = 0.0;
  double worst_log_j_residual = 0.0;
};

LagrangianRunResult run_lagrangian(const LagrangianState& init, StepController ctrl,
                                   const LagrangianRunOptions& opts);

}  // namespace axiswirl
