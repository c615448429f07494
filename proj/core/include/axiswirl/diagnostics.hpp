#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "axiswirl/blowup.hpp"
#include "axiswirl/model1d.hpp"

namespace axiswirl {

/// One row of the per-step time series. The Lagrangian columns (int_j,
/// int_vj, identity_residual) are zero for Eulerian runs.
struct DiagnosticsRecord {
  double t = 0.0;
  double dt = 0.0;
  double max_u = 0.0;
  double min_u = 0.0;
  double max_v = 0.0;
  double min_v = 0.0;
  double mean_v = 0.0;
  /// sup of u_z^2 + v_z^2
  double m_inf = 0.0;
  double c = 0.0;
  double l2_u = 0.0;
  double l2_v = 0.0;
  double psi_inf = 0.0;
  double uz_inf = 0.0;
  double vz_inf = 0.0;
  double energy_residual_u = 0.0;
  double energy_residual_v = 0.0;
  /// Running integral of sup|v| dt (informational).
  double bkm_integral = 0.0;
  double int_j = 0.0;
  double int_vj = 0.0;
  double identity_residual = 0.0;

  static constexpr std::size_t kFieldCount = 20;
  static const std::array<std::string_view, kFieldCount>& field_names();
  std::array<double, kFieldCount> to_array() const;
  static DiagnosticsRecord from_array(std::span<const double> values);

  double sup_u() const noexcept;
  double sup_v() const noexcept;
  bool all_finite() const noexcept;
};

/// Energy rates d/dt (1/2 int u^2) and d/dt (1/2 int v^2) implied by the model
/// equations. For the Eulerian model with convection sign s:
///   -(2 + s) int u^2 v - nu int u_z^2
///   int u^2 v - (1 + s) int v^3 - nu int v_z^2
/// The reaction-diffusion model has no convection term.
struct EnergyRates {
  double u = 0.0;
  double v = 0.0;
};

EnergyRates energy_rates(ModelKind kind, const ScalarField& u, const ScalarField& v,
                         const ModelConfig& cfg);

struct EnergyResidual {
  double u = 0.0;
  double v = 0.0;
};

/// |Delta(1/2 int f^2) - dt * rate(prev)| / max(1/2 int f^2 at prev, 1e-30).
/// First order in dt for the forward/backward Euler scheme.
EnergyResidual energy_budget(const RdState& prev, const RdState& next, const ModelConfig& cfg);
EnergyResidual energy_budget(const EulerState& prev, const EulerState& next, const ModelConfig& cfg);

/// Measures extrema, norms and derivative sups of (u, v). psi may be null (RD
/// runs), in which case psi_inf is left at zero.
DiagnosticsRecord measure(const ScalarField& u, const ScalarField& v, const ScalarField* psi,
                          double c, double t);

struct Measurement {
  DiagnosticsRecord record;
  EnergyRates rates;
  double energy_u = 0.0;  // 1/2 int u^2
  double energy_v = 0.0;
};

/// measure() plus the energy rates, sharing one derivative evaluation.
Measurement measure_step(ModelKind kind, const ScalarField& u, const ScalarField& v,
                         const ScalarField* psi, double c, double t, const ModelConfig& cfg);

/// sup sqrt(u_z^2 + v_z^2) of the initial data; the amplification constant of
/// the sup bounds.
double amplification_constant(const ScalarField& u0, const ScalarField& v0);

struct Verdict {
  bool pass = true;
  /// Warn-only verdicts never fail a run.
  bool advisory = false;
  std::optional<double> first_violation_t;
  /// Largest observed value / allowed value over the stream.
  double worst_ratio = 0.0;
  std::string detail;
};

/// Pass iff m_inf(t) <= m_inf(0) (1 + tol) for every record. records[0] must
/// hold the initial state.
Verdict max_principle_monitor(std::span<const DiagnosticsRecord> records, double tol = 1e-3);

/// Pass iff sup|v| <= (1 + slack) C0 and sup|u| <= (1 + slack) |u0|_inf exp(2 C0 t).
Verdict sup_bounds_check(std::span<const DiagnosticsRecord> records, double u0_inf, double c0,
                         double slack = 0.01);
/// Reads |u0|_inf and C0 = sqrt(m_inf) from records[0].
Verdict sup_bounds_check(std::span<const DiagnosticsRecord> records, double slack = 0.01);

/// The five bounds on the scaled initial-data family:
///   |psi| <= C0 A / M^2, |u| <= C0 A / M, |psi_z| = |v| <= C0 A / M,
///   |omega| = |v_z| <= C0 A, |u_z| <= C0 A.
Verdict scaled_family_bounds(std::span<const DiagnosticsRecord> records, double amplitude,
                             double frequency, double c0, double slack = 0.01);

/// Fires on non-finite values, sup norm above `threshold`, or a recorded dt
/// below the controller's dt_min.
std::optional<BlowupInfo> detect_blowup(const DiagnosticsRecord& record, const StepController& ctrl,
                                        double threshold = 1e12);
std::optional<BlowupInfo> detect_blowup(std::span<const DiagnosticsRecord> records,
                                        const StepController& ctrl, double threshold = 1e12);

}  // namespace axiswirl
