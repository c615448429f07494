#include "axiswirl/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "axiswirl/error.hpp"

namespace axiswirl {

const std::array<std::string_view, DiagnosticsRecord::kFieldCount>& DiagnosticsRecord::field_names() {
  static const std::array<std::string_view, kFieldCount> names = {
      "t",      "dt",     "max_u",  "min_u",  "max_v",
      "min_v",  "mean_v", "m_inf",  "c",      "l2_u",
      "l2_v",   "psi_inf", "uz_inf", "vz_inf", "energy_residual_u",
      "energy_residual_v", "bkm_integral", "int_j", "int_vj", "identity_residual"};
  return names;
}

std::array<double, DiagnosticsRecord::kFieldCount> DiagnosticsRecord::to_array() const {
  return {t,      dt,     max_u,  min_u,  max_v,
          min_v,  mean_v, m_inf,  c,      l2_u,
          l2_v,   psi_inf, uz_inf, vz_inf, energy_residual_u,
          energy_residual_v, bkm_integral, int_j, int_vj, identity_residual};
}

DiagnosticsRecord DiagnosticsRecord::from_array(std::span<const double> x) {
  if (x.size() != kFieldCount) throw BadParams("diagnostics row has the wrong number of columns");
  DiagnosticsRecord r;
  r.t = x[0];
  r.dt = x[1];
  r.max_u = x[2];
  r.min_u = x[3];
  r.max_v = x[4];
  r.min_v = x[5];
  r.mean_v = x[6];
  r.m_inf = x[7];
  r.c = x[8];
  r.l2_u = x[9];
  r.l2_v = x[10];
  r.psi_inf = x[11];
  r.uz_inf = x[12];
  r.vz_inf = x[13];
  r.energy_residual_u = x[14];
  r.energy_residual_v = x[15];
  r.bkm_integral = x[16];
  r.int_j = x[17];
  r.int_vj = x[18];
  r.identity_residual = x[19];
  return r;
}

double DiagnosticsRecord::sup_u() const noexcept { return std::max(std::abs(max_u), std::abs(min_u)); }
double DiagnosticsRecord::sup_v() const noexcept { return std::max(std::abs(max_v), std::abs(min_v)); }

bool DiagnosticsRecord::all_finite() const noexcept {
  const auto values = to_array();
  return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

namespace {

EnergyRates rates_from(ModelKind kind, const ScalarField& u, const ScalarField& v,
                       const ScalarField& uz, const ScalarField& vz, const ModelConfig& cfg) {
  EnergyRates r{-cfg.nu * inner(uz, uz), -cfg.nu * inner(vz, vz)};
  if (!cfg.nonlinear) return r;

  double u2v = 0.0;
  double v3 = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    u2v += u[j] * u[j] * v[j];
    v3 += v[j] * v[j] * v[j];
  }
  u2v /= static_cast<double>(u.size());
  v3 /= static_cast<double>(u.size());

  const double s = kind == ModelKind::Euler1d ? static_cast<double>(cfg.sign) : 0.0;
  r.u += -(2.0 + s) * u2v;
  r.v += u2v - (1.0 + s) * v3;
  return r;
}

DiagnosticsRecord record_from(const ScalarField& u, const ScalarField& v, const ScalarField& uz,
                              const ScalarField& vz, const ScalarField* psi, double c, double t) {
  DiagnosticsRecord r;
  r.t = t;
  r.max_u = u.max();
  r.min_u = u.min();
  r.max_v = v.max();
  r.min_v = v.min();
  r.mean_v = v.mean();
  r.c = c;
  r.l2_u = u.l2_norm();
  r.l2_v = v.l2_norm();
  if (psi != nullptr) r.psi_inf = psi->inf_norm();
  r.uz_inf = uz.inf_norm();
  r.vz_inf = vz.inf_norm();
  double m = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) m = std::max(m, uz[j] * uz[j] + vz[j] * vz[j]);
  r.m_inf = m;
  return r;
}

}  // namespace

EnergyRates energy_rates(ModelKind kind, const ScalarField& u, const ScalarField& v,
                         const ModelConfig& cfg) {
  return rates_from(kind, u, v, derivative(u), derivative(v), cfg);
}

namespace {

EnergyResidual budget(ModelKind kind, const ScalarField& u0, const ScalarField& v0,
                      const ScalarField& u1, const ScalarField& v1, double dt,
                      const ModelConfig& cfg) {
  const EnergyRates rate = energy_rates(kind, u0, v0, cfg);
  const double eu0 = 0.5 * inner(u0, u0);
  const double ev0 = 0.5 * inner(v0, v0);
  const double eu1 = 0.5 * inner(u1, u1);
  const double ev1 = 0.5 * inner(v1, v1);
  return {std::abs(eu1 - eu0 - dt * rate.u) / std::max(eu0, 1e-30),
          std::abs(ev1 - ev0 - dt * rate.v) / std::max(ev0, 1e-30)};
}

}  // namespace

EnergyResidual energy_budget(const RdState& prev, const RdState& next, const ModelConfig& cfg) {
  return budget(ModelKind::ReactionDiffusion, prev.u, prev.v, next.u, next.v, next.t - prev.t, cfg);
}

EnergyResidual energy_budget(const EulerState& prev, const EulerState& next, const ModelConfig& cfg) {
  return budget(ModelKind::Euler1d, prev.u(), prev.v(), next.u(), next.v(), next.t() - prev.t(), cfg);
}

DiagnosticsRecord measure(const ScalarField& u, const ScalarField& v, const ScalarField* psi,
                          double c, double t) {
  return record_from(u, v, derivative(u), derivative(v), psi, c, t);
}

Measurement measure_step(ModelKind kind, const ScalarField& u, const ScalarField& v,
                         const ScalarField* psi, double c, double t, const ModelConfig& cfg) {
  const ScalarField uz = derivative(u);
  const ScalarField vz = derivative(v);
  return {record_from(u, v, uz, vz, psi, c, t), rates_from(kind, u, v, uz, vz, cfg),
          0.5 * inner(u, u), 0.5 * inner(v, v)};
}

double amplification_constant(const ScalarField& u0, const ScalarField& v0) {
  const ScalarField uz = derivative(u0);
  const ScalarField vz = derivative(v0);
  double m = 0.0;
  for (std::size_t j = 0; j < uz.size(); ++j) m = std::max(m, uz[j] * uz[j] + vz[j] * vz[j]);
  return std::sqrt(m);
}

namespace {

// Folds one observed/allowed pair into a verdict.
void check(Verdict& out, double observed, double allowed, double t) {
  const double ratio = allowed > 0.0 ? observed / allowed : (observed > 0.0 ? INFINITY : 0.0);
  out.worst_ratio = std::max(out.worst_ratio, ratio);
  if (!(observed <= allowed) && out.pass) {
    out.pass = false;
    out.first_violation_t = t;
  }
}

}  // namespace

Verdict max_principle_monitor(std::span<const DiagnosticsRecord> records, double tol) {
  Verdict out;
  if (records.empty()) return out;
  const double limit = records.front().m_inf * (1.0 + tol);
  for (const auto& r : records) check(out, r.m_inf, limit, r.t);
  out.detail = "m_inf(0) = " + std::to_string(records.front().m_inf) +
               ", worst m_inf/limit = " + std::to_string(out.worst_ratio);
  return out;
}

Verdict sup_bounds_check(std::span<const DiagnosticsRecord> records, double u0_inf, double c0,
                         double slack) {
  Verdict out;
  for (const auto& r : records) {
    check(out, r.sup_v(), (1.0 + slack) * c0, r.t);
    check(out, r.sup_u(), (1.0 + slack) * u0_inf * std::exp(2.0 * c0 * r.t), r.t);
  }
  out.detail = "C0 = " + std::to_string(c0) + ", worst ratio = " + std::to_string(out.worst_ratio);
  return out;
}

Verdict sup_bounds_check(std::span<const DiagnosticsRecord> records, double slack) {
  if (records.empty()) return {};
  const auto& first = records.front();
  // Bounds are stated relative to t = 0, so shift times to the run start.
  std::vector<DiagnosticsRecord> shifted(records.begin(), records.end());
  for (auto& r : shifted) r.t -= first.t;
  return sup_bounds_check(shifted, first.sup_u(), std::sqrt(first.m_inf), slack);
}

Verdict scaled_family_bounds(std::span<const DiagnosticsRecord> records, double amplitude,
                             double frequency, double c0, double slack) {
  if (!(amplitude > 0.0) || !(frequency > 0.0)) throw BadParams("A and M must be positive");
  Verdict out;
  const double s = 1.0 + slack;
  const double a = amplitude;
  const double m = frequency;
  for (const auto& r : records) {
    check(out, r.psi_inf, s * c0 * a / (m * m), r.t);
    check(out, r.sup_u(), s * c0 * a / m, r.t);
    check(out, r.sup_v(), s * c0 * a / m, r.t);
    check(out, r.vz_inf, s * c0 * a, r.t);
    check(out, r.uz_inf, s * c0 * a, r.t);
  }
  out.detail = "C0 = " + std::to_string(c0) + ", worst ratio = " + std::to_string(out.worst_ratio);
  return out;
}

std::optional<BlowupInfo> detect_blowup(const DiagnosticsRecord& r, const StepController& ctrl,
                                        double threshold) {
  if (!r.all_finite()) return BlowupInfo{r.t, BlowupCause::NonFinite, "non-finite record"};
  const double sup = std::max(r.sup_u(), r.sup_v());
  if (sup > threshold) {
    return BlowupInfo{r.t, BlowupCause::NormExceeded, "sup norm " + std::to_string(sup)};
  }
  if (r.dt > 0.0 && r.dt < ctrl.dt_min) {
    return BlowupInfo{r.t, BlowupCause::StepCollapse, "dt " + std::to_string(r.dt)};
  }
  return std::nullopt;
}

std::optional<BlowupInfo> detect_blowup(std::span<const DiagnosticsRecord> records,
                                        const StepController& ctrl, double threshold) {
  for (const auto& r : records) {
    if (auto hit = detect_blowup(r, ctrl, threshold)) return hit;
  }
  return std::nullopt;
}

}  // namespace axiswirl
