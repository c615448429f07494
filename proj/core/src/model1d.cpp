#include "axiswirl/model1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "axiswirl/blowup.hpp"
#include "axiswirl/error.hpp"

namespace axiswirl {

namespace {

ScalarField maybe_dealias(ScalarField f, bool on) { return on ? dealias(f) : f; }

// Backward-Euler diffusion of f + dt * rhs, with rhs masked by the 2/3 rule
// when requested. One pass in spectral space instead of separate dealias and
// diffuse_implicit calls.
ScalarField imex_update(const ScalarField& f, const ScalarField& rhs, double dt, double nu,
                        bool dealias_rhs) {
  const std::size_t n = f.size();
  Spectrum a = forward(f);
  const Spectrum b = forward(rhs);
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double keep = (!dealias_rhs || dealias_keeps(k, n)) ? 1.0 : 0.0;
    const double kk = wavenumber(k);
    a[k] = (a[k] + dt * keep * b[k]) / (1.0 + nu * dt * kk * kk);
  }
  return inverse(f.grid(), a);
}

ScalarField without_mean(ScalarField f) {
  f += -f.mean();
  return f;
}

void require_finite(const ScalarField& u, const ScalarField& v, double t) {
  if (!u.all_finite() || !v.all_finite()) {
    throw BlowupSignal({t, BlowupCause::NonFinite, "non-finite field values"});
  }
}

FieldPair convective_rhs(const ScalarField& u, const ScalarField& v, const ScalarField& psi,
                         double c, const ModelConfig& cfg) {
  const std::size_t n = u.size();
  ScalarField du(u.grid());
  ScalarField dv(u.grid());
  if (cfg.nonlinear) {
    const ScalarField uz = derivative(u);
    const ScalarField vz = derivative(v);
    const double adv = 2.0 * static_cast<double>(cfg.sign);
    for (std::size_t j = 0; j < n; ++j) {
      du[j] = -adv * psi[j] * uz[j] - 2.0 * v[j] * u[j];
      dv[j] = -adv * psi[j] * vz[j] + u[j] * u[j] - v[j] * v[j];
    }
    du = maybe_dealias(std::move(du), cfg.dealias_on);
    dv = maybe_dealias(std::move(dv), cfg.dealias_on);
    // c keeps mean(v) fixed; convection contributes 2 sign int v^2, so the
    // sign = -1 variant needs (1 + 2 sign) int v^2 - int u^2.
    dv += c + 2.0 * (cfg.sign - 1) * inner(v, v);
  }
  return {std::move(du), std::move(dv)};
}

}  // namespace

const char* to_string(Scheme s) noexcept {
  return s == Scheme::ImexEuler ? "imex" : "rk2";
}

const char* to_string(ModelKind k) noexcept {
  return k == ModelKind::ReactionDiffusion ? "rd" : "euler1d";
}

void ModelConfig::validate() const {
  if (!std::isfinite(nu) || nu < 0.0) throw BadParams("nu must be finite and >= 0");
  if (sign != 1 && sign != -1) throw BadParams("sign must be +1 or -1");
  if (scheme == Scheme::Rk2Inviscid && nu != 0.0) throw BadParams("rk2 scheme requires nu = 0");
}

void StepController::validate() const {
  if (!(cap > 0.0) || !std::isfinite(cap)) throw BadParams("cap must be positive");
  if (!(dt0 > 0.0) || !std::isfinite(dt0)) throw BadParams("dt0 must be positive");
  if (!(dt_min > 0.0) || dt_min > dt0) throw BadParams("dt_min must lie in (0, dt0]");
  if (!(cfl > 0.0)) throw BadParams("cfl must be positive");
}

EulerState::EulerState(ScalarField u, ScalarField v, double t)
    : u_(std::move(u)), v_(without_mean(std::move(v))), psi_(u_.grid()), t_(t) {
  if (!(u_.grid() == v_.grid())) throw BadParams("u and v live on different grids");
  psi_ = invert_stream(v_);
  c_ = compute_c(u_, v_);
}

double compute_c(const ScalarField& u, const ScalarField& v) {
  return 3.0 * inner(v, v) - inner(u, u);
}

FieldPair rd_rhs(const ScalarField& u, const ScalarField& v, const ModelConfig& cfg) {
  if (!(u.grid() == v.grid())) throw BadParams("u and v live on different grids");
  ScalarField du(u.grid());
  ScalarField dv(u.grid());
  if (cfg.nonlinear) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      du[j] = -2.0 * v[j] * u[j];
      dv[j] = u[j] * u[j] - v[j] * v[j];
    }
    du = maybe_dealias(std::move(du), cfg.dealias_on);
    dv = maybe_dealias(std::move(dv), cfg.dealias_on);
  }
  return {std::move(du), std::move(dv)};
}

FieldPair euler1d_rhs(const EulerState& s, const ModelConfig& cfg) {
  return convective_rhs(s.u(), s.v(), s.psi(), s.c(), cfg);
}

double adapt_dt(const ScalarField& u, const ScalarField& v, const StepController& ctrl) {
  const double sum = std::abs(u.max()) + std::abs(u.min()) + std::abs(v.max()) + std::abs(v.min());
  if (!std::isfinite(sum)) throw BlowupSignal({std::nan(""), BlowupCause::NonFinite, "non-finite extrema"});
  const double dt = sum > 0.0 ? std::min(ctrl.dt0, ctrl.cap / sum) : ctrl.dt0;
  if (dt < ctrl.dt_min) {
    throw BlowupSignal({std::nan(""), BlowupCause::StepCollapse,
                        "required dt " + std::to_string(dt) + " below dt_min", dt});
  }
  return dt;
}

double clamp_step(double dt, double dt_limit) {
  return dt >= dt_limit * (1.0 - 1e-6) ? dt_limit : dt;
}

double convective_dt_limit(const ScalarField& psi, double cfl) {
  const double speed = 2.0 * psi.inf_norm();
  if (speed == 0.0) return std::numeric_limits<double>::infinity();
  return cfl / (static_cast<double>(psi.size()) * speed);
}

RdState step_imex(const RdState& s, const ModelConfig& cfg, double dt) {
  const FieldPair rhs = rd_rhs(s.u, s.v, cfg);
  // rd_rhs already applied the mask; a second one would be a no-op.
  return {imex_update(s.u, rhs.u, dt, cfg.nu, false), imex_update(s.v, rhs.v, dt, cfg.nu, false),
          s.t + dt};
}

EulerState step_imex(const EulerState& s, const ModelConfig& cfg, double dt) {
  const FieldPair rhs = euler1d_rhs(s, cfg);
  return EulerState(imex_update(s.u(), rhs.u, dt, cfg.nu, false),
                    imex_update(s.v(), rhs.v, dt, cfg.nu, false), s.t() + dt);
}

EulerState step_rk2(const EulerState& s, const ModelConfig& cfg, double dt) {
  if (cfg.nu != 0.0) throw BadParams("rk2 scheme requires nu = 0");
  const FieldPair k1 = euler1d_rhs(s, cfg);
  const EulerState mid(s.u() + dt * k1.u, s.v() + dt * k1.v, s.t() + dt);
  require_finite(mid.u(), mid.v(), s.t());
  const FieldPair k2 = euler1d_rhs(mid, cfg);
  const double h = 0.5 * dt;
  ScalarField u = s.u() + h * (k1.u + k2.u);
  ScalarField v = s.v() + h * (k1.v + k2.v);
  return EulerState(std::move(u), std::move(v), s.t() + dt);
}

namespace {

double choose_dt(const ScalarField& u, const ScalarField& v, const ScalarField* psi,
                 const StepController& ctrl, double dt_limit, double t) {
  try {
    double dt = adapt_dt(u, v, ctrl);
    if (psi != nullptr) {
      dt = std::min(dt, convective_dt_limit(*psi, ctrl.cfl));
      if (dt < ctrl.dt_min) {
        throw BlowupSignal({t, BlowupCause::StepCollapse, "convective dt below dt_min", dt});
      }
    }
    return clamp_step(dt, dt_limit);
  } catch (BlowupSignal& b) {
    b.info().t_star = t;
    throw;
  }
}

}  // namespace

RdState advance(const RdState& s, const ModelConfig& cfg, StepController& ctrl, double dt_limit) {
  const double dt = choose_dt(s.u, s.v, nullptr, ctrl, dt_limit, s.t);
  RdState next = step_imex(s, cfg, dt);
  require_finite(next.u, next.v, s.t);
  ctrl.dt = dt;
  return next;
}

EulerState advance(const EulerState& s, const ModelConfig& cfg, StepController& ctrl,
                   double dt_limit) {
  const double dt = choose_dt(s.u(), s.v(), &s.psi(), ctrl, dt_limit, s.t());
  auto stepped = [&] {
    try {
      return cfg.scheme == Scheme::Rk2Inviscid ? step_rk2(s, cfg, dt) : step_imex(s, cfg, dt);
    } catch (const NonZeroMean&) {
      // Only reachable once values have left the floating-point range.
      throw BlowupSignal({s.t(), BlowupCause::NonFinite, "stream inversion lost precision"});
    }
  };
  EulerState next = stepped();
  require_finite(next.u(), next.v(), s.t());
  ctrl.dt = dt;
  return next;
}

}  // namespace axiswirl
