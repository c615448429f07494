#include "axiswirl/lagrangian.hpp"

#include <algorithm>
#include <cmath>

// pchip.hpp in Boost 1.74 calls isnan unqualified; math.h provides ::isnan.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

#include "axiswirl/error.hpp"

namespace axiswirl {

namespace {

double weighted_mean(const ScalarField& f, const ScalarField& w) { return inner(f, w) / w.mean(); }

// Shift v so that int v J = 0.
void project(ScalarField& v, const ScalarField& j) { v += -weighted_mean(v, j); }

void check_state(const LagrangianState& s, double t_prev) {
  for (const ScalarField* f : {&s.j, &s.u, &s.v, &s.disp}) {
    if (!f->all_finite()) throw BlowupSignal({t_prev, BlowupCause::NonFinite, "non-finite particle data"});
  }
  if (!(s.j.min() > 0.0)) {
    throw BlowupSignal({t_prev, BlowupCause::JacobianCollapse, "min J = " + std::to_string(s.j.min())});
  }
}

LagrangianState axpy(const LagrangianState& s, double h, const LagrangianDerivative& k) {
  return {s.j + h * k.j, s.u + h * k.u, s.v + h * k.v, s.disp + h * k.z, s.vdt + h * s.v, s.t + h, s.sign};
}

}  // namespace

LagrangianState LagrangianState::from_initial(const ScalarField& u0, const ScalarField& v0, int sign,
                                              double t0) {
  if (!(u0.grid() == v0.grid())) throw BadParams("u and v live on different grids");
  if (sign != 1 && sign != -1) throw BadParams("sign must be +1 or -1");
  const PeriodicGrid& g = u0.grid();
  LagrangianState s{ScalarField(g, 1.0), u0, v0, ScalarField(g), ScalarField(g), t0, sign};
  project(s.v, s.j);
  return s;
}

std::vector<double> LagrangianState::positions() const {
  std::vector<double> z(disp.size());
  for (std::size_t a = 0; a < z.size(); ++a) z[a] = grid().node(a) + disp[a];
  return z;
}

ScalarField lagrangian_stream(const LagrangianState& s) {
  ScalarField vj = product(s.v, s.j);
  vj += -vj.mean();
  ScalarField phi = invert_stream(vj);
  phi += -weighted_mean(phi, s.j);
  return phi;
}

LagrangianDerivative lag_rhs(const LagrangianState& s) {
  const std::size_t n = s.j.size();
  const PeriodicGrid& g = s.grid();
  const double sg = s.sign;
  const double c = (1.0 + 2.0 * sg) * inner(product(s.v, s.v), s.j) - inner(product(s.u, s.u), s.j);
  LagrangianDerivative d{ScalarField(g), ScalarField(g), ScalarField(g), lagrangian_stream(s), c};
  for (std::size_t a = 0; a < n; ++a) {
    d.j[a] = -2.0 * sg * s.j[a] * s.v[a];
    d.u[a] = -2.0 * s.u[a] * s.v[a];
    d.v[a] = s.u[a] * s.u[a] - s.v[a] * s.v[a] + c;
  }
  d.z *= 2.0 * sg;
  return d;
}

LagrangianState lag_step(const LagrangianState& s, double dt) {
  const LagrangianDerivative k1 = lag_rhs(s);
  LagrangianState mid = axpy(s, dt, k1);
  check_state(mid, s.t);
  project(mid.v, mid.j);

  const LagrangianDerivative k2 = lag_rhs(mid);
  const double h = 0.5 * dt;
  LagrangianState out{s.j + h * (k1.j + k2.j), s.u + h * (k1.u + k2.u), s.v + h * (k1.v + k2.v),
                      s.disp + h * (k1.z + k2.z), s.vdt + h * (s.v + mid.v), s.t + dt, s.sign};
  check_state(out, s.t);
  project(out.v, out.j);
  return out;
}

LagrangianState lag_advance(const LagrangianState& s, StepController& ctrl, double dt_limit) {
  double dt = 0.0;
  try {
    dt = clamp_step(adapt_dt(s.u, s.v, ctrl), dt_limit);
  } catch (BlowupSignal& b) {
    b.info().t_star = s.t;
    throw;
  }
  LagrangianState next = lag_step(s, dt);
  ctrl.dt = dt;
  return next;
}

namespace {

ScalarField gradient_magnitude(const LagrangianState& s) {
  const ScalarField ua = derivative(s.u);
  const ScalarField va = derivative(s.v);
  ScalarField g(s.grid());
  for (std::size_t a = 0; a < g.size(); ++a) g[a] = std::hypot(ua[a], va[a]);
  return g;
}

}  // namespace

IdentityLedger::IdentityLedger(const LagrangianState& initial) : g0(gradient_magnitude(initial)) {}

LagrangianInvariants lag_invariants(const LagrangianState& s, IdentityLedger& ledger) {
  LagrangianInvariants out;
  out.int_j = s.j.mean();
  out.int_vj = inner(s.v, s.j);

  const ScalarField g = gradient_magnitude(s);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    const double ref = ledger.g0[a] * s.j[a];
    num = std::max(num, std::abs(g[a] - ref));
    den = std::max(den, ref);
  }
  out.identity_residual = den > 0.0 ? num / den : num;

  const ScalarField za = derivative(s.disp);
  double logj = 0.0;
  double zres = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    logj = std::max(logj, std::abs(std::log(s.j[a]) + 2.0 * s.sign * s.vdt[a]));
    zres = std::max(zres, std::abs(1.0 + za[a] - s.j[a]));
  }
  out.log_j_residual = logj;
  out.z_alpha_residual = zres / s.j.max();

  ledger.last_residual = out.identity_residual;
  ledger.worst_residual = std::max(ledger.worst_residual, out.identity_residual);
  return out;
}

DiagnosticsRecord lag_measure(const LagrangianState& s) {
  DiagnosticsRecord r;
  r.t = s.t;
  r.max_u = s.u.max();
  r.min_u = s.u.min();
  r.max_v = s.v.max();
  r.min_v = s.v.min();
  r.int_j = s.j.mean();
  r.int_vj = inner(s.v, s.j);
  r.mean_v = r.int_vj;
  r.c = (1.0 + 2.0 * s.sign) * inner(product(s.v, s.v), s.j) - inner(product(s.u, s.u), s.j);
  r.l2_u = std::sqrt(inner(product(s.u, s.u), s.j));
  r.l2_v = std::sqrt(inner(product(s.v, s.v), s.j));
  r.psi_inf = lagrangian_stream(s).inf_norm();

  const ScalarField ua = derivative(s.u);
  const ScalarField va = derivative(s.v);
  for (std::size_t a = 0; a < ua.size(); ++a) {
    const double uz = ua[a] / s.j[a];
    const double vz = va[a] / s.j[a];
    r.uz_inf = std::max(r.uz_inf, std::abs(uz));
    r.vz_inf = std::max(r.vz_inf, std::abs(vz));
    r.m_inf = std::max(r.m_inf, uz * uz + vz * vz);
  }
  return r;
}

FieldPair lag_to_euler(const LagrangianState& s, const PeriodicGrid& target) {
  const std::vector<double> z = s.positions();
  const std::size_t n = z.size();
  for (std::size_t a = 1; a < n; ++a) {
    if (!(z[a] > z[a - 1])) throw ParticleCrossing("particle positions are not increasing");
  }
  if (!(z.front() + 1.0 > z.back())) throw ParticleCrossing("particle positions wrap over each other");

  // Three periods of the map cover every target node whatever the drift.
  auto extend = [&](const ScalarField& f) {
    std::vector<double> x;
    std::vector<double> y;
    x.reserve(3 * n);
    y.reserve(3 * n);
    for (int shift = -1; shift <= 1; ++shift) {
      for (std::size_t a = 0; a < n; ++a) {
        x.push_back(z[a] + shift);
        y.push_back(f[a]);
      }
    }
    return boost::math::interpolators::pchip<std::vector<double>>(std::move(x), std::move(y));
  };

  auto resample = [&](const ScalarField& f) {
    const auto interp = extend(f);
    return ScalarField::sample(target, [&](double x) {
      // Bring x into [z0, z0 + 1) so it sits inside the extended range.
      const double shift = std::floor(x - z.front());
      return interp(x - shift);
    });
  };
  return {resample(s.u), resample(s.v)};
}

LagrangianRunResult run_lagrangian(const LagrangianState& init, StepController ctrl,
                                   const LagrangianRunOptions& opts) {
  ctrl.validate();
  if (!std::isfinite(opts.t_end) || opts.t_end < init.t) throw BadParams("t_end must be >= start time");

  LagrangianRunResult result{RunStatus::Completed, std::nullopt, init, {}, 0, 0.0, 0.0};
  LagrangianState s = init;
  IdentityLedger ledger(init);

  std::vector<double> stops = opts.stop_times;
  std::sort(stops.begin(), stops.end());
  auto next_stop = std::find_if(stops.begin(), stops.end(), [&](double x) { return x > s.t; });
  auto reached = [](double t, double target) { return t >= target; };

  auto emit = [&](const DiagnosticsRecord& r) {
    if (opts.on_record) opts.on_record(r);
    if (opts.keep_records) result.records.push_back(r);
  };
  auto record_of = [&](const LagrangianState& st) {
    DiagnosticsRecord r = lag_measure(st);
    const LagrangianInvariants inv = lag_invariants(st, ledger);
    r.identity_residual = inv.identity_residual;
    result.worst_log_j_residual = std::max(result.worst_log_j_residual, inv.log_j_residual);
    return r;
  };

  DiagnosticsRecord rec = record_of(s);
  double bkm = 0.0;
  emit(rec);
  if (opts.snapshot_stride > 0 && opts.on_snapshot) opts.on_snapshot(s);

  while (!reached(s.t, opts.t_end)) {
    if (opts.max_steps > 0 && result.steps >= opts.max_steps) {
      result.status = RunStatus::StepLimit;
      break;
    }
    double limit = opts.t_end - s.t;
    if (next_stop != stops.end()) limit = std::min(limit, *next_stop - s.t);

    std::optional<LagrangianState> next;
    try {
      next.emplace(lag_advance(s, ctrl, limit));
    } catch (const BlowupSignal& b) {
      result.status = RunStatus::Blowup;
      result.blowup = b.info();
      if (std::isnan(result.blowup->t_star)) result.blowup->t_star = s.t;
      DiagnosticsRecord terminal = rec;
      terminal.dt = b.info().cause == BlowupCause::StepCollapse ? b.info().required_dt : ctrl.dt;
      emit(terminal);
      break;
    }

    bkm += rec.sup_v() * ctrl.dt;
    DiagnosticsRecord r = record_of(*next);
    r.dt = ctrl.dt;
    r.bkm_integral = bkm;
    ++result.steps;
    if (auto hit = detect_blowup(r, ctrl, opts.blowup_threshold)) {
      result.status = RunStatus::Blowup;
      result.blowup = hit;
      emit(r);
      break;
    }
    emit(r);
    s = std::move(*next);
    rec = r;

    bool snap = opts.snapshot_stride > 0 && result.steps % opts.snapshot_stride == 0;
    while (next_stop != stops.end() && reached(s.t, *next_stop)) {
      snap = true;
      ++next_stop;
    }
    if (snap && opts.on_snapshot) opts.on_snapshot(s);
  }

  result.final_state = s;
  result.worst_identity_residual = ledger.worst_residual;
  return result;
}

}  // namespace axiswirl
