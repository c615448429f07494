#include "axiswirl/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "axiswirl/error.hpp"

namespace axiswirl {

const char* to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::Completed: return "Completed";
    case RunStatus::Blowup: return "Blowup";
    case RunStatus::StepLimit: return "StepLimit";
  }
  return "Completed";
}

namespace {

// Uniform view of the two state types for the loop below.
struct RdAdapter {
  using State = RdState;
  static State make(const RdState& s) { return s; }
  static const ScalarField& u(const State& s) { return s.u; }
  static const ScalarField& v(const State& s) { return s.v; }
  static const ScalarField* psi(const State&) { return nullptr; }
  static double c(const State&) { return 0.0; }
  static double t(const State& s) { return s.t; }
  static RdState plain(const State& s) { return s; }
  static constexpr ModelKind kind = ModelKind::ReactionDiffusion;
};

struct EulerAdapter {
  using State = EulerState;
  static State make(const RdState& s) { return EulerState(s.u, s.v, s.t); }
  static const ScalarField& u(const State& s) { return s.u(); }
  static const ScalarField& v(const State& s) { return s.v(); }
  static const ScalarField* psi(const State& s) { return &s.psi(); }
  static double c(const State& s) { return s.c(); }
  static double t(const State& s) { return s.t(); }
  static RdState plain(const State& s) { return {s.u(), s.v(), s.t()}; }
  static constexpr ModelKind kind = ModelKind::Euler1d;
};

// Exact: advance() lands on the limit it is given.
bool reached(double t, double target) { return t >= target; }

template <class A>
RunResult run_loop(const ModelConfig& cfg, StepController ctrl, const RdState& init,
                   const RunOptions& opts) {
  RunResult result{RunStatus::Completed, std::nullopt, init, {}, 0};
  typename A::State s = A::make(init);

  std::vector<double> stops = opts.stop_times;
  std::sort(stops.begin(), stops.end());
  auto next_stop = std::find_if(stops.begin(), stops.end(), [&](double x) { return x > A::t(s); });

  auto emit = [&](const DiagnosticsRecord& r) {
    if (opts.on_record) opts.on_record(r);
    if (opts.keep_records) result.records.push_back(r);
  };
  auto snapshot = [&](const typename A::State& st) {
    if (!opts.on_snapshot) return;
    const ScalarField* psi = A::psi(st);
    opts.on_snapshot({A::t(st), A::u(st), A::v(st), psi ? *psi : ScalarField(A::u(st).grid())});
  };

  Measurement m = measure_step(A::kind, A::u(s), A::v(s), A::psi(s), A::c(s), A::t(s), cfg);
  double bkm = 0.0;
  emit(m.record);
  if (opts.snapshot_stride > 0) snapshot(s);

  auto finish_blowup = [&](BlowupInfo info, DiagnosticsRecord terminal) {
    if (std::isnan(info.t_star)) info.t_star = A::t(s);
    result.status = RunStatus::Blowup;
    result.blowup = std::move(info);
    emit(terminal);
  };

  while (!reached(A::t(s), opts.t_end)) {
    if (opts.max_steps > 0 && result.steps >= opts.max_steps) {
      result.status = RunStatus::StepLimit;
      break;
    }
    double limit = opts.t_end - A::t(s);
    if (next_stop != stops.end()) limit = std::min(limit, *next_stop - A::t(s));

    std::optional<typename A::State> next;
    try {
      next.emplace(advance(s, cfg, ctrl, limit));
    } catch (const BlowupSignal& b) {
      DiagnosticsRecord terminal = m.record;
      terminal.dt = b.info().cause == BlowupCause::StepCollapse ? b.info().required_dt : ctrl.dt;
      terminal.bkm_integral = bkm;
      finish_blowup(b.info(), terminal);
      break;
    }

    const double dt = ctrl.dt;
    bkm += m.record.sup_v() * dt;
    const Measurement mn =
        measure_step(A::kind, A::u(*next), A::v(*next), A::psi(*next), A::c(*next), A::t(*next), cfg);
    DiagnosticsRecord rec = mn.record;
    rec.dt = dt;
    rec.bkm_integral = bkm;
    rec.energy_residual_u = std::abs(mn.energy_u - m.energy_u - dt * m.rates.u) / std::max(m.energy_u, 1e-30);
    rec.energy_residual_v = std::abs(mn.energy_v - m.energy_v - dt * m.rates.v) / std::max(m.energy_v, 1e-30);

    if (auto hit = detect_blowup(rec, ctrl, opts.blowup_threshold)) {
      ++result.steps;
      finish_blowup(*hit, rec);
      break;
    }

    emit(rec);
    s = std::move(*next);
    m = mn;
    ++result.steps;

    bool snap = opts.snapshot_stride > 0 && result.steps % opts.snapshot_stride == 0;
    while (next_stop != stops.end() && reached(A::t(s), *next_stop)) {
      snap = true;
      ++next_stop;
    }
    if (snap) snapshot(s);
  }

  result.final_state = A::plain(s);
  return result;
}

}  // namespace

RunResult run_model(ModelKind kind, const ModelConfig& cfg, StepController ctrl, const RdState& init,
                    const RunOptions& opts) {
  cfg.validate();
  ctrl.validate();
  if (!(init.u.grid() == init.v.grid())) throw BadParams("u and v live on different grids");
  if (!std::isfinite(opts.t_end) || opts.t_end < init.t) throw BadParams("t_end must be >= start time");
  if (kind == ModelKind::ReactionDiffusion && cfg.scheme != Scheme::ImexEuler) {
    throw BadParams("the reaction-diffusion model only supports the imex scheme");
  }
  return kind == ModelKind::ReactionDiffusion ? run_loop<RdAdapter>(cfg, ctrl, init, opts)
                                              : run_loop<EulerAdapter>(cfg, ctrl, init, opts);
}

}  // namespace axiswirl
