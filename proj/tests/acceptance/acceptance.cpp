// Acceptance checks, one numbered criterion per run:
//
//   axiswirl_acceptance            # all of them
//   axiswirl_acceptance 5 9        # a subset
//   axiswirl_acceptance 6 --known-red 6,8
//
// Every criterion prints exactly one line, "[PASS] C<n> ..." or
// "[FAIL] C<n> ...", with the measured numbers. The exit code is 0 when all
// selected criteria pass. A failing criterion listed in --known-red exits
// with kKnownRed instead, so ctest reports it as skipped rather than hiding
// it behind a pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "axiswirl/config.hpp"
#include "axiswirl/diagnostics.hpp"
#include "axiswirl/initial_data.hpp"
#include "axiswirl/io.hpp"
#include "axiswirl/lagrangian.hpp"
#include "axiswirl/lift3d.hpp"
#include "axiswirl/ode.hpp"
#include "axiswirl/runner.hpp"
#include "axiswirl/simulate.hpp"

using namespace axiswirl;
namespace fs = std::filesystem;

namespace {

constexpr int kKnownRed = 77;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}
std::string sci(double x) { return fmt("%.3e", x); }

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("axiswirl_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RdState gaussian(std::size_t n) {
  InitParams p;
  p.kind = InitKind::Gaussian;
  return make_initial_data(p, PeriodicGrid(n), ModelKind::Euler1d);
}

// With w = v + i u the d = 2 system reads w' = -w^2.
std::complex<double> riccati(double u0, double v0, double t) {
  const std::complex<double> w0(v0, u0);
  return w0 / (1.0 + w0 * t);
}

// ---------------------------------------------------------------------------

Outcome ode_exact_solution() {
  const double eps = 0.01;
  const OdeState exact = ode_exact(eps, -1.0 / eps, eps);
  const double eu = rel_err(exact.u, 1.0 / (eps * eps * eps));
  const double ev = rel_err(exact.v, 1.0 / eps);

  // v ends at 1e-4 of |w|, so resolving it to 1e-6 needs a tight tolerance.
  IntegrateOptions io;
  io.adaptive = true;
  io.rtol = 1e-14;
  const OdeTrajectory traj = integrate_ode({eps, -1.0 / eps, 0.0}, {2.0}, eps, eps / 100.0, io);
  const OdeState& last = traj.samples.back();
  const double iu = rel_err(last.u, 1.0 / (eps * eps * eps));
  const double iv = rel_err(last.v, 1.0 / eps);

  const bool pass = eu <= 1e-12 && ev <= 1e-12 && !traj.blew_up() && last.t == eps && iu <= 1e-6 && iv <= 1e-6;
  return {pass, "exact rel err (u, v) = (" + sci(eu) + ", " + sci(ev) + ") <= 1e-12; integrated (" + sci(iu) +
                    ", " + sci(iv) + ") <= 1e-6"};
}

Outcome ode_decay() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  IntegrateOptions io;
  io.adaptive = true;
  double worst = 0.0;
  double worst_oracle = 0.0;
  int bad = 0;
  for (int i = 0; i < 50; ++i) {
    double u0 = 0.0;
    while (std::abs(u0) < 1e-3) u0 = dist(rng);
    const double v0 = dist(rng);
    const OdeTrajectory traj = integrate_ode({u0, v0, 0.0}, {2.0}, 100.0, 1.0, io);
    if (traj.blew_up()) {
      ++bad;
      continue;
    }
    const OdeState& s = traj.samples.back();
    const double ratio = std::max(std::abs(s.u), std::abs(s.v)) / std::max({std::abs(u0), std::abs(v0), 1.0});
    worst = std::max(worst, ratio);
    const std::complex<double> w = riccati(u0, v0, 100.0);
    worst_oracle = std::max(worst_oracle, std::abs(std::complex<double>(s.v, s.u) - w) / std::abs(w));
    if (!(ratio < 0.1)) ++bad;
  }
  return {bad == 0, "50 states, worst max(|u|,|v|)/max(|u0|,|v0|,1) at t = 100: " + sci(worst) +
                        " < 0.1; worst deviation from closed form " + sci(worst_oracle)};
}

Outcome ode_envelope() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(1e-3, std::numbers::pi / 2 - 1e-3);
  std::uniform_real_distribution<double> log_r(-2.0, 2.0);
  IntegrateOptions io;
  io.adaptive = true;
  double worst_r = 0.0;
  double worst_theta = 0.0;
  std::size_t samples = 0;
  for (double d : {1.0, 1.5, 3.0}) {
    for (int i = 0; i < 20; ++i) {
      const PolarState p0{std::pow(10.0, log_r(rng)), ang(rng)};
      const OdeTrajectory traj = integrate_ode(from_polar(p0), {d}, 10.0, 0.01, io);
      double prev = p0.theta;
      for (const auto& s : traj.samples) {
        const PolarState p = to_polar(s);
        worst_r = std::max(worst_r, p.r / r_envelope_bound(p0.r, p0.theta, s.t) - 1.0);
        worst_theta = std::max(worst_theta, p.theta - prev);
        prev = p.theta;
        ++samples;
      }
    }
  }
  const bool pass = worst_r <= 1e-9 && worst_theta <= 1e-9;
  return {pass, std::to_string(samples) + " samples, max r/envelope - 1 = " + sci(worst_r) +
                    ", max theta increase per step = " + sci(worst_theta) + " (tol 1e-9)"};
}

Outcome rd_full_scale() {
  InitParams p;
  p.kind = InitKind::ReactionDiffusion;
  p.epsilon = 1e-3;
  const PeriodicGrid grid(32768);
  ModelConfig cfg;
  cfg.nu = 1.0;
  RunOptions o;
  o.t_end = 0.2007;
  o.keep_records = false;
  double peak_u = 0.0, peak_t = 0.0, low_v = 0.0, positive_t = -1.0;
  o.on_record = [&](const DiagnosticsRecord& r) {
    if (r.max_u > peak_u) {
      peak_u = r.max_u;
      peak_t = r.t;
    }
    low_v = std::min(low_v, r.min_v);
    if (positive_t < 0.0 && r.min_v > 0.0) positive_t = r.t;
  };
  const RunResult res = run_model(ModelKind::ReactionDiffusion, cfg, StepController{},
                                  make_initial_data(p, grid, ModelKind::ReactionDiffusion), o);
  const RdState& f = res.final_state;
  const double u_end = f.u.inf_norm();
  const double v_mean = f.v.mean();
  const double v_spread = std::max(f.v.max() - v_mean, v_mean - f.v.min()) / v_mean;

  // Order-of-magnitude match of the 2.5e8 peak near t = 0.00100.
  const bool a = peak_u >= 1e8 && peak_u <= 2.5e9 && low_v <= -1e8 && peak_t > 0.0009 && peak_t < 0.0011;
  const bool b = positive_t >= 0.0010 && positive_t <= 0.0011;
  const bool c = res.status == RunStatus::Completed && f.t == 0.2007 && u_end <= 1e-6 && v_spread <= 0.05 &&
                 std::abs(v_mean - 5.0) <= 0.25;
  return {a && b && c, std::string("(a) peak max u = ") + sci(peak_u) + " at t = " + fmt("%.8f", peak_t) +
                           ", min v = " + sci(low_v) + "; (b) v > 0 from t = " + fmt("%.8f", positive_t) +
                           "; (c) t = " + fmt("%.4f", f.t) + ": max|u| = " + sci(u_end) + ", mean v = " +
                           fmt("%.5f", v_mean) + ", spread " + sci(v_spread) + "; " +
                           std::to_string(res.steps) + " steps"};
}

Outcome maximum_principle() {
  const RdState init = gaussian(4096);
  RunOptions o;
  o.t_end = 0.0337;
  std::string detail;
  bool pass = true;
  for (double nu : {0.0, 1.0}) {
    ModelConfig cfg;
    cfg.nu = nu;
    cfg.scheme = nu == 0.0 ? Scheme::Rk2Inviscid : Scheme::ImexEuler;
    const RunResult r = run_model(ModelKind::Euler1d, cfg, StepController{}, init, o);
    const Verdict v = max_principle_monitor(r.records, 1e-3);
    const bool ok = r.status == RunStatus::Completed && v.pass;
    pass = pass && ok;
    detail += (nu == 0.0 ? "inviscid: " : "; nu = 1: ") + std::string(ok ? "" : "VIOLATED ") +
              "max m_inf/(m_inf(0)(1+1e-3)) = " + fmt("%.6f", v.worst_ratio) + " over " +
              std::to_string(r.steps) + " steps";
  }
  return {pass, detail};
}

Outcome lagrangian_conservation() {
  const RdState init = gaussian(4096);
  LagrangianRunOptions o;
  o.t_end = 0.0337;
  const LagrangianRunResult r = run_lagrangian(LagrangianState::from_initial(init.u, init.v), StepController{}, o);
  double dj = 0.0, dvj = 0.0;
  for (const auto& rec : r.records) {
    dj = std::max(dj, std::abs(rec.int_j - 1.0));
    dvj = std::max(dvj, std::abs(rec.int_vj));
  }
  const bool conserved = dj <= 1e-8 && dvj <= 1e-8;
  const bool identity = r.worst_identity_residual <= 1e-6;
  return {r.status == RunStatus::Completed && conserved && identity,
          "max |int J - 1| = " + sci(dj) + ", max |int vJ| = " + sci(dvj) + " (<= 1e-8); identity residual " +
              sci(r.worst_identity_residual) + " (<= 1e-6), final " + sci(r.records.back().identity_residual) +
              "; J in [" + sci(r.final_state.j.min()) + ", " + sci(r.final_state.j.max()) + "]"};
}

Outcome lift_verification() {
  std::string detail;
  bool pass = true;
  for (double nu : {1.0, 0.0}) {
    ConfigDocument doc;
    doc.nu = nu;
    doc.scheme = nu == 0.0 ? Scheme::Rk2Inviscid : Scheme::ImexEuler;
    doc.t_end = 0.01;
    doc.snapshot_times = {0.005};
    const fs::path dir = scratch(nu == 0.0 ? "lift_inviscid" : "lift_viscous");
    std::ostringstream log;
    run(RunKind::Euler1d, doc, dir, log);
    double worst = 0.0;
    for (double t : {0.005, 0.01}) {
      const fs::path snap = dir / snapshot_name(t);
      const bool ok = lift_check(snap, default_radii(), dir, log, 1e-8) == exit_code::kCompleted;
      const SnapshotFile f = read_snapshot(snap);
      const PeriodicGrid g(f.u.size());
      const EulerState s(ScalarField(g, f.u), ScalarField(g, f.v), f.t);
      ModelConfig cfg;
      cfg.nu = nu;
      worst = std::max(worst, residual_axisym(s, cfg).worst());
      pass = pass && ok;

      // 1% corruption of each 1D input must show up.
      LiftInputs bad = lift_inputs(s, cfg);
      bad.u1 *= 1.01;
      const double hit_u = residual_axisym(bad, nu, default_radii()).u;
      bad = lift_inputs(s, cfg);
      bad.omega1 *= 1.01;
      const double hit_w = residual_axisym(bad, nu, default_radii()).omega;
      pass = pass && hit_u >= 1e-3 && hit_w >= 1e-3;
      if (t == 0.01) {
        detail += (nu == 0.0 ? "; inviscid" : "nu = 1") + std::string(": worst residual ") + sci(worst) +
                  " (<= 1e-8), corrupted u1 -> " + sci(hit_u) + ", omega1 -> " + sci(hit_w) + " (>= 1e-3)";
      }
    }
    fs::remove_all(dir);
  }
  return {pass, detail};
}

Outcome sign_contrast() {
  const RdState init = gaussian(4096);
  const StepController ctrl;
  std::string detail;
  bool pass = true;
  for (int sign : {-1, +1}) {
    LagrangianRunOptions o;
    o.t_end = 0.05;
    const LagrangianRunResult r =
        run_lagrangian(LagrangianState::from_initial(init.u, init.v, sign), ctrl, o);
    const auto hit = detect_blowup(r.records, ctrl);
    double m = 0.0, sup = 0.0;
    for (const auto& rec : r.records) {
      m = std::max(m, rec.m_inf);
      sup = std::max({sup, rec.sup_u(), rec.sup_v()});
    }
    const bool ok = sign < 0 ? hit.has_value() : (!hit && r.status == RunStatus::Completed && r.final_state.t == 0.05);
    pass = pass && ok;
    detail += std::string(sign < 0 ? "sign -1: " : "; sign +1: ") +
              (hit ? std::string("blowup ") + to_string(hit->cause) + " at t = " + fmt("%.6f", hit->t_star)
                   : std::string("no trigger to t = ") + fmt("%.4f", r.final_state.t)) +
              " (peak sup " + sci(sup) + ", peak m_inf " + sci(m) + ")";
  }
  return {pass, detail};
}

Outcome scaled_family() {
  InitParams p;
  p.kind = InitKind::Scaled;
  p.amplitude = 2.0;
  p.frequency = 8;
  const RdState init = make_initial_data(p, PeriodicGrid(4096), ModelKind::Euler1d);
  RunOptions o;
  o.t_end = 0.1;
  const RunResult r = run_model(ModelKind::Euler1d, ModelConfig{}, StepController{}, init, o);
  const Verdict v = scaled_family_bounds(r.records, 2.0, 8.0, scaled_family_c0(), 0.01);
  return {r.status == RunStatus::Completed && v.pass,
          "A = 2, M = 8, " + std::to_string(r.steps) + " steps to t = " + fmt("%.3f", r.final_state.t) +
              ", worst observed/allowed = " + fmt("%.6f", v.worst_ratio) + " (C0 = 4 pi^2)"};
}

Outcome property_suites() {
  std::vector<std::string> failed;
  // Spectral round trips.
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double round_trip = 0.0;
  for (std::size_t n : {8u, 256u, 4096u, 32768u}) {
    const PeriodicGrid g(n);
    ScalarField f(g);
    for (auto& x : f.values()) x = dist(rng);
    const ScalarField back = inverse(g, forward(f));
    for (std::size_t j = 0; j < n; ++j) round_trip = std::max(round_trip, std::abs(back[j] - f[j]));
  }
  if (round_trip > 1e-13) failed.push_back("round trip");

  // IMEX closed form per mode.
  double imex = 0.0;
  {
    const PeriodicGrid g(128);
    ModelConfig cfg;
    cfg.nonlinear = false;
    for (int k = 1; k < 40; k += 7) {
      const double dt = 1e-4;
      const auto m = ScalarField::sample(g, [k](double z) { return std::sin(2 * std::numbers::pi * k * z); });
      const RdState next = step_imex(RdState{m, m, 0.0}, cfg, dt);
      const double factor = 1.0 / (1.0 + dt * std::pow(2 * std::numbers::pi * k, 2));
      for (std::size_t j = 0; j < g.size(); ++j) imex = std::max(imex, std::abs(next.u[j] - factor * m[j]));
    }
  }
  if (imex > 1e-14) failed.push_back("imex");

  // Mean of v along a run.
  double mean_v = 0.0;
  {
    RunOptions o;
    o.t_end = 0.0337;
    o.keep_records = false;
    o.on_record = [&](const DiagnosticsRecord& r) { mean_v = std::max(mean_v, std::abs(r.mean_v)); };
    run_model(ModelKind::Euler1d, ModelConfig{}, StepController{}, gaussian(4096), o);
  }
  if (mean_v > 1e-9) failed.push_back("mean v");

  // Config round trip.
  int config_bad = 0;
  for (int i = 0; i < 100; ++i) {
    ConfigDocument d;
    d.nu = std::abs(dist(rng)) * 2;
    d.sign = dist(rng) > 0 ? 1 : -1;
    d.dealias = dist(rng) > 0;
    d.d = std::abs(dist(rng)) * 3;
    d.n = std::size_t{8} << (rng() % 12);
    d.t_end = std::abs(dist(rng));
    d.cap = 1e-3 + std::abs(dist(rng));
    d.epsilon = std::abs(dist(rng)) * 1e-2 + 1e-9;
    d.amplitude = 0.5 + std::abs(dist(rng));
    d.frequency = 1 + static_cast<int>(rng() % 32);
    d.v0 = dist(rng) * 1e3;
    if (rng() % 2) d.init = static_cast<InitKind>(rng() % 4);
    if (rng() % 2) d.kind = static_cast<RunKind>(rng() % 4);
    d.snapshot_times = {std::abs(dist(rng)) / 3, std::abs(dist(rng))};
    if (parse_config(emit_config(d)) != d) ++config_bad;
  }
  if (config_bad > 0) failed.push_back("config");

  // Byte-identical reruns.
  ConfigDocument doc;
  doc.n = 1024;
  doc.t_end = 0.005;
  doc.snapshot_times = {0.0025};
  const fs::path a = scratch("determinism_a");
  const fs::path b = scratch("determinism_b");
  std::ostringstream log;
  run(RunKind::Euler1d, doc, a, log);
  run(RunKind::Euler1d, doc, b, log);
  bool identical = true;
  for (const auto& name : {std::string("series.csv"), snapshot_name(0.0025), snapshot_name(0.005)}) {
    identical = identical && fs::exists(a / name) && slurp(a / name) == slurp(b / name);
  }
  fs::remove_all(a);
  fs::remove_all(b);
  if (!identical) failed.push_back("determinism");

  std::string detail = "round trip " + sci(round_trip) + " (<= 1e-13), imex mode " + sci(imex) +
                       " (<= 1e-14), max |mean v| " + sci(mean_v) + " (<= 1e-9), config " +
                       std::to_string(100 - config_bad) + "/100, reruns " +
                       (identical ? "byte-identical" : "DIFFER");
  return {failed.empty(), detail};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // wall-clock budget; 0 = none
  std::function<Outcome()> check;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "ode exact solution", 1.0, ode_exact_solution},
      {2, "ode decay for d = 2", 10.0, ode_decay},
      {3, "polar envelope", 10.0, ode_envelope},
      {4, "reaction-diffusion at N = 32768", 0.0, rd_full_scale},
      {5, "maximum principle", 120.0, maximum_principle},
      {6, "lagrangian conservation", 120.0, lagrangian_conservation},
      {7, "3D lift", 30.0, lift_verification},
      {8, "sign contrast", 120.0, sign_contrast},
      {9, "scaled family bounds", 120.0, scaled_family},
      {10, "property suites", 60.0, property_suites},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"axiswirl acceptance criteria"};
  std::vector<int> selected;
  std::vector<int> known_red;
  app.add_option("criteria", selected, "criterion numbers (default: all)")->check(CLI::Range(1, 10));
  app.add_option("--known-red", known_red, "criteria whose failure is documented")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  bool any_fail = false;
  bool only_known = true;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = c.budget_s == 0.0 || secs <= c.budget_s;
    const bool pass = out.pass && in_budget;
    std::string timing = fmt("%.2f s", secs);
    if (c.budget_s > 0.0) timing += fmt(" of %.0f s budget", c.budget_s);
    if (!in_budget) timing += ", OVER BUDGET";
    std::printf("[%s] C%d %s (%s): %s\n", pass ? "PASS" : "FAIL", c.id, c.name, timing.c_str(), out.detail.c_str());
    std::fflush(stdout);
    if (!pass) {
      any_fail = true;
      if (std::find(known_red.begin(), known_red.end(), c.id) == known_red.end()) only_known = false;
    }
  }
  if (!any_fail) return 0;
  return only_known ? kKnownRed : 1;
}
