#include "axiswirl/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "axiswirl/error.hpp"
#include "axiswirl/initial_data.hpp"
#include "axiswirl/lagrangian.hpp"
#include "axiswirl/lift3d.hpp"
#include "axiswirl/ode.hpp"
#include "axiswirl/simulate.hpp"

namespace axiswirl {

namespace fs = std::filesystem;

namespace {

InitKind default_init(RunKind kind) {
  return kind == RunKind::ReactionDiffusion ? InitKind::ReactionDiffusion : InitKind::Gaussian;
}

ConfigDocument resolve(RunKind kind, ConfigDocument doc) {
  if (doc.kind && *doc.kind != kind) {
    throw BadValue("kind", std::string("config names '") + to_string(*doc.kind) + "' but the command runs '" +
                               to_string(kind) + "'");
  }
  doc.kind = kind;
  if (kind != RunKind::Ode && !doc.init) doc.init = default_init(kind);
  if (kind == RunKind::Lagrangian && doc.nu != 0.0) throw BadValue("nu", "lagrangian runs are inviscid (nu = 0)");
  return doc;
}

RunManifest base_manifest(const ConfigDocument& doc) {
  RunManifest m;
  m.model = to_string(*doc.kind);
  m.init = doc.kind == RunKind::Ode ? "point" : to_string(*doc.init);
  m.grid_size = doc.kind == RunKind::Ode ? 1 : doc.n;
  m.t_end = doc.t_end;
  m.version = version();
  m.config = emit_config(doc);
  return m;
}

void set_status(RunManifest& m, RunStatus status, const std::optional<BlowupInfo>& b) {
  m.status = to_string(status);
  if (b) {
    m.t_star = b->t_star;
    m.cause = to_string(b->cause);
    m.detail = b->detail;
  }
}

int exit_for(RunStatus s) {
  return s == RunStatus::Blowup ? exit_code::kBlowup : exit_code::kCompleted;
}

void finish_manifest(RunManifest& m, const fs::path& out_dir, const std::vector<std::string>& files) {
  for (const auto& f : files) m.checksums[f] = fnv1a64_file(out_dir / f);
  write_manifest(out_dir / "manifest.txt", m);
}

// Snapshot writer shared by the Eulerian and Lagrangian runs.
struct SnapshotSink {
  fs::path dir;
  double nu;
  int sign;
  std::vector<std::string> files;
  double last_t = std::nan("");

  void write(const Snapshot& s) {
    if (s.t == last_t) return;
    const std::string name = snapshot_name(s.t);
    write_snapshot(dir / name, s, nu, sign);
    files.push_back(name);
    last_t = s.t;
  }
};

RunOutcome run_ode(const ConfigDocument& doc, const fs::path& out_dir, std::ostream& log) {
  RunManifest m = base_manifest(doc);
  IntegrateOptions io;
  io.adaptive = true;
  const OdeTrajectory traj = integrate_ode({doc.u0, doc.v0, 0.0}, doc.ode_params(), doc.t_end, doc.dt, io);

  SeriesWriter series(out_dir / "series.csv", doc.series_stride);
  double prev_t = 0.0;
  for (const auto& s : traj.samples) {
    DiagnosticsRecord r;
    r.t = s.t;
    r.dt = s.t - prev_t;
    r.max_u = r.min_u = s.u;
    r.max_v = r.min_v = s.v;
    r.mean_v = s.v;
    r.l2_u = std::abs(s.u);
    r.l2_v = std::abs(s.v);
    series.add(r);
    prev_t = s.t;
  }
  series.finish();

  if (traj.blew_up()) {
    m.status = to_string(RunStatus::Blowup);
    m.t_star = traj.blowup_time;
    m.cause = to_string(BlowupCause::NormExceeded);
  } else {
    m.status = to_string(RunStatus::Completed);
  }
  m.steps = traj.samples.size() - 1;
  finish_manifest(m, out_dir, {"series.csv"});
  log << "ode: " << m.status << " after " << m.steps << " samples\n";
  return {traj.blew_up() ? exit_code::kBlowup : exit_code::kCompleted, m};
}

RunOutcome run_pde(const ConfigDocument& doc, const fs::path& out_dir, std::ostream& log) {
  const ModelKind kind =
      *doc.kind == RunKind::ReactionDiffusion ? ModelKind::ReactionDiffusion : ModelKind::Euler1d;
  const PeriodicGrid grid(doc.n);
  const RdState init = make_initial_data(doc.init_params(*doc.init), grid, kind);

  RunManifest m = base_manifest(doc);
  SeriesWriter series(out_dir / "series.csv", doc.series_stride);
  SnapshotSink snaps{out_dir, doc.nu, doc.sign, {}};

  RunOptions opts;
  opts.t_end = doc.t_end;
  opts.max_steps = doc.max_steps;
  opts.snapshot_stride = doc.snapshot_stride;
  opts.stop_times = doc.snapshot_times;
  opts.keep_records = false;
  opts.on_record = [&](const DiagnosticsRecord& r) { series.add(r); };
  opts.on_snapshot = [&](const Snapshot& s) { snaps.write(s); };

  const RunResult res = run_model(kind, doc.model_config(), doc.step_controller(), init, opts);
  series.finish();

  // Final state, unless it is already on disk.
  const RdState& fin = res.final_state;
  ScalarField psi(grid);
  if (kind == ModelKind::Euler1d) psi = invert_stream(fin.v);
  snaps.write({fin.t, fin.u, fin.v, psi});

  set_status(m, res.status, res.blowup);
  m.steps = res.steps;
  std::vector<std::string> files{"series.csv"};
  files.insert(files.end(), snaps.files.begin(), snaps.files.end());
  finish_manifest(m, out_dir, files);
  log << to_string(kind) << ": " << m.status << " at t = " << format_double(fin.t) << " after " << res.steps
      << " steps\n";
  return {exit_for(res.status), m};
}

Snapshot lagrangian_snapshot(const LagrangianState& s) {
  const FieldPair e = lag_to_euler(s, s.grid());
  ScalarField v = e.v;
  v += -v.mean();
  return {s.t, e.u, e.v, invert_stream(v)};
}

RunOutcome run_lag(const ConfigDocument& doc, const fs::path& out_dir, std::ostream& log) {
  const PeriodicGrid grid(doc.n);
  const RdState init = make_initial_data(doc.init_params(*doc.init), grid, ModelKind::Euler1d);
  const LagrangianState s0 = LagrangianState::from_initial(init.u, init.v, doc.sign);

  RunManifest m = base_manifest(doc);
  SeriesWriter series(out_dir / "series.csv", doc.series_stride);
  SnapshotSink snaps{out_dir, 0.0, doc.sign, {}};
  auto snapshot = [&](const LagrangianState& s) {
    try {
      snaps.write(lagrangian_snapshot(s));
    } catch (const ParticleCrossing& e) {
      log << "lagrangian: no snapshot at t = " << format_double(s.t) << " (" << e.what() << ")\n";
    }
  };

  LagrangianRunOptions opts;
  opts.t_end = doc.t_end;
  opts.max_steps = doc.max_steps;
  opts.snapshot_stride = doc.snapshot_stride;
  opts.stop_times = doc.snapshot_times;
  opts.keep_records = false;
  opts.on_record = [&](const DiagnosticsRecord& r) { series.add(r); };
  opts.on_snapshot = snapshot;

  const LagrangianRunResult res = run_lagrangian(s0, doc.step_controller(), opts);
  series.finish();
  snapshot(res.final_state);

  set_status(m, res.status, res.blowup);
  m.steps = res.steps;
  std::vector<std::string> files{"series.csv"};
  files.insert(files.end(), snaps.files.begin(), snaps.files.end());
  finish_manifest(m, out_dir, files);
  log << "lagrangian: " << m.status << " at t = " << format_double(res.final_state.t) << " after " << res.steps
      << " steps, worst identity residual " << format_double(res.worst_identity_residual) << "\n";
  return {exit_for(res.status), m};
}

SweepRow sweep_one(RunKind kind, const ConfigDocument& doc) {
  SweepRow row;
  if (kind == RunKind::Ode) {
    const Classification c = classify_trajectory({doc.u0, doc.v0, 0.0}, doc.ode_params(), doc.t_end);
    row.status = to_string(c.kind);
    row.peak_u = c.peak_u;
    row.peak_v = c.peak_v;
    row.t_star = c.t_star;
    return row;
  }

  auto track = [&row](const DiagnosticsRecord& r) {
    row.peak_u = std::max(row.peak_u, r.sup_u());
    row.peak_v = std::max(row.peak_v, r.sup_v());
  };
  const PeriodicGrid grid(doc.n);
  RunStatus status;
  std::optional<BlowupInfo> blowup;
  if (kind == RunKind::Lagrangian) {
    const RdState init = make_initial_data(doc.init_params(*doc.init), grid, ModelKind::Euler1d);
    LagrangianRunOptions opts;
    opts.t_end = doc.t_end;
    opts.max_steps = doc.max_steps;
    opts.keep_records = false;
    opts.on_record = track;
    const auto res =
        run_lagrangian(LagrangianState::from_initial(init.u, init.v, doc.sign), doc.step_controller(), opts);
    status = res.status;
    blowup = res.blowup;
  } else {
    const ModelKind mk = kind == RunKind::ReactionDiffusion ? ModelKind::ReactionDiffusion : ModelKind::Euler1d;
    RunOptions opts;
    opts.t_end = doc.t_end;
    opts.max_steps = doc.max_steps;
    opts.keep_records = false;
    opts.on_record = track;
    const auto res = run_model(mk, doc.model_config(), doc.step_controller(),
                               make_initial_data(doc.init_params(*doc.init), grid, mk), opts);
    status = res.status;
    blowup = res.blowup;
  }
  row.status = to_string(status);
  if (blowup) {
    row.t_star = blowup->t_star;
    row.detail = to_string(blowup->cause);
  }
  return row;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

RunOutcome run(RunKind kind, const ConfigDocument& doc_in, const fs::path& out_dir, std::ostream& log) {
  const ConfigDocument doc = resolve(kind, doc_in);
  fs::create_directories(out_dir);
  switch (kind) {
    case RunKind::Ode: return run_ode(doc, out_dir, log);
    case RunKind::Lagrangian: return run_lag(doc, out_dir, log);
    default: return run_pde(doc, out_dir, log);
  }
}

std::vector<SweepRow> run_sweep(RunKind kind, const ConfigDocument& doc_in, unsigned threads) {
  const ConfigDocument doc = resolve(kind, doc_in);
  if (doc.sweep_param.empty() && !doc.sweep_values.empty()) throw BadValue("param", "sweep values need a param");

  std::vector<double> values = doc.sweep_values;
  std::stable_sort(values.begin(), values.end());
  std::vector<SweepRow> rows(values.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        ConfigDocument d = doc;
        set_config_value(d, doc.sweep_param, format_double(values[i]));
        rows[i] = sweep_one(kind, d);
      } catch (const std::exception& e) {
        rows[i] = SweepRow{};
        rows[i].status = "Error";
        rows[i].detail = e.what();
      }
      rows[i].value = values[i];
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(values.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_sweep(std::ostream& out, const std::string& param, const std::vector<SweepRow>& rows) {
  out << csv_cell(param.empty() ? "value" : param) << ",status,peak_u,peak_v,t_star,detail\n";
  for (const auto& r : rows) {
    out << format_double(r.value) << ',' << r.status << ',' << format_double(r.peak_u) << ','
        << format_double(r.peak_v) << ',' << (r.t_star ? format_double(*r.t_star) : "") << ','
        << csv_cell(r.detail) << '\n';
  }
}

int sweep(RunKind kind, const ConfigDocument& doc, const fs::path& out_dir, unsigned threads, std::ostream& log) {
  const ConfigDocument resolved = resolve(kind, doc);
  const auto rows = run_sweep(kind, resolved, threads);
  fs::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "sweep.csv", std::ios::binary);
    if (!out) throw Error("cannot open " + (out_dir / "sweep.csv").string() + " for writing");
    write_sweep(out, resolved.sweep_param, rows);
  }
  RunManifest m = base_manifest(resolved);
  m.status = "Completed";
  m.steps = rows.size();
  finish_manifest(m, out_dir, {"sweep.csv"});
  const auto errors = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.status == "Error"; });
  log << "sweep: " << rows.size() << " runs, " << errors << " errors\n";
  return exit_code::kCompleted;
}

int verify(const fs::path& run_dir, std::ostream& log) {
  const RunManifest m = read_manifest(run_dir / "manifest.txt");
  const ConfigDocument doc = parse_config(m.config);
  const std::vector<DiagnosticsRecord> records = read_series(run_dir / "series.csv");

  std::ostringstream report;
  bool failed = false;
  auto line = [&](const std::string& name, const Verdict& v) {
    const char* word = v.pass ? "PASS" : (v.advisory ? "WARN" : "FAIL");
    report << name << ": " << word << " (" << v.detail;
    if (v.first_violation_t) report << ", first violation t = " << format_double(*v.first_violation_t);
    report << ")\n";
    if (!v.pass && !v.advisory) failed = true;
  };

  for (const auto& [file, sum] : m.checksums) {
    const std::string actual = fnv1a64_file(run_dir / file);
    report << "checksum " << file << ": " << (actual == sum ? "PASS" : "FAIL") << "\n";
    failed = failed || actual != sum;
  }

  // The invariants are proved for the physical sign on a finite state; a
  // terminal blowup row is excluded.
  std::span<const DiagnosticsRecord> body(records);
  if (m.status == "Blowup" && !body.empty()) body = body.first(body.size() - 1);

  const bool transported = doc.kind == RunKind::Euler1d || doc.kind == RunKind::Lagrangian;
  if (transported && doc.sign == +1) {
    Verdict mp = max_principle_monitor(body);
    // Backward/forward Euler is not provably monotone for m_inf.
    mp.advisory = doc.kind == RunKind::Euler1d && doc.scheme == Scheme::ImexEuler && doc.nu > 0.0;
    line("max_principle", mp);
    line("sup_bounds", sup_bounds_check(body));
    if (doc.init == InitKind::Scaled) {
      line("scaled_family_bounds",
           scaled_family_bounds(body, doc.amplitude, doc.frequency, scaled_family_c0()));
    }
  }
  const StepController ctrl = doc.step_controller();
  const auto hit = detect_blowup(records, ctrl);
  report << "blowup: " << (hit ? std::string("detected, ") + to_string(hit->cause) + " at t = " + format_double(hit->t_star)
                               : std::string("none"))
         << "\n";
  report << "result: " << (failed ? "FAIL" : "PASS") << "\n";

  std::ofstream out(run_dir / "verify_report.txt", std::ios::binary);
  out << report.str();
  log << report.str();
  return failed ? exit_code::kVerifyFailed : exit_code::kCompleted;
}

int lift_check(const fs::path& snapshot, const std::vector<double>& radii, const fs::path& out_dir,
               std::ostream& log, double tol) {
  const SnapshotFile snap = read_snapshot(snapshot);
  const PeriodicGrid grid(snap.u.size());
  const EulerState state(ScalarField(grid, snap.u), ScalarField(grid, snap.v), snap.t);
  ModelConfig cfg;
  cfg.nu = snap.nu;
  cfg.sign = snap.sign;

  const AxisymResidual res = residual_axisym(state, cfg, radii);
  const CompatibilityReport compat = compatibility_check(state, radii);
  const bool pass = res.u <= tol && res.omega <= tol && res.psi <= tol && res.incompressibility <= tol &&
                    compat.pass();

  std::ostringstream report;
  report << "snapshot = " << snapshot.string() << "\n"
         << "t = " << format_double(snap.t) << "\n"
         << "residual_u = " << format_double(res.u) << "\n"
         << "residual_omega = " << format_double(res.omega) << "\n"
         << "residual_psi = " << format_double(res.psi) << "\n"
         << "incompressibility = " << format_double(res.incompressibility) << "\n";
  for (const auto& r : res.per_radius) {
    report << "r = " << format_double(r.r) << ": raw_u = " << format_double(r.raw_u)
           << ", raw_omega = " << format_double(r.raw_omega) << ", raw_psi = " << format_double(r.raw_psi) << "\n";
  }
  report << "compatibility = " << (compat.pass() ? "PASS" : "FAIL") << " (" << compat.detail << ")\n"
         << "result = " << (pass ? "PASS" : "FAIL") << "\n";

  fs::create_directories(out_dir);
  std::ofstream out(out_dir / "lift_report.txt", std::ios::binary);
  out << report.str();
  log << report.str();
  return pass ? exit_code::kCompleted : exit_code::kVerifyFailed;
}

}  // namespace axiswirl
