#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "axiswirl/config.hpp"
#include "axiswirl/error.hpp"
#include "axiswirl/io.hpp"
#include "axiswirl/runner.hpp"

using namespace axiswirl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("axiswirl_runner_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ConfigDocument small_euler() {
  return parse_config(
      "[model]\nnu = 1\n[grid]\nn = 256\nt_end = 0.002\n[init]\nkind = gaussian\nepsilon = 0.001\n"
      "[output]\nsnapshot_times = 0.001\n");
}

}  // namespace

TEST_CASE("euler1d run writes series, snapshots and manifest") {
  const fs::path dir = scratch("euler");
  std::ostringstream log;
  const RunOutcome out = run(RunKind::Euler1d, small_euler(), dir, log);
  CHECK(out.exit_code == exit_code::kCompleted);
  CHECK(out.manifest.status == "Completed");
  CHECK(fs::exists(dir / "series.csv"));
  CHECK(fs::exists(dir / snapshot_name(0.001)));
  CHECK(fs::exists(dir / snapshot_name(0.002)));
  const RunManifest m = read_manifest(dir / "manifest.txt");
  CHECK(m.model == "euler1d");
  CHECK(m.init == "gaussian");
  CHECK(m.checksums.count("series.csv") == 1);
  CHECK(m.checksums.at("series.csv") == fnv1a64_file(dir / "series.csv"));
  // The echoed config reproduces the run.
  ConfigDocument echoed = parse_config(m.config);
  CHECK(echoed.kind == RunKind::Euler1d);
  echoed.kind.reset();
  CHECK(echoed.n == 256);
  const auto records = read_series(dir / "series.csv");
  REQUIRE(records.size() > 2);
  CHECK(records.front().t == 0.0);
  CHECK(records.back().t == 0.002);
  fs::remove_all(dir);
}

TEST_CASE("reruns are byte-identical") {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  std::ostringstream log;
  run(RunKind::Euler1d, small_euler(), a, log);
  run(RunKind::Euler1d, small_euler(), b, log);
  CHECK(slurp(a / "series.csv") == slurp(b / "series.csv"));
  CHECK(slurp(a / snapshot_name(0.001)) == slurp(b / snapshot_name(0.001)));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("kind mismatch and viscous lagrangian are rejected") {
  std::ostringstream log;
  ConfigDocument d = parse_config("[model]\nkind = rd\n");
  CHECK_THROWS_AS(run(RunKind::Euler1d, d, scratch("mismatch"), log), BadValue);
  CHECK_THROWS_AS(run(RunKind::Lagrangian, ConfigDocument{}, scratch("lagnu"), log), BadValue);
}

TEST_CASE("ode run exit codes") {
  std::ostringstream log;
  ConfigDocument d = parse_config("[init]\nu0 = 0\nv0 = -1\n[grid]\nt_end = 2\ndt = 0.01\n");
  const fs::path dir = scratch("ode");
  const RunOutcome blow = run(RunKind::Ode, d, dir, log);
  CHECK(blow.exit_code == exit_code::kBlowup);
  CHECK(blow.manifest.status == "Blowup");
  REQUIRE(blow.manifest.t_star);
  CHECK(*blow.manifest.t_star == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(read_manifest(dir / "manifest.txt").status == "Blowup");

  d.u0 = 0.01;
  d.v0 = -100;
  d.t_end = 0.01;
  d.dt = 0.001;
  const RunOutcome ok = run(RunKind::Ode, d, dir, log);
  CHECK(ok.exit_code == exit_code::kCompleted);
  fs::remove_all(dir);
}

TEST_CASE("d sweep classifies the ODE") {
  ConfigDocument d = parse_config(
      "[model]\nkind = ode\n[init]\nu0 = 0.001\nv0 = -1000\n[grid]\nt_end = 10\n"
      "[sweep]\nparam = model.d\nvalues = 3, 0.25, 0.5, 2, 0.75\n");
  const auto rows = run_sweep(RunKind::Ode, d, 3);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].value < rows[i].value);
  for (const auto& r : rows) {
    if (r.value < 1.0) {
      CHECK(r.status == "Blowup");
      CHECK(r.t_star.has_value());
    } else {
      CHECK(r.status == "Decay");
    }
  }
  std::ostringstream out;
  write_sweep(out, d.sweep_param, rows);
  CHECK(out.str().substr(0, out.str().find('\n')) == "model.d,status,peak_u,peak_v,t_star,detail");
}

TEST_CASE("empty sweep writes only the header") {
  const fs::path dir = scratch("sweep_empty");
  std::ostringstream log;
  ConfigDocument d = parse_config("[sweep]\nparam = model.d\n");
  CHECK(sweep(RunKind::Ode, d, dir, 2, log) == exit_code::kCompleted);
  CHECK(slurp(dir / "sweep.csv") == "model.d,status,peak_u,peak_v,t_star,detail\n");
  fs::remove_all(dir);
}

TEST_CASE("sweep keeps going past a failing run") {
  ConfigDocument d = parse_config("[grid]\nn = 64\nt_end = 0.0001\n[sweep]\nparam = grid.n\nvalues = 64, 100\n");
  const auto rows = run_sweep(RunKind::ReactionDiffusion, d, 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].status == "Completed");
  CHECK(rows[1].status == "Error");
}

TEST_CASE("verify passes a clean run and catches tampering") {
  const fs::path dir = scratch("verify");
  std::ostringstream log;
  ConfigDocument d = small_euler();
  d.nu = 0;
  d.scheme = Scheme::Rk2Inviscid;
  d.n = 1024;
  run(RunKind::Euler1d, d, dir, log);
  CHECK(verify(dir, log) == exit_code::kCompleted);
  CHECK(slurp(dir / "verify_report.txt").find("result: PASS") != std::string::npos);

  std::ofstream(dir / "series.csv", std::ios::app) << "\n";
  CHECK(verify(dir, log) == exit_code::kVerifyFailed);
  fs::remove_all(dir);
}

TEST_CASE("lift-check on a written snapshot") {
  const fs::path dir = scratch("lift");
  std::ostringstream log;
  run(RunKind::Euler1d, small_euler(), dir, log);
  const fs::path snap = dir / snapshot_name(0.001);
  CHECK(lift_check(snap, {0.01, 0.1, 1.0, 10.0}, dir, log) == exit_code::kCompleted);
  const std::string report = slurp(dir / "lift_report.txt");
  CHECK(report.find("result = PASS") != std::string::npos);
  CHECK(lift_check(snap, {1.0}, dir, log, 1e-20) == exit_code::kVerifyFailed);
  fs::remove_all(dir);
}

TEST_CASE("lagrangian run honours the sign") {
  const fs::path dir = scratch("lag");
  std::ostringstream log;
  ConfigDocument d = parse_config("[model]\nnu = 0\nsign = -1\n[grid]\nn = 256\nt_end = 0.001\n[init]\nepsilon = 0.001\n");
  const RunOutcome out = run(RunKind::Lagrangian, d, dir, log);
  CHECK(out.exit_code == exit_code::kCompleted);
  CHECK(read_snapshot(dir / snapshot_name(0.001)).sign == -1);
  fs::remove_all(dir);
}
