#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "axiswirl/config.hpp"
#include "axiswirl/io.hpp"

namespace axiswirl {

namespace exit_code {
constexpr int kCompleted = 0;
constexpr int kError = 1;
constexpr int kBlowup = 2;
constexpr int kVerifyFailed = 3;
}  // namespace exit_code

struct RunOutcome {
  int exit_code = exit_code::kCompleted;
  RunManifest manifest;
};

/// Runs one model and writes series.csv, snap_<t>.csv files and manifest.txt
/// into out_dir. doc.kind, when set, must agree with `kind`.
RunOutcome run(RunKind kind, const ConfigDocument& doc, const std::filesystem::path& out_dir,
               std::ostream& log);

struct SweepRow {
  double value = 0.0;
  std::string status;
  double peak_u = 0.0;
  double peak_v = 0.0;
  std::optional<double> t_star;
  std::string detail;
};

/// Runs the model once per [sweep] value on `threads` workers. Rows come back
/// sorted by value; a failing run yields a row with status "Error".
std::vector<SweepRow> run_sweep(RunKind kind, const ConfigDocument& doc, unsigned threads);
void write_sweep(std::ostream& out, const std::string& param, const std::vector<SweepRow>& rows);

/// run_sweep plus sweep.csv and manifest.txt in out_dir.
int sweep(RunKind kind, const ConfigDocument& doc, const std::filesystem::path& out_dir, unsigned threads,
          std::ostream& log);

/// Re-runs the record monitors on a finished run directory (series.csv and
/// manifest.txt) and writes verify_report.txt. Returns kVerifyFailed if a
/// hard check fails.
int verify(const std::filesystem::path& run_dir, std::ostream& log);

/// Lift verification of one snapshot file; writes lift_report.txt into
/// out_dir. Passes when every normalized residual is <= tol.
int lift_check(const std::filesystem::path& snapshot, const std::vector<double>& radii,
               const std::filesystem::path& out_dir, std::ostream& log, double tol = 1e-8);

}  // namespace axiswirl
