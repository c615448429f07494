#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "axiswirl/blowup.hpp"
#include "axiswirl/diagnostics.hpp"
#include "axiswirl/model1d.hpp"

namespace axiswirl {

enum class RunStatus { Completed, Blowup, StepLimit };

const char* to_string(RunStatus s) noexcept;

/// Field dump handed to the snapshot hook. psi is zero for RD runs.
struct Snapshot {
  double t = 0.0;
  ScalarField u;
  ScalarField v;
  ScalarField psi;
};

struct RunOptions {
  double t_end = 0.0;
  /// 0 means unlimited.
  std::size_t max_steps = 0;
  /// Snapshot every k accepted steps (and at t = t0); 0 disables.
  std::size_t snapshot_stride = 0;
  /// Steps are shortened to land on these times exactly; a snapshot is
  /// emitted at each.
  std::vector<double> stop_times;
  bool keep_records = true;
  double blowup_threshold = 1e12;
  std::function<void(const DiagnosticsRecord&)> on_record;
  std::function<void(const Snapshot&)> on_snapshot;
};

struct RunResult {
  RunStatus status = RunStatus::Completed;
  std::optional<BlowupInfo> blowup;
  /// Last finite state.
  RdState final_state;
  std::vector<DiagnosticsRecord> records;
  std::size_t steps = 0;
};

/// Advances `init` to opts.t_end under the adaptive step rule, measuring one
/// DiagnosticsRecord per accepted step (the first record is the initial
/// state). Blowup ends the run with a terminal record instead of throwing.
RunResult run_model(ModelKind kind, const ModelConfig& cfg, StepController ctrl, const RdState& init,
                    const RunOptions& opts);

}  // namespace axiswirl
