#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace axiswirl {

enum class BlowupCause {
  StepCollapse,      // required dt fell below dt_min
  NonFinite,         // NaN or Inf in the state
  NormExceeded,      // sup norm above the blowup threshold
  JacobianCollapse,  // flow-map Jacobian J <= 0
  ParticleCrossing,  // particle positions lost monotonicity
};

const char* to_string(BlowupCause cause) noexcept;

struct BlowupInfo {
  double t_star = std::nan("");
  BlowupCause cause = BlowupCause::NonFinite;
  std::string detail;
  /// For StepCollapse: the step the controller asked for.
  double required_dt = 0.0;
};

/// Thrown by stepping code to unwind to the run loop, which turns it into a
/// Blowup termination status.
class BlowupSignal : public std::runtime_error {
 public:
  explicit BlowupSignal(BlowupInfo info)
      : std::runtime_error(std::string("blowup: ") + to_string(info.cause) +
                           (info.detail.empty() ? "" : " (" + info.detail + ")")),
        info_(std::move(info)) {}
  const BlowupInfo& info() const noexcept { return info_; }
  BlowupInfo& info() noexcept { return info_; }

 private:
  BlowupInfo info_;
};

inline const char* to_string(BlowupCause cause) noexcept {
  switch (cause) {
    case BlowupCause::StepCollapse: return "StepCollapse";
    case BlowupCause::NonFinite: return "NonFinite";
    case BlowupCause::NormExceeded: return "NormExceeded";
    case BlowupCause::JacobianCollapse: return "JacobianCollapse";
    case BlowupCause::ParticleCrossing: return "ParticleCrossing";
  }
  return "NonFinite";
}

}  // namespace axiswirl
