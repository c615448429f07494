#pragma once

#include <string>

#include "axiswirl/model1d.hpp"

namespace axiswirl {

enum class InitKind {
  ReactionDiffusion,  // u = eps (2 + sin 2 pi z),  v = -1/eps - sin 2 pi z
  Gaussian,           // u = 1,  v = 1 - exp(-(z - 1/2)^2 / eps) / sqrt(pi eps)
  Scaled,             // psi = (A/M^2) sin(2 pi M z),  u = (A/M) sin(2 pi M z)
  Zero,
};

const char* to_string(InitKind k) noexcept;
/// Accepts "rd", "gaussian", "scaled", "zero". Throws BadParams otherwise.
InitKind parse_init_kind(const std::string& name);

struct InitParams {
  InitKind kind = InitKind::Gaussian;
  /// Width parameter; 0 selects the kind's default (1e-3 for rd, 1e-4 for gaussian).
  double epsilon = 0.0;
  /// Scaled family amplitude A and frequency M.
  double amplitude = 1.0;
  int frequency = 1;

  double resolved_epsilon() const;
  void validate() const;
};

/// Builds (u0, v0) at t = 0. For an Euler1d target, v is projected to zero mean.
/// The scaled family takes v = -psi_z spectrally.
RdState make_initial_data(const InitParams& params, const PeriodicGrid& grid, ModelKind target);

/// sup sqrt(U_y^2 + W^2) of the unscaled profile pair, with U = Psi = sin(2 pi y)
/// and W = -Psi_yy. Equals 4 pi^2.
double scaled_family_c0();

}  // namespace axiswirl
