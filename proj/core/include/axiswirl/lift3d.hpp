#pragma once

#include <functional>
#include <string>
#include <vector>

#include "axiswirl/model1d.hpp"

namespace axiswirl {

/// One point (r, z) of the 3D axisymmetric field built from a 1D solution:
/// u = r u1, omega = r omega1, psi = r psi1, v^r = -psi_z, v^z = (1/r)(r psi)_r.
struct LiftedSample {
  double r = 0.0;
  double z = 0.0;
  double u = 0.0;
  double omega = 0.0;
  double psi = 0.0;
  double vr = 0.0;
  double vz = 0.0;
};

inline const std::vector<double>& default_radii() {
  static const std::vector<double> r{0.01, 0.1, 1.0, 10.0};
  return r;
}

/// Samples laid out radius-major: sample(i, j) = out[i * N + j]. Throws
/// InconsistentInput unless omega1 = -psi1_zz within 1e-8 max(1, |omega1|_inf).
std::vector<LiftedSample> lift(const ScalarField& u1, const ScalarField& omega1, const ScalarField& psi1,
                               const std::vector<double>& r_samples);

/// 1D fields and their time derivatives, fed to the 3D equations.
struct LiftInputs {
  ScalarField u1;
  ScalarField omega1;
  ScalarField psi1;
  ScalarField u1_t;
  ScalarField omega1_t;
};

/// Builds the inputs from a state, with time derivatives from the model
/// right-hand side (no dealiasing, diffusion included).
LiftInputs lift_inputs(const EulerState& s, const ModelConfig& cfg);

/// Same, with time derivatives from two snapshots dt_probe apart.
LiftInputs lift_inputs(const EulerState& s, const EulerState& later);

struct RadiusResidual {
  double r = 0.0;
  /// sup over z of |lhs - rhs| for the swirl, vorticity and stream equations.
  double raw_u = 0.0;
  double raw_omega = 0.0;
  double raw_psi = 0.0;
  /// sup over z of the largest single term in each equation.
  double scale_u = 0.0;
  double scale_omega = 0.0;
  double scale_psi = 0.0;
  /// sup |(r v^r)_r + (r v^z)_z| over the larger of the two terms.
  double incompressibility = 0.0;
};

struct AxisymResidual {
  /// max over radii of raw / scale.
  double u = 0.0;
  double omega = 0.0;
  double psi = 0.0;
  double incompressibility = 0.0;
  std::vector<RadiusResidual> per_radius;

  double worst() const noexcept;
};

/// Evaluates every term of the 3D swirl, vorticity and stream-function
/// equations at the lifted samples. r-derivatives are exact for the lift;
/// z-derivatives are spectral.
AxisymResidual residual_axisym(const LiftInputs& in, double nu, const std::vector<double>& r_samples);

/// Residual with the time derivative taken from the model right-hand side.
AxisymResidual residual_axisym(const EulerState& s, const ModelConfig& cfg,
                               const std::vector<double>& r_samples = default_radii());

/// Maps (r, f1(z)) to the lifted value. The verified lift is r * f1.
using LiftRule = std::function<double(double r, double f1)>;

struct CompatibilityReport {
  bool vanishes_on_axis = true;
  bool odd_in_r = true;
  double axis_max = 0.0;
  double odd_defect = 0.0;
  std::string detail;

  bool pass() const noexcept { return vanishes_on_axis && odd_in_r; }
};

/// Checks u = omega = psi = 0 at r = 0 and f(-r) = -f(r) at every sample.
CompatibilityReport compatibility_check(const EulerState& s,
                                        const std::vector<double>& r_samples = default_radii(),
                                        const LiftRule& rule = {});

}  // namespace axiswirl
