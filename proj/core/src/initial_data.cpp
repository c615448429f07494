#include "axiswirl/initial_data.hpp"

#include <cmath>
#include <numbers>

#include "axiswirl/error.hpp"

namespace axiswirl {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* to_string(InitKind k) noexcept {
  switch (k) {
    case InitKind::ReactionDiffusion: return "rd";
    case InitKind::Gaussian: return "gaussian";
    case InitKind::Scaled: return "scaled";
    case InitKind::Zero: return "zero";
  }
  return "zero";
}

InitKind parse_init_kind(const std::string& name) {
  if (name == "rd") return InitKind::ReactionDiffusion;
  if (name == "gaussian") return InitKind::Gaussian;
  if (name == "scaled") return InitKind::Scaled;
  if (name == "zero") return InitKind::Zero;
  throw BadParams("unknown initial data kind '" + name + "'");
}

double InitParams::resolved_epsilon() const {
  if (epsilon != 0.0) return epsilon;
  return kind == InitKind::ReactionDiffusion ? 1e-3 : 1e-4;
}

void InitParams::validate() const {
  const double eps = resolved_epsilon();
  if (!std::isfinite(eps) || eps <= 0.0) throw BadParams("epsilon must be positive");
  if (!std::isfinite(amplitude) || amplitude <= 0.0) throw BadParams("amplitude must be positive");
  if (frequency < 1) throw BadParams("frequency must be a positive integer");
}

RdState make_initial_data(const InitParams& params, const PeriodicGrid& grid, ModelKind target) {
  params.validate();
  const double eps = params.resolved_epsilon();
  RdState s{ScalarField(grid), ScalarField(grid), 0.0};

  switch (params.kind) {
    case InitKind::ReactionDiffusion:
      s.u = ScalarField::sample(grid, [eps](double z) { return eps * (2.0 + std::sin(2 * kPi * z)); });
      s.v = ScalarField::sample(grid, [eps](double z) { return -1.0 / eps - std::sin(2 * kPi * z); });
      break;
    case InitKind::Gaussian: {
      const double delta = std::sqrt(eps * kPi);
      s.u = ScalarField(grid, 1.0);
      s.v = ScalarField::sample(grid, [eps, delta](double z) {
        const double x = z - 0.5;
        return 1.0 - std::exp(-x * x / eps) / delta;
      });
      break;
    }
    case InitKind::Scaled: {
      const double a = params.amplitude;
      const double m = params.frequency;
      const ScalarField psi =
          ScalarField::sample(grid, [a, m](double z) { return a / (m * m) * std::sin(2 * kPi * m * z); });
      s.u = ScalarField::sample(grid, [a, m](double z) { return a / m * std::sin(2 * kPi * m * z); });
      s.v = -1.0 * derivative(psi);
      break;
    }
    case InitKind::Zero:
      break;
  }

  if (target == ModelKind::Euler1d) s.v += -s.v.mean();
  return s;
}

double scaled_family_c0() { return 4.0 * kPi * kPi; }

}  // namespace axiswirl
