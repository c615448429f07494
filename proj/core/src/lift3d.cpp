#include "axiswirl/lift3d.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "axiswirl/error.hpp"

namespace axiswirl {

namespace {

double max_abs(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

void require_radii(const std::vector<double>& r_samples) {
  for (double r : r_samples) {
    if (!(r > 0.0) || !std::isfinite(r)) throw BadParams("sample radii must be positive");
  }
}

}  // namespace

std::vector<LiftedSample> lift(const ScalarField& u1, const ScalarField& omega1, const ScalarField& psi1,
                               const std::vector<double>& r_samples) {
  require_radii(r_samples);
  const ScalarField psi_zz = second_derivative(psi1);
  double defect = 0.0;
  for (std::size_t j = 0; j < psi1.size(); ++j) defect = std::max(defect, std::abs(omega1[j] + psi_zz[j]));
  if (defect > 1e-8 * std::max(1.0, omega1.inf_norm())) {
    throw InconsistentInput("omega1 differs from -psi1_zz by " + std::to_string(defect));
  }

  const ScalarField psi_z = derivative(psi1);
  const std::size_t n = u1.size();
  std::vector<LiftedSample> out;
  out.reserve(r_samples.size() * n);
  for (double r : r_samples) {
    for (std::size_t j = 0; j < n; ++j) {
      out.push_back({r, u1.grid().node(j), r * u1[j], r * omega1[j], r * psi1[j], -r * psi_z[j],
                     2.0 * psi1[j]});
    }
  }
  return out;
}

LiftInputs lift_inputs(const EulerState& s, const ModelConfig& cfg) {
  ModelConfig exact = cfg;
  exact.dealias_on = false;
  const FieldPair rhs = euler1d_rhs(s, exact);
  const ScalarField u_t = rhs.u + cfg.nu * second_derivative(s.u());
  const ScalarField v_t = rhs.v + cfg.nu * second_derivative(s.v());
  return {s.u(), derivative(s.v()), s.psi(), u_t, derivative(v_t)};
}

LiftInputs lift_inputs(const EulerState& s, const EulerState& later) {
  const double dt = later.t() - s.t();
  if (!(dt > 0.0)) throw BadParams("snapshots must be ordered in time");
  const ScalarField u_t = (1.0 / dt) * (later.u() - s.u());
  const ScalarField w_t = (1.0 / dt) * (derivative(later.v()) - derivative(s.v()));
  return {s.u(), derivative(s.v()), s.psi(), u_t, w_t};
}

double AxisymResidual::worst() const noexcept { return std::max({u, omega, psi, incompressibility}); }

AxisymResidual residual_axisym(const LiftInputs& in, double nu, const std::vector<double>& r_samples) {
  require_radii(r_samples);
  const ScalarField u1z = derivative(in.u1);
  const ScalarField u1zz = second_derivative(in.u1);
  const ScalarField w1z = derivative(in.omega1);
  const ScalarField w1zz = second_derivative(in.omega1);
  const ScalarField p1z = derivative(in.psi1);
  const ScalarField p1zz = second_derivative(in.psi1);

  AxisymResidual out;
  for (double r : r_samples) {
    RadiusResidual rr;
    rr.r = r;
    for (std::size_t j = 0; j < in.u1.size(); ++j) {
      // Lifted fields and their derivatives. Every field is r * f(z), so
      // f_r = f1, f_rr = 0, and z-derivatives carry the factor r.
      const double u = r * in.u1[j], u_r = in.u1[j], u_rr = 0.0;
      const double u_z = r * u1z[j], u_zz = r * u1zz[j], u_t = r * in.u1_t[j];
      const double w = r * in.omega1[j], w_r = in.omega1[j], w_rr = 0.0;
      const double w_z = r * w1z[j], w_zz = r * w1zz[j], w_t = r * in.omega1_t[j];
      const double p = r * in.psi1[j], p_r = in.psi1[j], p_rr = 0.0;
      const double p_z = r * p1z[j], p_zz = r * p1zz[j];

      const double vr = -p_z;
      const double vz = (p + r * p_r) / r;  // (1/r)(r psi)_r
      const double u2_z = 2.0 * u * u_z;

      // Swirl equation.
      const double lap_u = u_rr + u_r / r + u_zz - u / (r * r);
      const double adv_u_r = vr * u_r, adv_u_z = vz * u_z, diff_u = nu * lap_u, src_u = -vr * u / r;
      rr.raw_u = std::max(rr.raw_u, std::abs(u_t + adv_u_r + adv_u_z - diff_u - src_u));
      rr.scale_u = std::max(rr.scale_u, max_abs({u_t, adv_u_r, adv_u_z, diff_u, src_u}));

      // Vorticity equation.
      const double lap_w = w_rr + w_r / r + w_zz - w / (r * r);
      const double adv_w_r = vr * w_r, adv_w_z = vz * w_z, diff_w = nu * lap_w;
      const double stretch = u2_z / r, src_w = vr * w / r;
      rr.raw_omega = std::max(rr.raw_omega,
                              std::abs(w_t + adv_w_r + adv_w_z - diff_w - stretch - src_w));
      rr.scale_omega =
          std::max(rr.scale_omega, max_abs({w_t, adv_w_r, adv_w_z, diff_w, stretch, src_w}));

      // Stream-function equation, term by term.
      rr.raw_psi = std::max(rr.raw_psi, std::abs(-(p_rr + p_r / r + p_zz - p / (r * r)) - w));
      rr.scale_psi = std::max(rr.scale_psi, max_abs({p_rr, p_r / r, p_zz, p / (r * r), w}));

      // (r v^r)_r + (r v^z)_z with r v^r = -r^2 psi1_z and r v^z = 2 r psi1.
      const double div_r = -2.0 * r * p1z[j];
      const double div_z = 2.0 * r * p1z[j];
      const double div_scale = max_abs({div_r, div_z});
      if (div_scale > 0.0) {
        rr.incompressibility = std::max(rr.incompressibility, std::abs(div_r + div_z) / div_scale);
      }
    }
    auto ratio = [](double raw, double scale) { return scale > 0.0 ? raw / scale : raw; };
    out.u = std::max(out.u, ratio(rr.raw_u, rr.scale_u));
    out.omega = std::max(out.omega, ratio(rr.raw_omega, rr.scale_omega));
    out.psi = std::max(out.psi, ratio(rr.raw_psi, rr.scale_psi));
    out.incompressibility = std::max(out.incompressibility, rr.incompressibility);
    out.per_radius.push_back(rr);
  }
  return out;
}

AxisymResidual residual_axisym(const EulerState& s, const ModelConfig& cfg,
                               const std::vector<double>& r_samples) {
  return residual_axisym(lift_inputs(s, cfg), cfg.nu, r_samples);
}

CompatibilityReport compatibility_check(const EulerState& s, const std::vector<double>& r_samples,
                                        const LiftRule& rule) {
  require_radii(r_samples);
  const LiftRule f = rule ? rule : LiftRule([](double r, double f1) { return r * f1; });
  const ScalarField w1 = derivative(s.v());

  CompatibilityReport rep;
  for (std::size_t j = 0; j < s.u().size(); ++j) {
    for (const double f1 : {s.u()[j], w1[j], s.psi()[j]}) {
      rep.axis_max = std::max(rep.axis_max, std::abs(f(0.0, f1)));
      for (double r : r_samples) rep.odd_defect = std::max(rep.odd_defect, std::abs(f(-r, f1) + f(r, f1)));
    }
  }
  rep.vanishes_on_axis = rep.axis_max == 0.0;
  rep.odd_in_r = rep.odd_defect == 0.0;
  rep.detail = "max |f(0, z)| = " + std::to_string(rep.axis_max) +
               ", max |f(-r, z) + f(r, z)| = " + std::to_string(rep.odd_defect);
  return rep;
}

}  // namespace axiswirl
