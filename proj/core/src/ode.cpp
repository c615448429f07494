#include "axiswirl/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "axiswirl/error.hpp"

namespace axiswirl {

namespace {

struct Pair {
  double u;
  double v;
};

Pair rk4_step(const Pair& y, double h, double d) {
  auto f = [d](const Pair& s) { return Pair{-d * s.v * s.u, s.u * s.u - s.v * s.v}; };
  const Pair k1 = f(y);
  const Pair k2 = f({y.u + 0.5 * h * k1.u, y.v + 0.5 * h * k1.v});
  const Pair k3 = f({y.u + 0.5 * h * k2.u, y.v + 0.5 * h * k2.v});
  const Pair k4 = f({y.u + h * k3.u, y.v + h * k3.v});
  return {y.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
          y.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

bool exceeded(const Pair& y, double threshold) {
  const double m = std::abs(y.u) + std::abs(y.v);
  return !std::isfinite(m) || m > threshold;
}

// Advances y from t0 to t1 with step-doubling control. Returns false on
// blowup, leaving y and t at the last accepted finite state.
bool adaptive_advance(Pair& y, double& t, double t1, double d, double rtol, double threshold,
                      double& h) {
  constexpr double kSafety = 0.9;
  while (t < t1) {
    h = std::min(h, t1 - t);
    const double h_floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < h_floor) return false;

    const Pair full = rk4_step(y, h, d);
    const Pair half = rk4_step(rk4_step(y, 0.5 * h, d), 0.5 * h, d);
    if (exceeded(full, threshold) || exceeded(half, threshold)) {
      // Either the step is far too long or the solution is leaving every
      // finite bound; shrinking h tells the two apart.
      h *= 0.25;
      continue;
    }
    const double scale = std::max({std::abs(y.u), std::abs(y.v), std::abs(half.u), std::abs(half.v)});
    const double err = std::max(std::abs(half.u - full.u), std::abs(half.v - full.v)) / 15.0;
    const double tol = rtol * scale + std::numeric_limits<double>::min();
    if (err <= tol) {
      y = {half.u + (half.u - full.u) / 15.0, half.v + (half.v - full.v) / 15.0};
      t = (h == t1 - t) ? t1 : t + h;
      if (exceeded(y, threshold)) return false;
      const double grow = err > 0.0 ? kSafety * std::pow(tol / err, 0.2) : 4.0;
      h *= std::clamp(grow, 0.2, 4.0);
    } else {
      h *= std::clamp(kSafety * std::pow(tol / err, 0.2), 0.1, 0.9);
    }
  }
  return true;
}

}  // namespace

void OdeParams::validate() const {
  if (!std::isfinite(d) || d < 0.0) throw BadParams("ODE coefficient d must be finite and >= 0");
}

OdeState ode_exact(double u0, double v0, double t) {
  if (u0 == 0.0 && v0 < 0.0 && t >= -1.0 / v0) {
    throw BlowupAtPole("solution with u0 = 0, v0 < 0 blows up at t = " + std::to_string(-1.0 / v0));
  }
  const double a = 1.0 + v0 * t;
  const double b = u0 * t;
  const double denom = a * a + b * b;
  return {(u0 * a - u0 * v0 * t) / denom, (v0 * a + u0 * u0 * t) / denom, t};
}

OdeDerivative ode_rhs(const OdeState& s, const OdeParams& p) {
  return {-p.d * s.v * s.u, s.u * s.u - s.v * s.v};
}

PolarDerivative polar_rhs(const PolarState& s, const OdeParams& p) {
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  const double dm1 = p.d - 1.0;
  return {-s.r * s.r * c * (c * c + dm1 * sn * sn), -s.r * sn * (dm1 * c * c + sn * sn)};
}

PolarState to_polar(const OdeState& s) { return {std::hypot(s.u, s.v), std::atan2(s.u, s.v)}; }

OdeState from_polar(const PolarState& s, double t) {
  return {s.r * std::sin(s.theta), s.r * std::cos(s.theta), t};
}

double r_envelope_bound(double r0, double theta0, double t) {
  const double c = std::cos(theta0);
  return r0 / (1.0 + r0 * c * c * c * t);
}

OdeTrajectory integrate_ode(const OdeState& s0, const OdeParams& p, double t_end, double dt,
                            const IntegrateOptions& opts) {
  p.validate();
  if (!(dt > 0.0)) throw BadParams("dt must be positive");
  if (!(t_end >= s0.t)) throw BadParams("t_end precedes the initial time");

  OdeTrajectory traj;
  Pair y{s0.u, s0.v};
  double t = s0.t;
  traj.samples.push_back({y.u, y.v, t});
  if (exceeded(y, opts.blowup_threshold)) {
    traj.blowup_time = t;
    return traj;
  }

  double h = dt;
  for (std::size_t k = 1;; ++k) {
    double target = s0.t + static_cast<double>(k) * dt;
    if (target > t_end) target = t_end;
    if (target <= t) break;

    if (opts.adaptive) {
      if (!adaptive_advance(y, t, target, p.d, opts.rtol, opts.blowup_threshold, h)) {
        traj.samples.push_back({y.u, y.v, t});
        traj.blowup_time = t;
        return traj;
      }
    } else {
      const Pair next = rk4_step(y, target - t, p.d);
      if (exceeded(next, opts.blowup_threshold)) {
        traj.blowup_time = t;
        return traj;
      }
      y = next;
      t = target;
    }
    traj.samples.push_back({y.u, y.v, t});
    if (t >= t_end) break;
  }
  return traj;
}

const char* to_string(TrajectoryClass c) noexcept {
  switch (c) {
    case TrajectoryClass::Decay: return "Decay";
    case TrajectoryClass::Blowup: return "Blowup";
    case TrajectoryClass::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

Classification classify_trajectory(const OdeState& s0, const OdeParams& p, double t_end,
                                   const ClassifyOptions& opts) {
  if (!(t_end > s0.t)) throw BadParams("classification needs t_end > t0");
  IntegrateOptions io;
  io.adaptive = true;
  io.rtol = opts.rtol;
  const double dt = (t_end - s0.t) / static_cast<double>(std::max<std::size_t>(opts.samples, 2));
  const OdeTrajectory traj = integrate_ode(s0, p, t_end, dt, io);

  Classification out;
  const OdeState& last = traj.samples.back();
  out.final_u = last.u;
  out.final_v = last.v;
  out.final_r = std::hypot(last.u, last.v);
  for (const auto& s : traj.samples) {
    out.peak_r = std::max(out.peak_r, std::hypot(s.u, s.v));
    out.peak_u = std::max(out.peak_u, std::abs(s.u));
    out.peak_v = std::max(out.peak_v, std::abs(s.v));
  }

  if (traj.blew_up()) {
    out.kind = TrajectoryClass::Blowup;
    out.t_star = traj.blowup_time;
    return out;
  }
  const double r0 = std::hypot(s0.u, s0.v);
  if (out.final_r <= 1e-6 * r0) {
    out.kind = TrajectoryClass::Decay;
    return out;
  }
  const OdeState& mid = traj.samples[traj.samples.size() / 2];
  const double r_mid = std::hypot(mid.u, mid.v);
  if (last.v > 0.0 && out.final_r < r0 && out.final_r < r_mid) out.kind = TrajectoryClass::Decay;
  return out;
}

}  // namespace axiswirl
