#include <cmath>
#include <numbers>

#include "doctest.h"
#include "axiswirl/blowup.hpp"
#include "axiswirl/error.hpp"
#include "axiswirl/initial_data.hpp"
#include "axiswirl/lagrangian.hpp"

using namespace axiswirl;
using std::numbers::pi;

namespace {

LagrangianState gaussian_state(std::size_t n, double eps, int sign = +1) {
  InitParams p;
  p.kind = InitKind::Gaussian;
  p.epsilon = eps;
  const RdState init = make_initial_data(p, PeriodicGrid(n), ModelKind::Euler1d);
  return LagrangianState::from_initial(init.u, init.v, sign);
}

double max_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

double state_diff(const LagrangianState& a, const LagrangianState& b) {
  return max_diff(a.j, b.j) + max_diff(a.u, b.u) + max_diff(a.v, b.v) + max_diff(a.disp, b.disp);
}

// Written out from the model equations, independent of lag_rhs.
struct Rates {
  ScalarField j, u, v, z;
};

Rates oracle_rates(const LagrangianState& s) {
  const PeriodicGrid& g = s.grid();
  const std::size_t n = g.size();
  double v2j = 0.0, u2j = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    v2j += s.v[a] * s.v[a] * s.j[a];
    u2j += s.u[a] * s.u[a] * s.j[a];
  }
  const double c = (1.0 + 2.0 * s.sign) * v2j / n - u2j / n;
  Rates r{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
  for (std::size_t a = 0; a < n; ++a) {
    r.j[a] = -2.0 * s.sign * s.j[a] * s.v[a];
    r.u[a] = -2.0 * s.u[a] * s.v[a];
    r.v[a] = s.u[a] * s.u[a] - s.v[a] * s.v[a] + c;
  }
  // psi(z(alpha)) has psi_alpha = -v J; fix its constant by int psi dz = int psi J dalpha = 0.
  ScalarField vj = product(s.v, s.j);
  vj += -vj.mean();
  ScalarField psi = invert_stream(vj);
  psi += -inner(psi, s.j) / s.j.mean();
  r.z = psi * (2.0 * s.sign);
  return r;
}

void project(ScalarField& v, const ScalarField& j) { v += -inner(v, j) / j.mean(); }

}  // namespace

TEST_CASE("zero state is a fixed point") {
  const PeriodicGrid g(32);
  const LagrangianState s = LagrangianState::from_initial(ScalarField(g), ScalarField(g));
  const LagrangianDerivative d = lag_rhs(s);
  CHECK(d.j.inf_norm() == 0.0);
  CHECK(d.u.inf_norm() == 0.0);
  CHECK(d.v.inf_norm() == 0.0);
  CHECK(d.z.inf_norm() == 0.0);
  const LagrangianState next = lag_step(s, 1e-3);
  CHECK(state_diff(next, s) == 0.0);
}

TEST_CASE("derivatives for unit swirl") {
  const PeriodicGrid g(64);
  const auto v = ScalarField::sample(g, [](double a) { return std::sin(2 * pi * a); });
  const LagrangianState s = LagrangianState::from_initial(ScalarField(g, 1.0), v);
  const LagrangianDerivative d = lag_rhs(s);
  const double v2 = inner(s.v, s.v);
  for (std::size_t a = 0; a < g.size(); a += 7) {
    CHECK(d.j[a] == doctest::Approx(-2 * s.v[a]));
    CHECK(d.u[a] == doctest::Approx(-2 * s.v[a]));
    CHECK(d.v[a] == doctest::Approx(1 - s.v[a] * s.v[a] + 3 * v2 - 1));
  }
}

TEST_CASE("int J is stationary when int v J = 0") {
  const LagrangianState s = gaussian_state(4096, 1e-4);
  CHECK(std::abs(inner(s.v, s.j)) < 1e-12);
  CHECK(std::abs(lag_rhs(s).j.mean()) < 1e-12);
}

TEST_CASE("lag_rhs matches the written-out equations") {
  for (int sign : {+1, -1}) {
    LagrangianState s = gaussian_state(1024, 1e-3, sign);
    s = lag_step(s, 1e-4);  // leave J = 1 so every term is exercised
    const LagrangianDerivative d = lag_rhs(s);
    const Rates r = oracle_rates(s);
    CHECK(max_diff(d.j, r.j) < 1e-12 * std::max(1.0, r.j.inf_norm()));
    CHECK(max_diff(d.u, r.u) < 1e-12 * std::max(1.0, r.u.inf_norm()));
    CHECK(max_diff(d.v, r.v) < 1e-12 * std::max(1.0, r.v.inf_norm()));
    CHECK(max_diff(d.z, r.z) < 1e-12 * std::max(1.0, r.z.inf_norm()));
  }
}

TEST_CASE("one step equals the hand-assembled Heun update") {
  const LagrangianState s = gaussian_state(4096, 1e-4);
  const double dt = 2e-5;
  const Rates k1 = oracle_rates(s);
  LagrangianState mid = s;
  mid.j = s.j + dt * k1.j;
  mid.u = s.u + dt * k1.u;
  mid.v = s.v + dt * k1.v;
  mid.disp = s.disp + dt * k1.z;
  project(mid.v, mid.j);
  const Rates k2 = oracle_rates(mid);
  ScalarField j = s.j + 0.5 * dt * (k1.j + k2.j);
  ScalarField u = s.u + 0.5 * dt * (k1.u + k2.u);
  ScalarField v = s.v + 0.5 * dt * (k1.v + k2.v);
  ScalarField z = s.disp + 0.5 * dt * (k1.z + k2.z);
  project(v, j);

  const LagrangianState got = lag_step(s, dt);
  const double scale = s.v.inf_norm();
  CHECK(max_diff(got.j, j) < 1e-12 * scale);
  CHECK(max_diff(got.u, u) < 1e-12 * scale);
  CHECK(max_diff(got.v, v) < 1e-12 * scale);
  CHECK(max_diff(got.disp, z) < 1e-12 * scale);
  CHECK(got.t == dt);
}

TEST_CASE("Heun step converges at second order") {
  const LagrangianState s0 = gaussian_state(1024, 1e-3);
  auto run = [&](int steps) {
    LagrangianState s = s0;
    for (int i = 0; i < steps; ++i) s = lag_step(s, 0.01 / steps);
    return s;
  };
  const LagrangianState a = run(250), b = run(500), c = run(1000);
  const double ratio = state_diff(a, b) / state_diff(b, c);
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("invariants at t = 0") {
  const LagrangianState s = gaussian_state(1024, 1e-3);
  IdentityLedger ledger(s);
  const LagrangianInvariants inv = lag_invariants(s, ledger);
  CHECK(inv.int_j == 1.0);
  CHECK(std::abs(inv.int_vj) < 1e-13);
  CHECK(inv.identity_residual == 0.0);
  CHECK(inv.log_j_residual == 0.0);
  CHECK(inv.z_alpha_residual == 0.0);
}

TEST_CASE("conservation over a short run") {
  StepController ctrl;
  LagrangianRunOptions o;
  o.t_end = 0.0188;
  const LagrangianRunResult r = run_lagrangian(gaussian_state(1024, 1e-3), ctrl, o);
  REQUIRE(r.status == RunStatus::Completed);
  for (const auto& rec : r.records) {
    CHECK(std::abs(rec.int_j - 1.0) <= 1e-8);
    CHECK(std::abs(rec.int_vj) <= 1e-8);
  }
  // Jacobian bounds exp(-2 C0 t) <= J <= exp(2 C0 t)
  const LagrangianState& s = r.final_state;
  const double c0 = amplification_constant(gaussian_state(1024, 1e-3).u, gaussian_state(1024, 1e-3).v);
  const double bound = std::exp(2 * c0 * s.t);
  CHECK(s.j.max() <= 1.01 * bound);
  CHECK(s.j.min() >= std::exp(-2 * c0 * s.t) / 1.01);
}

TEST_CASE("mapping to Euler at t = 0 is the identity") {
  const LagrangianState s = gaussian_state(256, 1e-2);
  const FieldPair f = lag_to_euler(s, s.grid());
  CHECK(max_diff(f.u, s.u) < 1e-12);
  CHECK(max_diff(f.v, s.v) < 1e-12);
}

TEST_CASE("constant fields map to constants") {
  const PeriodicGrid g(64);
  LagrangianState s = LagrangianState::from_initial(ScalarField(g, 2.5), ScalarField(g));
  for (std::size_t a = 0; a < g.size(); ++a) s.disp[a] = 0.01 * std::sin(2 * pi * g.node(a));
  const FieldPair f = lag_to_euler(s, PeriodicGrid(128));
  CHECK(max_diff(f.u, ScalarField(PeriodicGrid(128), 2.5)) < 1e-15);
}

TEST_CASE("crossing particles are rejected") {
  const PeriodicGrid g(16);
  LagrangianState s = LagrangianState::from_initial(ScalarField(g, 1.0), ScalarField(g));
  s.disp[4] = 0.2;
  CHECK_THROWS_AS(lag_to_euler(s, g), ParticleCrossing);
}

TEST_CASE("collapsed Jacobian ends the step") {
  const PeriodicGrid g(16);
  LagrangianState s = LagrangianState::from_initial(ScalarField(g, 1.0), ScalarField(g));
  s.v[0] = 1e6;
  s.v[1] = -1e6;
  CHECK_THROWS_AS(lag_step(s, 1e-3), BlowupSignal);
}

TEST_CASE("sign must be +1 or -1") {
  const PeriodicGrid g(16);
  CHECK_THROWS_AS(LagrangianState::from_initial(ScalarField(g), ScalarField(g), 0), BadParams);
}
