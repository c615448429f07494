// Hot paths of a run: spectral derivative, one step of each model.

#include <benchmark/benchmark.h>

#include "axiswirl/initial_data.hpp"
#include "axiswirl/lagrangian.hpp"
#include "axiswirl/model1d.hpp"
#include "axiswirl/ode.hpp"
#include "axiswirl/spectral.hpp"

using namespace axiswirl;

namespace {

RdState gaussian(std::size_t n) {
  InitParams p;
  p.kind = InitKind::Gaussian;
  return make_initial_data(p, PeriodicGrid(n), ModelKind::Euler1d);
}

void BM_Derivative(benchmark::State& state) {
  const RdState s = gaussian(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(derivative(s.u));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Derivative)->RangeMultiplier(4)->Range(256, 32768)->Complexity(benchmark::oNLogN);

void BM_ImexStep(benchmark::State& state) {
  const RdState init = gaussian(static_cast<std::size_t>(state.range(0)));
  const EulerState s(init.u, init.v);
  const ModelConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(step_imex(s, cfg, 1e-6));
}
BENCHMARK(BM_ImexStep)->RangeMultiplier(4)->Range(1024, 16384);

void BM_Rk2Step(benchmark::State& state) {
  const RdState init = gaussian(static_cast<std::size_t>(state.range(0)));
  const EulerState s(init.u, init.v);
  ModelConfig cfg;
  cfg.nu = 0.0;
  cfg.scheme = Scheme::Rk2Inviscid;
  for (auto _ : state) benchmark::DoNotOptimize(step_rk2(s, cfg, 1e-6));
}
BENCHMARK(BM_Rk2Step)->RangeMultiplier(4)->Range(1024, 16384);

void BM_LagrangianStep(benchmark::State& state) {
  const RdState init = gaussian(static_cast<std::size_t>(state.range(0)));
  const LagrangianState s = LagrangianState::from_initial(init.u, init.v);
  for (auto _ : state) benchmark::DoNotOptimize(lag_step(s, 1e-6));
}
BENCHMARK(BM_LagrangianStep)->RangeMultiplier(4)->Range(1024, 16384);

void BM_OdeAdaptive(benchmark::State& state) {
  IntegrateOptions o;
  o.adaptive = true;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_ode({0.5, -3.0, 0.0}, {2.0}, 100.0, 1.0, o));
}
BENCHMARK(BM_OdeAdaptive);

}  // namespace

BENCHMARK_MAIN();
