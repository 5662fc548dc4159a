#include <benchmark/benchmark.h>

#include "mprb/attractor.hpp"
#include "mprb/galerkin.hpp"

using namespace mprb;

namespace {

DomainSpec domain(int Nh, int Mv, int Nv) {
  DomainSpec d;
  d.Nh = Nh, d.Mv = Mv, d.Nv = Nv;
  return d;
}

SpacePtr space_for(const benchmark::State& st) {
  return Space::build(domain(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), static_cast<int>(st.range(2))));
}

State random_state(const Space& sp) {
  EnsembleSpec e;
  return ensemble_member(sp, e, 0);
}

const DimensionlessParams kParams = DimensionlessParams::make(2000, 10, 0.05, 1, 1, 1, 2, 2);

void BM_BuildSpace(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(space_for(st));
}

void BM_Synthesize(benchmark::State& st) {
  const auto sp = space_for(st);
  const State s = random_state(*sp);
  for (auto _ : st) benchmark::DoNotOptimize(synthesize(*sp, s.u));
}

void BM_Rhs(benchmark::State& st) {
  const auto sp = space_for(st);
  const GalerkinSystem sys(sp, kParams, ModelKind::micropolar);
  const State s = random_state(*sp);
  for (auto _ : st) benchmark::DoNotOptimize(sys.rhs(s));
}

void BM_StepCNAB2(benchmark::State& st) {
  const auto sp = space_for(st);
  const GalerkinSystem sys(sp, kParams, ModelKind::micropolar);
  Stepper stepper(sys, 1e-3, Scheme::imex_cnab2);
  State s = random_state(*sp);
  for (auto _ : st) s = stepper.step(s);
}

void BM_Diagnostics(benchmark::State& st) {
  const auto sp = space_for(st);
  const GalerkinSystem sys(sp, kParams, ModelKind::micropolar);
  const State s = random_state(*sp);
  for (auto _ : st) benchmark::DoNotOptimize(make_record(sys, s));
}

void BM_Semidist(benchmark::State& st) {
  const auto sp = Space::build(domain(2, 16, 2));
  AttractorSample a, b;
  a.params = b.params = kParams;
  EnsembleSpec e;
  e.members = static_cast<int>(st.range(0));
  a.states = make_ensemble(*sp, e).members;
  e.seed = 2;
  b.states = make_ensemble(*sp, e).members;
  for (auto _ : st) benchmark::DoNotOptimize(hausdorff_semidist(*sp, a, b));
}

}  // namespace

BENCHMARK(BM_BuildSpace)->Args({2, 16, 2})->Args({4, 32, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Synthesize)->Args({2, 16, 2})->Args({4, 32, 8})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Rhs)->Args({2, 16, 2})->Args({4, 32, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StepCNAB2)->Args({2, 16, 2})->Args({4, 32, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Diagnostics)->Args({4, 32, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Semidist)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
