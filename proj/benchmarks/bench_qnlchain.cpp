#include "qnlchain/qnlchain.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace qnlchain;

void BM_HessianAssembly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ModelSpec model = ModelSpec::quasi_nonlocal(PairPotential::lennard_jones(), 0.5);
  const ChainGeometry y = make_circular(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(hessian_full(model, y));
  state.SetComplexityN(n);
}
BENCHMARK(BM_HessianAssembly)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_SecondVariation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChainGeometry y = make_circular(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(second_variation(ModelSpec::atomistic(), y, false));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SecondVariation)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_EigSmallest(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChainGeometry y = make_linear(n, 0.95);
  const SecondVariation sv = second_variation(ModelSpec::atomistic(), y, false);
  const DenseSymmetric g(sv.basis.compress(derivative_gram(n)));
  for (auto _ : state) benchmark::DoNotOptimize(eig_smallest(sv.reduced, g));
  state.SetComplexityN(n);
}
BENCHMARK(BM_EigSmallest)->RangeMultiplier(2)->Range(32, 256)->Complexity()->Unit(benchmark::kMillisecond);

void BM_NegativeNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const NegativeNorm norm(n);
  const Field v = LoadCase::smooth_trig(1, 2).realize(n, false);
  for (auto _ : state) benchmark::DoNotOptimize(norm(v));
  state.SetComplexityN(n);
}
BENCHMARK(BM_NegativeNorm)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_NegativeNormSetup(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(NegativeNorm(n));
  state.SetComplexityN(n);
}
BENCHMARK(BM_NegativeNormSetup)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_StabilityReport(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stability_report(ModelSpec::quasi_nonlocal(), ChainKind::Circular, n, 1.0, false));
  }
}
BENCHMARK(BM_StabilityReport)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
