#include <benchmark/benchmark.h>

#include "purity/estimators.hpp"
#include "purity/samplers.hpp"
#include "purity/states.hpp"
#include "purity/symcore.hpp"
#include "purity/weingarten.hpp"

namespace {

using namespace purity;

void BM_CharacterTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sym::CharacterTable::build(n));
}
BENCHMARK(BM_CharacterTable)->Arg(6)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_WeingartenTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wg::WeingartenTable::build(n, 16));
}
BENCHMARK(BM_WeingartenTable)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_MomentPolynomial(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const BipartitionDims dims(2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(wg::moment_polynomial(k, dims));
}
BENCHMARK(BM_MomentPolynomial)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_HaarUnitary(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ens::RandomStream stream(1);
  for (auto _ : state) benchmark::DoNotOptimize(ens::haar_unitary(n, stream));
}
BENCHMARK(BM_HaarUnitary)->Arg(4)->Arg(16)->Arg(64);

void BM_LocalPurity(benchmark::State& state) {
  const int na = static_cast<int>(state.range(0));
  const BipartitionDims dims(na, na);
  ens::RandomStream stream(2);
  const auto u = ens::haar_unitary(dims.n(), stream);
  const auto spectrum = ens::sample_spectrum_induced(dims.n(), stream);
  for (auto _ : state) benchmark::DoNotOptimize(ens::local_purity(spectrum.values(), u, dims));
}
BENCHMARK(BM_LocalPurity)->Arg(2)->Arg(4)->Arg(8);

void BM_ShellStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ens::RandomStream stream(3);
  ens::ShellChain chain(n, 2.0 / n, 1e-3, 0.3, stream);
  for (int i = 0; i < 1000; ++i) {
    chain.step();
    chain.adapt();
  }
  chain.reset_counters();
  for (auto _ : state) chain.step();
  state.counters["acceptance"] = chain.acceptance();
}
BENCHMARK(BM_ShellStep)->Arg(4)->Arg(16)->Arg(64);

void BM_CanonicalStep(benchmark::State& state) {
  ens::EnsembleConfig config;
  const int na = static_cast<int>(state.range(0));
  config.dims = BipartitionDims(na, na);
  config.x = 2.0 / config.dims.n();
  config.beta = 1.0;
  ens::RandomStream stream(4);
  ens::CanonicalChain chain(config, stream);
  for (auto _ : state) chain.step();
}
BENCHMARK(BM_CanonicalStep)->Arg(2)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
