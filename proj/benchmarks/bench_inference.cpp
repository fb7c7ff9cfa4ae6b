#include <benchmark/benchmark.h>

#include "padic_dbn/approximation.hpp"
#include "padic_dbn/oracles/reference.hpp"

using namespace padic_dbn;

namespace {

DbnModel model_at(unsigned l) {
  oracles::Rng rng(1);
  return oracles::random_model(rng, TreeGroup(2, l), ModelKind::conv);
}

}  // namespace

// Joint enumeration over 2^(2n) states.
static void BM_MarginalEnumeration(benchmark::State& state) {
  const DbnModel m = model_at(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(marginal(m));
  state.SetLabel(fmt::format("n={}", m.units()));
}
BENCHMARK(BM_MarginalEnumeration)->DenseRange(1, 3);

// Product formula over 2^n visible states.
static void BM_MarginalFactorized(benchmark::State& state) {
  const DbnModel m = model_at(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(visible_marginal_factorized(m));
  state.SetLabel(fmt::format("n={}", m.units()));
}
BENCHMARK(BM_MarginalFactorized)->DenseRange(1, 4);

static void BM_ConstructiveStep(benchmark::State& state) {
  oracles::Rng rng(2);
  const DbnModel m = model_at(static_cast<unsigned>(state.range(0)));
  const Distribution q = oracles::random_distribution(rng, static_cast<unsigned>(m.units()));
  for (auto _ : state) benchmark::DoNotOptimize(theorem2_step(m, q));
}
BENCHMARK(BM_ConstructiveStep)->DenseRange(1, 3);

static void BM_RecursiveConstruction(benchmark::State& state) {
  oracles::Rng rng(3);
  const auto width = static_cast<unsigned>(state.range(0));
  const Distribution q = oracles::random_sparse_distribution(rng, width, 3);
  for (auto _ : state) benchmark::DoNotOptimize(theorem3_construct(q, 2, 14.0));
}
BENCHMARK(BM_RecursiveConstruction)->Arg(4)->Arg(8);
BENCHMARK_MAIN();
