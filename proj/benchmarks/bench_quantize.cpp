#include <benchmark/benchmark.h>

#include <random>

#include "qproc/quantization.hpp"
#include "qproc/walk.hpp"

namespace {

using namespace qproc;

DiscreteMeasureSpace uniform(int points) {
  return DiscreteMeasureSpace(
      std::vector<double>(static_cast<std::size_t>(points), 1.0 / points));
}

RandomVariable noise(int points) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> raw(-2.0, 3.0);
  Eigen::VectorXd v(points);
  for (int i = 0; i < points; ++i) v(i) = raw(rng);
  return RandomVariable(std::move(v));
}

void MinKernelBuild(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  const auto space = uniform(points);
  const auto f = noise(points);
  for (auto _ : state) {
    const QuantizedOperator op = quantize(space, f);
    benchmark::DoNotOptimize(op.matrix.data());
  }
  state.SetComplexityN(points);
}
BENCHMARK(MinKernelBuild)->RangeMultiplier(2)->Range(16, 512)->Complexity();

void OperatorNormEigen(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  const auto op = quantize(uniform(points), noise(points));
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.operatorNorm());
  }
}
BENCHMARK(OperatorNormEigen)->RangeMultiplier(2)->Range(16, 256);

void TailSumVsTrace(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  const auto space = uniform(points);
  const auto f = noise(points);
  Eigen::VectorXcd pure = Eigen::VectorXcd::Zero(points);
  pure(0) = 1.0;
  const StateOperator rho = StateOperator::pure(pure);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tailSumIntegral(rho, space, f));
  }
}
BENCHMARK(TailSumVsTrace)->Arg(32)->Arg(128);

void WalkFastPathTable(benchmark::State& state) {
  const int tMax = static_cast<int>(state.range(0));
  for (auto _ : state) {
    for (int t = 0; t <= tMax; ++t) {
      benchmark::DoNotOptimize(walkSiteOneMeasure(t).num());
    }
  }
  state.SetItemsProcessed(state.iterations() * (tMax + 1));
}
BENCHMARK(WalkFastPathTable)->Arg(16)->Arg(48);

}  // namespace

BENCHMARK_MAIN();
