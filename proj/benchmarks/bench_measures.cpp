#include <benchmark/benchmark.h>

#include <random>

#include "qproc/decoherence.hpp"
#include "qproc/process.hpp"
#include "qproc/walk.hpp"

namespace {

using namespace qproc;

CylinderEvent halfSpaceEvent(const PathDomain& domain) {
  std::mt19937_64 rng(99);
  std::bernoulli_distribution keep(0.5);
  std::vector<std::uint64_t> members;
  for (std::uint64_t ord = 0; ord < domain.size(); ++ord) {
    if (keep(rng)) members.push_back(domain.indexAt(ord));
  }
  return CylinderEvent::fromIndices(domain, std::move(members));
}

void QMeasureRandomEvent(benchmark::State& state) {
  const auto st = buildDecoherence(FiniteUnitarySystem::stationary(twoSiteHopUnitary()),
                                   InitialState::basisState(2, 0),
                                   static_cast<int>(state.range(0)), 0);
  const auto event = halfSpaceEvent(st.domain());
  for (auto _ : state) {
    benchmark::DoNotOptimize(qMeasure(st, event));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(event.size()));
}
BENCHMARK(QMeasureRandomEvent)->DenseRange(10, 16, 2);

void SpectrumBuild(benchmark::State& state) {
  const auto st = buildDecoherence(FiniteUnitarySystem::stationary(randomUnitary(3, 17)),
                                   InitialState(randomState(3, 18)),
                                   static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const SpectralDecomposition spec = spectrum(st);
    benchmark::DoNotOptimize(spec.eigenvalueSum());
  }
}
BENCHMARK(SpectrumBuild)->DenseRange(4, 8, 2);

// rank sweep of one local expectation through the evolved class vector
void LocalExpectationSweep(benchmark::State& state) {
  const QProcess proc = twoSiteWalkProcess();
  const auto family = complementOfCountable(2, {NPath({0, 1}), NPath({0, 0})});
  const int tMax = static_cast<int>(state.range(0));
  for (auto _ : state) {
    double last = 0.0;
    for (int t = 1; t <= tMax; ++t) last = localExpectation(proc, *family, t);
    benchmark::DoNotOptimize(last);
  }
  state.SetItemsProcessed(state.iterations() * tMax);
}
BENCHMARK(LocalExpectationSweep)->Arg(32)->Arg(128)->Arg(512);

void ConsistencySampled(benchmark::State& state) {
  const QProcess proc(FiniteUnitarySystem::stationary(randomUnitary(3, 23)),
                      InitialState(randomState(3, 24)));
  for (auto _ : state) {
    const auto rep = verifyConsistency(proc, 4, 2000);
    benchmark::DoNotOptimize(rep.maxResidual);
  }
}
BENCHMARK(ConsistencySampled);

}  // namespace
