#include <benchmark/benchmark.h>

#include "qproc/decoherence.hpp"
#include "qproc/unitary.hpp"
#include "qproc/walk.hpp"

namespace {

using namespace qproc;

void AmplitudeVectorTwoSite(benchmark::State& state) {
  const auto sys = FiniteUnitarySystem::stationary(twoSiteHopUnitary());
  const auto psi = InitialState::basisState(2, 0);
  const PathDomain domain(2, static_cast<int>(state.range(0)), 0);
  for (auto _ : state) {
    ComplexVector amps = amplitudeVector(sys, psi, domain);
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(domain.size()));
}
BENCHMARK(AmplitudeVectorTwoSite)->DenseRange(10, 20, 2);

void AmplitudeVectorThreeSite(benchmark::State& state) {
  const auto sys = FiniteUnitarySystem::stationary(randomUnitary(3, 5));
  const InitialState psi(randomState(3, 6));
  const PathDomain domain(3, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ComplexVector amps = amplitudeVector(sys, psi, domain);
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(domain.size()));
}
BENCHMARK(AmplitudeVectorThreeSite)->DenseRange(6, 12, 2);

void BuildDecoherence(benchmark::State& state) {
  const auto sys = FiniteUnitarySystem::stationary(twoSiteHopUnitary());
  const auto psi = InitialState::basisState(2, 0);
  for (auto _ : state) {
    const DecoherenceState built =
        buildDecoherence(sys, psi, static_cast<int>(state.range(0)), 0);
    benchmark::DoNotOptimize(built.trace());
  }
}
BENCHMARK(BuildDecoherence)->DenseRange(12, 18, 2);

}  // namespace
