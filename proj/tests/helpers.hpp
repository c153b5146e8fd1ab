#pragma once

#include <random>
#include <vector>

#include "qproc/decoherence.hpp"
#include "qproc/pathspace.hpp"
#include "qproc/unitary.hpp"

namespace qproc::testing {

inline FiniteUnitarySystem randomStationarySystem(int m, std::uint64_t seed) {
  return FiniteUnitarySystem::stationary(randomUnitary(m, seed));
}

inline FiniteUnitarySystem randomSteppedSystem(int m, int steps, std::uint64_t seed) {
  std::vector<ComplexMatrix> us;
  us.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    us.push_back(randomUnitary(m, seed * 1000 + static_cast<std::uint64_t>(k)));
  }
  return FiniteUnitarySystem::fromSteps(std::move(us));
}

inline InitialState randomInitial(int m, std::uint64_t seed) {
  return InitialState(randomState(m, seed));
}

// each index kept with probability 1/2
inline CylinderEvent randomEvent(const PathDomain& domain, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(0.5);
  std::vector<std::uint64_t> indices;
  for (std::uint64_t ord = 0; ord < domain.size(); ++ord) {
    if (keep(rng)) indices.push_back(domain.indexAt(ord));
  }
  return CylinderEvent::fromIndices(domain, std::move(indices));
}

// splits the space into three disjoint pieces (some possibly empty)
inline std::vector<CylinderEvent> randomDisjointTriple(const PathDomain& domain,
                                                       std::mt19937_64& rng) {
  std::uniform_int_distribution<int> bucket(0, 3);  // 3 = unused
  std::vector<std::vector<std::uint64_t>> parts(3);
  for (std::uint64_t ord = 0; ord < domain.size(); ++ord) {
    const int which = bucket(rng);
    if (which < 3) parts[static_cast<std::size_t>(which)].push_back(domain.indexAt(ord));
  }
  std::vector<CylinderEvent> events;
  for (auto& p : parts) {
    events.push_back(CylinderEvent::fromIndices(domain, std::move(p)));
  }
  return events;
}

}  // namespace qproc::testing
