#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "qproc/unitary.hpp"
#include "qproc/walk.hpp"

using namespace qproc;
using qproc::testing::randomInitial;
using qproc::testing::randomStationarySystem;
using qproc::testing::randomSteppedSystem;

namespace {

double maxAbs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("propagator basics on the two-site hop") {
  const auto sys = FiniteUnitarySystem::stationary(twoSiteHopUnitary());
  CHECK(maxAbs(sys.propagator(3, 3) - ComplexMatrix::Identity(2, 2)) == 0.0);

  ComplexMatrix uu(2, 2);  // U^2 = [[0, i], [i, 0]]
  uu << Complex(0, 0), Complex(0, 1), Complex(0, 1), Complex(0, 0);
  CHECK(maxAbs(sys.propagator(2, 0) - uu) < 1e-15);

  CHECK(maxAbs(sys.propagator(4, 0) + ComplexMatrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("propagator composition law") {
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int m = 2 + static_cast<int>(seed % 3);
    const auto sys = (seed % 2 == 0) ? randomStationarySystem(m, seed)
                                     : randomSteppedSystem(m, 6, seed);
    std::uniform_int_distribution<int> pick(0, 6);
    int r = pick(rng), s = pick(rng), t = pick(rng);
    if (r > s) std::swap(r, s);
    if (s > t) std::swap(s, t);
    if (r > s) std::swap(r, s);
    CHECK(maxAbs(sys.propagator(t, r) - sys.propagator(t, s) * sys.propagator(s, r)) <=
          1e-12);
  }
  const auto sys = randomSteppedSystem(2, 3, 11);
  CHECK_THROWS_AS(sys.propagator(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(sys.propagator(5, 0), std::out_of_range);
}

TEST_CASE("non-unitary steps are rejected, not repaired") {
  ComplexMatrix bad(2, 2);
  bad << 1.0, 0.0, 0.0, 0.5;
  CHECK_THROWS_AS(FiniteUnitarySystem::stationary(bad), std::invalid_argument);
  CHECK_THROWS_AS(FiniteUnitarySystem::fromSteps({bad}), std::invalid_argument);
  // a slightly-off matrix beyond tolerance also fails
  ComplexMatrix off = ComplexMatrix::Identity(2, 2);
  off(0, 0) += 1e-9;
  CHECK_FALSE(isUnitary(off));
  CHECK(isUnitary(ComplexMatrix::Identity(3, 3)));
}

TEST_CASE("initial states must be normalized") {
  ComplexVector v(2);
  v << 0.5, 0.5;
  CHECK_THROWS_AS((InitialState{v}), std::invalid_argument);
  CHECK(InitialState::basisState(3, 1).component(1) == Complex(1.0, 0.0));
}

TEST_CASE("path weights on the two-site hop") {
  const auto sys = FiniteUnitarySystem::stationary(twoSiteHopUnitary());
  CHECK(pathWeight(sys, NPath({1})) == Complex(1.0, 0.0));  // empty product
  const Complex w01 = pathWeight(sys, NPath({0, 1}));
  CHECK(std::abs(w01 - Complex(0.0, 1.0 / std::sqrt(2.0))) < 1e-15);
}

TEST_CASE("Lemma-4.1-style row and column weight sums equal 1") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const int m = 2 + static_cast<int>(seed % 3);
    const int n = 1 + static_cast<int>(seed % 5);
    const auto sys = randomSteppedSystem(m, n, 500 + seed);
    for (int i = 0; i < m; ++i) {
      double startSum = 0.0, endSum = 0.0;
      forEachPath(PathDomain(m, n), [&](std::uint64_t, const NPath& p) {
        const double w = std::norm(pathWeight(sys, p));
        if (p.sites.front() == i) startSum += w;
        if (p.sites.back() == i) endSum += w;
      });
      CHECK(startSum == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(endSum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("amplitudes") {
  const auto sys = FiniteUnitarySystem::stationary(twoSiteHopUnitary());
  const auto psi = InitialState::basisState(2, 0);
  CHECK(amplitude(sys, psi, NPath({1, 0})) == Complex(0.0, 0.0));
  CHECK(std::abs(amplitude(sys, psi, NPath({0, 0})) - Complex(1.0 / std::sqrt(2.0), 0)) <
        1e-15);
  CHECK(std::abs(amplitude(sys, psi, NPath({0, 1})) - Complex(0, 1.0 / std::sqrt(2.0))) <
        1e-15);
}

TEST_CASE("amplitude normalization over the whole space") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const int m = 2 + static_cast<int>(seed % 3);
    const int n = 1 + static_cast<int>(seed % 4);
    const auto sys = randomStationarySystem(m, 40 + seed);
    const auto psi = randomInitial(m, 80 + seed);
    const ComplexVector amps = amplitudeVector(sys, psi, PathDomain(m, n));
    CHECK(amps.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("prefix-product amplitudes match per-path products") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int m = 2 + static_cast<int>(seed % 2);
    const int n = 2 + static_cast<int>(seed % 3);
    const auto sys = randomSteppedSystem(m, n, 200 + seed);
    const auto psi = randomInitial(m, 300 + seed);

    const PathDomain freeDomain(m, n);
    const ComplexVector amps = amplitudeVector(sys, psi, freeDomain);
    forEachPath(freeDomain, [&](std::uint64_t ord, const NPath& p) {
      CHECK(std::abs(amps(static_cast<Eigen::Index>(ord)) - amplitude(sys, psi, p)) <=
            1e-14);
    });

    const PathDomain pinned(m, n, 0);
    const ComplexVector pinnedAmps = amplitudeVector(sys, psi, pinned);
    forEachPath(pinned, [&](std::uint64_t ord, const NPath& p) {
      CHECK(std::abs(pinnedAmps(static_cast<Eigen::Index>(ord)) -
                     amplitude(sys, psi, p)) <= 1e-14);
    });
  }
}

TEST_CASE("class operator of the full space is the propagator") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int m = 2 + static_cast<int>(seed % 3);
    const int n = 1 + static_cast<int>(seed % 3);
    const auto sys = randomStationarySystem(m, 600 + seed);
    const auto full = CylinderEvent::full(PathDomain(m, n));
    CHECK(maxAbs(classOperator(sys, full) - sys.propagator(n, 0)) <= 1e-12);
  }
}

TEST_CASE("class operator of the empty event vanishes") {
  const auto sys = randomStationarySystem(3, 9);
  const auto none = CylinderEvent::empty(PathDomain(3, 2));
  CHECK(maxAbs(classOperator(sys, none)) == 0.0);
}

TEST_CASE("singleton class operators obey the adjoint product identity") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + (trial % 2);
    const int n = 2;
    const auto sys = randomStationarySystem(m, 700 + static_cast<std::uint64_t>(trial));
    const PathDomain domain(m, n);
    std::uniform_int_distribution<std::uint64_t> pick(0, domain.size() - 1);
    const NPath gamma = domain.pathAt(pick(rng));
    const NPath gammaPrime = domain.pathAt(pick(rng));
    const auto cG = classOperator(sys, CylinderEvent::fromPaths(domain, {gamma}));
    const auto cGp = classOperator(sys, CylinderEvent::fromPaths(domain, {gammaPrime}));

    ComplexMatrix expected = ComplexMatrix::Zero(m, m);
    if (gamma.sites.back() == gammaPrime.sites.back()) {
      expected(gammaPrime.sites.front(), gamma.sites.front()) =
          std::conj(pathWeight(sys, gammaPrime)) * pathWeight(sys, gamma);
    }
    CHECK(maxAbs(cGp.adjoint() * cG - expected) <= 1e-13);
  }
}

TEST_CASE("class operators add over disjoint unions") {
  std::mt19937_64 rng(321);
  const auto sys = randomStationarySystem(3, 31);
  const PathDomain domain(3, 2);
  const auto a = qproc::testing::randomEvent(domain, rng);
  const auto b = a.complement();
  const ComplexMatrix sum = classOperator(sys, a) + classOperator(sys, b);
  CHECK(maxAbs(sum - classOperator(sys, CylinderEvent::full(domain))) <= 1e-12);
}
