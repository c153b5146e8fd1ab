#pragma once

#include <optional>
#include <vector>

#include "qproc/decoherence.hpp"
#include "qproc/exact.hpp"
#include "qproc/process.hpp"

namespace qproc {

// The two-site hop step (1/√2) [[1, i], [i, 1]].
ComplexMatrix twoSiteHopUnitary();

// The two-site hopper as a process: stationary hop step, ψ = e0, initial
// site pinned to 0.
QProcess twoSiteWalkProcess(std::uint64_t cap = kDefaultEnumerationCap);

// G(t) = Σ_{j odd} i^{c_t(j)} and F(t) = Σ_{j even} i^{c_t(j)}, exact in
// Z[i]. The recursion G(t) = G(t-1) + i F(t-1), F(t) = F(t-1) + i G(t-1)
// follows from the flip-count reflection; seeds G(0) = 0, F(0) = 1.
struct GFPair {
  GaussianInt g;
  GaussianInt f;
};

GFPair gfRecursion(int t);

// Same values through the period-4 reduction G(4m+j) = (-4)^m G(j),
// F(4m+j) = (-4)^m F(j).
GFPair gfClosedForm(int t);

// Direct evaluation from the flip-count vector; the enumeration oracle.
GFPair gfFromFlipVector(int t);

// μ_t(E_t) = |G(t)|² / 2^t and μ_t(G_t) = |F(t)|² / 2^t, exact.
Rational walkSiteOneMeasure(int t);
Rational walkSiteZeroMeasure(int t);

struct WalkRow {
  int t = 0;
  GaussianInt g;
  GaussianInt f;
  Rational muE;                    // exact fast-path μ_t(E_t)
  Rational muG;                    // exact fast-path μ_t(G_t)
  std::optional<double> muEDirect; // path-sum value when within the cap
  std::optional<double> muGDirect;
  Rational nuE;                    // classical baseline, 1/2 for t >= 1
};

// Fast-path table with a direct path-sum cross-check through rank
// directCap.
std::vector<WalkRow> walkTable(int tMax, int directCap,
                               std::uint64_t cap = kDefaultEnumerationCap);

// Direct-path μ_t values for an arbitrary two-site-style process: the
// q-measure of "position = site at time t" computed by path sums.
double directPositionMeasure(const QProcess& proc, int t, int site);

}  // namespace qproc
