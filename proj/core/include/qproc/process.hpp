#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qproc/decoherence.hpp"
#include "qproc/pathspace.hpp"
#include "qproc/unitary.hpp"

namespace qproc {

inline constexpr int kDefaultWindow = 4;
inline constexpr double kDefaultWindowTol = 1e-9;

// A unitary system together with an initial state, viewed as the
// consistent sequence of rank-t decoherence states it generates.
// States are built lazily and cached per rank.
class QProcess {
 public:
  QProcess(FiniteUnitarySystem sys, InitialState psi,
           std::optional<int> fixedInitialSite = std::nullopt,
           std::uint64_t enumerationCap = kDefaultEnumerationCap);

  const FiniteUnitarySystem& system() const { return sys_; }
  const InitialState& initialState() const { return psi_; }
  std::optional<int> fixedInitialSite() const { return fixed_; }
  std::uint64_t enumerationCap() const { return cap_; }
  int m() const { return sys_.dim(); }

  PathDomain domain(int rank) const { return PathDomain(sys_.dim(), rank, fixed_); }
  std::shared_ptr<const DecoherenceState> state(int rank) const;

  // ψ with the initial-site condition folded in: ψ(s) e_s when fixed.
  ComplexVector effectiveInitialVector() const;

 private:
  FiniteUnitarySystem sys_;
  InitialState psi_;
  std::optional<int> fixed_;
  std::uint64_t cap_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::shared_ptr<const DecoherenceState>> cache_;
};

enum class EventKind { Cylinder, Tail, Countable, Complement };

// An event A described by its coverage fractions
// ν(A ∩ cyl(γ)) / ν(cyl(γ)) per path prefix: the bridge from cylinder
// sets to the suitable sets the extended measure is evaluated on.
// Countable-kind families carry the canonical shrinking-cylinder
// approximation of a null set, whose coverage decays instead of staying
// a martingale.
class EventFamily {
 public:
  virtual ~EventFamily() = default;

  const std::string& name() const { return name_; }
  EventKind kind() const { return kind_; }
  int m() const { return m_; }
  // Rank beyond which the family no longer defines coverage (coverage
  // tables); unbounded for the built-ins.
  virtual std::optional<int> maxRank() const { return std::nullopt; }

  virtual double coverage(int rank, const NPath& prefix) const = 0;

  // Σ_γ coverage(t, γ) a_ψ(γ) e_{γt}. The default enumerates the rank-t
  // space within the process budget; built-ins override with an exact
  // O(t·m²) evolution so the local expectations stay available far past
  // anything enumerable.
  virtual ComplexVector weightedSiteSums(const QProcess& proc, int rank) const;

  // ν(A) under the free product measure, when known in closed form.
  virtual std::optional<Rational> classicalMeasure() const { return std::nullopt; }

 protected:
  EventFamily(std::string name, EventKind kind, int m)
      : name_(std::move(name)), kind_(kind), m_(m) {}

 private:
  std::string name_;
  EventKind kind_;
  int m_;
};

using FamilyPtr = std::shared_ptr<const EventFamily>;

// Λ_t(A) = <D_t w, w> with w the coverage weights = Σ_i |s_i|².
double localExpectation(const QProcess& proc, const EventFamily& family, int rank);
// Same quantity for an explicit cylinder event at rank >= its native
// rank, through class-operator evolution.
double localExpectation(const QProcess& proc, const CylinderEvent& event, int rank);

enum class SuitabilityVerdict { Suitable, NotConverged, BudgetExhausted };

struct SuitabilityReport {
  int firstRank = 0;
  std::vector<double> values;  // Λ_t for t = firstRank, firstRank+1, ...
  SuitabilityVerdict verdict = SuitabilityVerdict::NotConverged;
  std::optional<double> limit;  // mean of the trailing window when suitable
  double trailingSpread = 0.0;
  int window = kDefaultWindow;
  double tol = kDefaultWindowTol;

  double maxSpread() const;  // max - min over all recorded values
};

// Trailing-window Cauchy test: suitable iff the last `window` values
// spread at most `tol`. Non-convergence and budget exhaustion are
// verdicts, not errors.
SuitabilityReport evaluateSuitability(const QProcess& proc, const EventFamily& family,
                                      int tMax, int window = kDefaultWindow,
                                      double tol = kDefaultWindowTol);
SuitabilityReport evaluateSuitability(const QProcess& proc, const CylinderEvent& event,
                                      int tMax, int window = kDefaultWindow,
                                      double tol = kDefaultWindowTol);

struct ConsistencyReport {
  int rank = 0;
  std::uint64_t pairsChecked = 0;
  bool exhaustive = false;
  double maxResidual = 0.0;
};

// Checks D_t(γ,γ') = Σ_j D_{t+1}(γj, γ'j) on all pairs when the space is
// small enough, otherwise on `samples` seeded pairs.
ConsistencyReport verifyConsistency(const QProcess& proc, int rank,
                                    std::uint64_t samples, std::uint64_t seed = 17);

// Grade-2 residual
//   μ(A∪B∪C) - μ(A∪B) - μ(A∪C) - μ(B∪C) + μ(A) + μ(B) + μ(C)
// for mutually disjoint events (checked) or families (disjointness
// asserted by the caller).
double grade2Residual(const DecoherenceState& state, const CylinderEvent& a,
                      const CylinderEvent& b, const CylinderEvent& c);
double grade2Residual(const QProcess& proc, const EventFamily& a,
                      const EventFamily& b, const EventFamily& c, int rank);

// Built-in families. Coverage values are exact conditional measures
// (or the canonical shrinking approximation for the countable kind).
FamilyPtr visitsSite(int m, int site);
FamilyPtr neverVisitsSite(int m, int site);
FamilyPtr firstVisitAt(int m, int site, int time);
FamilyPtr positionAt(int m, int time, int site);
FamilyPtr singletonPath(int m, NPath prefix);
FamilyPtr countableSet(int m, std::vector<NPath> prefixes);
FamilyPtr complementOfCountable(int m, std::vector<NPath> prefixes);

// Family backed by explicit per-prefix coverage values keyed by
// (rank, canonical path index); absent entries read as 0.
FamilyPtr coverageTableFamily(int m, std::string name,
                              std::map<std::pair<int, std::uint64_t>, double> entries,
                              int maxRank);

struct FamilyCatalogEntry {
  std::string name;
  std::string parameters;
  std::string summary;
};

// Names and parameter signatures of every built-in family for m sites.
std::vector<FamilyCatalogEntry> builtinFamilies(int m);

// max over rank-`rank` prefixes of |coverage(t,γ) - mean of child
// coverages|; the martingale property of fixed-event families.
double martingaleResidual(const EventFamily& family, int rank,
                          std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace qproc
