#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qproc/pathspace.hpp"
#include "qproc/unitary.hpp"

namespace qproc {

inline constexpr std::uint64_t kDefaultDenseCap = 4096;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kMeasureClampTol = 1e-12;

// The n-decoherence matrix D(γ,γ') = a_ψ(γ) conj(a_ψ(γ')) δ_{γn,γ'n},
// held in its rank-<=m form: the full amplitude vector, sliced by final
// site through the ordinal arithmetic of the path domain. The dense
// m^(n+1)-square matrix exists only behind denseMatrix() for oracles.
class DecoherenceState {
 public:
  DecoherenceState(PathDomain domain, ComplexVector amplitudes);

  const PathDomain& domain() const { return domain_; }
  int rank() const { return domain_.rank(); }
  int m() const { return domain_.m(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex amplitudeAt(std::uint64_t ordinal) const {
    return amplitudes_(static_cast<Eigen::Index>(ordinal));
  }
  int finalSite(std::uint64_t ordinal) const { return domain_.finalSiteOf(ordinal); }

  double trace() const { return amplitudes_.squaredNorm(); }

  // s_A(i) = Σ_{γ in A, γn = i} a_ψ(γ); the whole module reduces to these.
  ComplexVector finalSiteSums(const CylinderEvent& event) const;
  ComplexVector finalSiteSums() const;  // over the whole space

 private:
  PathDomain domain_;
  ComplexVector amplitudes_;
};

// Groups all rank-n amplitudes of the system; unitarity makes the
// squared amplitudes sum to 1, which is checked here.
DecoherenceState buildDecoherence(const FiniteUnitarySystem& sys,
                                  const InitialState& psi, int rank,
                                  std::optional<int> fixedInitialSite = std::nullopt,
                                  std::uint64_t cap = kDefaultEnumerationCap);

// D_n(A,B) = Σ { a_ψ(γ) conj(a_ψ(γ')) δ_{γn,γ'n} : γ in A, γ' in B }.
Complex decoherenceFunctional(const DecoherenceState& state,
                              const CylinderEvent& a, const CylinderEvent& b);

// μ_n(A) = D_n(A,A) = Σ_i |s_A(i)|², clamped to 0 when a rounding tail
// makes it negative within tolerance.
double qMeasure(const DecoherenceState& state, const CylinderEvent& a);

// p_n(i) = μ_n({γ : γn = i}).
Eigen::VectorXd positionDistribution(const DecoherenceState& state);

// One eigenpair per final site with nonvanishing amplitude mass:
// eigenvalue λ_i = Σ_{γn=i} |a_ψ(γ)|², eigenvector the normalized
// restriction of the amplitude vector to {γn = i}, phase fixed so the
// first nonzero entry is real positive. Sites with zero restriction are
// reported absent, not as zero vectors.
struct SpectralPair {
  int finalSite = 0;
  double eigenvalue = 0.0;
  std::vector<std::uint64_t> supportOrdinals;
  ComplexVector values;  // aligned with supportOrdinals, unit norm
};

struct SpectralDecomposition {
  PathDomain domain;
  std::vector<SpectralPair> pairs;

  double eigenvalueSum() const;
};

SpectralDecomposition spectrum(const DecoherenceState& state);

// μ_n(A) = Σ_i λ_i |Σ_{γ in A} v_i(γ)|², evaluated through the stored
// decomposition; the second route of the measure oracle pair.
double qMeasureSpectral(const SpectralDecomposition& spec, const CylinderEvent& a);
double qMeasureSpectral(const DecoherenceState& state, const CylinderEvent& a);

// Full Hermitian PSD matrix over the path space; test-only materialization.
ComplexMatrix denseMatrix(const DecoherenceState& state,
                          std::uint64_t denseCap = kDefaultDenseCap);

}  // namespace qproc
