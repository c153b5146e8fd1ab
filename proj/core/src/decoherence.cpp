#include "qproc/decoherence.hpp"

#include <cmath>
#include <stdexcept>

namespace qproc {

DecoherenceState::DecoherenceState(PathDomain domain, ComplexVector amplitudes)
    : domain_(std::move(domain)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::uint64_t>(amplitudes_.size()) != domain_.size()) {
    throw std::invalid_argument("amplitude vector does not match the domain");
  }
  if (std::abs(trace() - 1.0) > kTraceTol) {
    throw std::invalid_argument("decoherence state trace is not 1");
  }
}

ComplexVector DecoherenceState::finalSiteSums(const CylinderEvent& event) const {
  if (!(event.domain() == domain_)) {
    throw std::invalid_argument("event rank/domain mismatch");
  }
  ComplexVector sums = ComplexVector::Zero(domain_.m());
  event.forEachIndex([&](std::uint64_t idx) {
    const std::uint64_t ord = domain_.ordinalOf(idx);
    sums(domain_.finalSiteOf(ord)) += amplitudes_(static_cast<Eigen::Index>(ord));
  });
  return sums;
}

ComplexVector DecoherenceState::finalSiteSums() const {
  ComplexVector sums = ComplexVector::Zero(domain_.m());
  for (std::uint64_t ord = 0; ord < domain_.size(); ++ord) {
    sums(domain_.finalSiteOf(ord)) += amplitudes_(static_cast<Eigen::Index>(ord));
  }
  return sums;
}

DecoherenceState buildDecoherence(const FiniteUnitarySystem& sys,
                                  const InitialState& psi, int rank,
                                  std::optional<int> fixedInitialSite,
                                  std::uint64_t cap) {
  const PathDomain domain(sys.dim(), rank, fixedInitialSite);
  if (fixedInitialSite) {
    // conditioning on γ0 = s only leaves a unit-trace state when ψ puts
    // all of its weight there
    if (std::abs(std::abs(psi.component(*fixedInitialSite)) - 1.0) > kTraceTol) {
      throw std::invalid_argument(
          "fixed initial site requires |ψ(site)| = 1; trace would not be 1");
    }
  }
  return DecoherenceState(domain, amplitudeVector(sys, psi, domain, cap));
}

Complex decoherenceFunctional(const DecoherenceState& state,
                              const CylinderEvent& a, const CylinderEvent& b) {
  const ComplexVector sa = state.finalSiteSums(a);
  const ComplexVector sb = state.finalSiteSums(b);
  Complex d = 0.0;
  for (int i = 0; i < state.m(); ++i) d += sa(i) * std::conj(sb(i));
  return d;
}

double qMeasure(const DecoherenceState& state, const CylinderEvent& a) {
  const double mu = state.finalSiteSums(a).squaredNorm();
  if (mu < 0.0) {
    if (mu < -kMeasureClampTol) throw std::logic_error("q-measure went negative");
    return 0.0;
  }
  return mu;
}

Eigen::VectorXd positionDistribution(const DecoherenceState& state) {
  return state.finalSiteSums().cwiseAbs2();
}

SpectralDecomposition spectrum(const DecoherenceState& state) {
  const PathDomain& domain = state.domain();
  const int m = state.m();
  std::vector<std::vector<std::uint64_t>> support(static_cast<std::size_t>(m));
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  for (std::uint64_t ord = 0; ord < domain.size(); ++ord) {
    const Complex a = state.amplitudeAt(ord);
    if (a == Complex(0.0, 0.0)) continue;
    const int site = domain.finalSiteOf(ord);
    support[static_cast<std::size_t>(site)].push_back(ord);
    lambda(site) += std::norm(a);
  }

  SpectralDecomposition out{domain, {}};
  for (int i = 0; i < m; ++i) {
    auto& ords = support[static_cast<std::size_t>(i)];
    if (ords.empty() || lambda(i) <= 0.0) continue;  // absent eigenpair
    SpectralPair pair;
    pair.finalSite = i;
    pair.eigenvalue = lambda(i);
    pair.values.resize(static_cast<Eigen::Index>(ords.size()));
    const double invNorm = 1.0 / std::sqrt(lambda(i));
    for (std::size_t k = 0; k < ords.size(); ++k) {
      pair.values(static_cast<Eigen::Index>(k)) = state.amplitudeAt(ords[k]) * invNorm;
    }
    // phase convention: first nonzero entry real positive
    const Complex lead = pair.values(0);
    const double mag = std::abs(lead);
    if (mag > 0.0) pair.values *= std::conj(lead) / mag;
    pair.supportOrdinals = std::move(ords);
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

double SpectralDecomposition::eigenvalueSum() const {
  double s = 0.0;
  for (const SpectralPair& p : pairs) s += p.eigenvalue;
  return s;
}

double qMeasureSpectral(const SpectralDecomposition& spec, const CylinderEvent& a) {
  if (!(a.domain() == spec.domain)) {
    throw std::invalid_argument("event rank/domain mismatch");
  }
  double mu = 0.0;
  for (const SpectralPair& pair : spec.pairs) {
    Complex inner = 0.0;
    for (std::size_t k = 0; k < pair.supportOrdinals.size(); ++k) {
      if (a.contains(spec.domain.indexAt(pair.supportOrdinals[k]))) {
        inner += pair.values(static_cast<Eigen::Index>(k));
      }
    }
    mu += pair.eigenvalue * std::norm(inner);
  }
  return mu;
}

double qMeasureSpectral(const DecoherenceState& state, const CylinderEvent& a) {
  return qMeasureSpectral(spectrum(state), a);
}

ComplexMatrix denseMatrix(const DecoherenceState& state, std::uint64_t denseCap) {
  const PathDomain& domain = state.domain();
  if (domain.size() > denseCap) {
    throw BudgetExceeded(domain.m(), domain.rank(), domain.size(), denseCap);
  }
  const auto n = static_cast<Eigen::Index>(domain.size());
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const int siteR = domain.finalSiteOf(static_cast<std::uint64_t>(r));
    for (Eigen::Index c = 0; c < n; ++c) {
      if (domain.finalSiteOf(static_cast<std::uint64_t>(c)) != siteR) continue;
      d(r, c) = state.amplitudes()(r) * std::conj(state.amplitudes()(c));
    }
  }
  return d;
}

}  // namespace qproc
