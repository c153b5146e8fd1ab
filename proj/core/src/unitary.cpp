#include "qproc/unitary.hpp"

#include <random>
#include <stdexcept>

namespace qproc {

bool isUnitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols() || u.rows() == 0) return false;
  const ComplexMatrix gram = u.adjoint() * u;
  return (gram - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

InitialState::InitialState(ComplexVector psi, double tol) : psi_(std::move(psi)) {
  if (psi_.size() == 0) throw std::invalid_argument("empty initial state");
  if (std::abs(psi_.norm() - 1.0) > tol) {
    throw std::invalid_argument("initial state is not normalized");
  }
}

InitialState InitialState::basisState(int m, int site) {
  if (site < 0 || site >= m) throw std::invalid_argument("basis site out of range");
  ComplexVector v = ComplexVector::Zero(m);
  v(site) = 1.0;
  return InitialState(std::move(v));
}

FiniteUnitarySystem FiniteUnitarySystem::stationary(ComplexMatrix u, double tol) {
  if (!isUnitary(u, tol)) throw std::invalid_argument("stationary step is not unitary");
  const int m = static_cast<int>(u.rows());
  std::vector<ComplexMatrix> steps;
  steps.push_back(std::move(u));
  return FiniteUnitarySystem(m, true, std::move(steps));
}

FiniteUnitarySystem FiniteUnitarySystem::fromSteps(std::vector<ComplexMatrix> steps,
                                                   double tol) {
  if (steps.empty()) throw std::invalid_argument("a system needs at least one step");
  const int m = static_cast<int>(steps.front().rows());
  for (const ComplexMatrix& u : steps) {
    if (u.rows() != m || u.cols() != m) {
      throw std::invalid_argument("step dimensions disagree");
    }
    if (!isUnitary(u, tol)) throw std::invalid_argument("step matrix is not unitary");
  }
  return FiniteUnitarySystem(m, false, std::move(steps));
}

const ComplexMatrix& FiniteUnitarySystem::step(int n) const {
  if (n < 0) throw std::invalid_argument("step index must be >= 0");
  if (stationary_) return steps_.front();
  if (n >= static_cast<int>(steps_.size())) {
    throw std::out_of_range("no step matrix for the requested time");
  }
  return steps_[static_cast<std::size_t>(n)];
}

bool FiniteUnitarySystem::hasStepsThrough(int s) const {
  return stationary_ || s <= static_cast<int>(steps_.size());
}

ComplexMatrix FiniteUnitarySystem::propagator(int s, int r) const {
  if (r > s) throw std::invalid_argument("propagator needs r <= s");
  if (r < 0) throw std::invalid_argument("propagator times must be >= 0");
  if (!hasStepsThrough(s)) throw std::out_of_range("missing step matrices");
  ComplexMatrix acc = ComplexMatrix::Identity(m_, m_);
  for (int k = r; k < s; ++k) acc = step(k) * acc;
  return acc;
}

Complex pathWeight(const FiniteUnitarySystem& sys, const NPath& path) {
  if (path.rank() < 0) throw std::invalid_argument("empty path");
  if (!sys.hasStepsThrough(path.rank())) {
    throw std::out_of_range("path rank exceeds the available steps");
  }
  Complex b = 1.0;
  for (int k = 1; k <= path.rank(); ++k) {
    b *= sys.stepElement(k - 1, path.sites[static_cast<std::size_t>(k)],
                         path.sites[static_cast<std::size_t>(k - 1)]);
  }
  return b;
}

Complex amplitude(const FiniteUnitarySystem& sys, const InitialState& psi,
                  const NPath& path) {
  return pathWeight(sys, path) * psi.component(path.sites[0]);
}

ComplexVector amplitudeVector(const FiniteUnitarySystem& sys,
                              const InitialState& psi, const PathDomain& domain,
                              std::uint64_t cap) {
  if (sys.dim() != domain.m()) throw std::invalid_argument("dimension mismatch");
  if (psi.dim() != domain.m()) throw std::invalid_argument("dimension mismatch");
  if (domain.size() > cap) {
    throw BudgetExceeded(domain.m(), domain.rank(), domain.size(), cap);
  }
  if (!sys.hasStepsThrough(domain.rank())) {
    throw std::out_of_range("rank exceeds the available steps");
  }

  const int m = domain.m();
  // rank-0 prefix amplitudes
  ComplexVector current;
  if (domain.initialSite()) {
    current = ComplexVector::Constant(1, psi.component(*domain.initialSite()));
  } else {
    current = psi.vector();
  }
  // last site per prefix ordinal: derivable from the ordinal except at rank 0
  auto lastSiteAt = [&](int rank, std::uint64_t ord) -> int {
    if (rank == 0) {
      return domain.initialSite() ? *domain.initialSite() : static_cast<int>(ord);
    }
    return static_cast<int>(ord % static_cast<std::uint64_t>(m));
  };

  for (int rank = 0; rank < domain.rank(); ++rank) {
    const ComplexMatrix& u = sys.step(rank);
    ComplexVector next(current.size() * m);
    for (std::uint64_t ord = 0; ord < static_cast<std::uint64_t>(current.size()); ++ord) {
      const Complex a = current(static_cast<Eigen::Index>(ord));
      const int from = lastSiteAt(rank, ord);
      const std::uint64_t base = ord * static_cast<std::uint64_t>(m);
      for (int j = 0; j < m; ++j) {
        next(static_cast<Eigen::Index>(base + j)) = a * u(j, from);
      }
    }
    current = std::move(next);
  }
  return current;
}

ComplexMatrix classOperator(const FiniteUnitarySystem& sys,
                            const CylinderEvent& event) {
  const PathDomain& domain = event.domain();
  if (sys.dim() != domain.m()) throw std::invalid_argument("dimension mismatch");
  if (!sys.hasStepsThrough(domain.rank())) {
    throw std::out_of_range("event rank exceeds the available steps");
  }
  ComplexMatrix c = ComplexMatrix::Zero(domain.m(), domain.m());
  event.forEachIndex([&](std::uint64_t idx) {
    const NPath path = domain.pathAt(domain.ordinalOf(idx));
    c(path.sites.back(), path.sites.front()) += pathWeight(sys, path);
  });
  return c;
}

ComplexMatrix randomUnitary(int m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("dimension must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(m, m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < m; ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    q.col(k) *= (mag == 0.0) ? 1.0 : d / mag;
  }
  return q;
}

ComplexVector randomState(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector v(m);
  for (int i = 0; i < m; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  v.normalize();
  return v;
}

}  // namespace qproc
