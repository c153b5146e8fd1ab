#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "qproc/pathspace.hpp"

namespace qproc {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

inline constexpr double kUnitarityTol = 1e-12;
inline constexpr double kStateNormTol = 1e-12;

// max |(U†U - I)_{jk}| <= tol
bool isUnitary(const ComplexMatrix& u, double tol = kUnitarityTol);

// Unit vector ψ on the position space C^m. Construction rejects
// non-normalized input instead of repairing it.
class InitialState {
 public:
  explicit InitialState(ComplexVector psi, double tol = kStateNormTol);

  const ComplexVector& vector() const { return psi_; }
  int dim() const { return static_cast<int>(psi_.size()); }
  Complex component(int site) const { return psi_(site); }

  static InitialState basisState(int m, int site);

 private:
  ComplexVector psi_;
};

// The discrete-time evolution U(s, r) on C^m, given either by a single
// stationary step U (U(s,r) = U^(s-r)) or by per-step matrices where
// step n holds U(n+1, n). Every step must pass the unitarity check.
class FiniteUnitarySystem {
 public:
  static FiniteUnitarySystem stationary(ComplexMatrix u, double tol = kUnitarityTol);
  static FiniteUnitarySystem fromSteps(std::vector<ComplexMatrix> steps,
                                       double tol = kUnitarityTol);

  int dim() const { return m_; }
  bool isStationary() const { return stationary_; }

  // U(n+1, n); stationary systems answer for every n.
  const ComplexMatrix& step(int n) const;
  bool hasStepsThrough(int s) const;

  // U(s, r) for r <= s; U(r, r) = I.
  ComplexMatrix propagator(int s, int r) const;

  Complex stepElement(int n, int to, int from) const { return step(n)(to, from); }

 private:
  FiniteUnitarySystem(int m, bool stationary, std::vector<ComplexMatrix> steps)
      : m_(m), stationary_(stationary), steps_(std::move(steps)) {}

  int m_;
  bool stationary_;
  std::vector<ComplexMatrix> steps_;  // single entry when stationary
};

// b(γ) = Π_k <e_{γk}, U(k, k-1) e_{γk-1}>; the empty product is 1.
Complex pathWeight(const FiniteUnitarySystem& sys, const NPath& path);

// a_ψ(γ) = b(γ) ψ(γ0).
Complex amplitude(const FiniteUnitarySystem& sys, const InitialState& psi,
                  const NPath& path);

// All amplitudes over a path domain, ordered by ordinal. Built rank by
// rank from prefix products, so the whole space costs one matrix-element
// fetch per path instead of one per path step.
ComplexVector amplitudeVector(const FiniteUnitarySystem& sys,
                              const InitialState& psi, const PathDomain& domain,
                              std::uint64_t cap = kDefaultEnumerationCap);

// C_n(A) = Σ_{γ in A} b(γ) |e_{γn}><e_{γ0}|, materialized on C^m only.
ComplexMatrix classOperator(const FiniteUnitarySystem& sys,
                            const CylinderEvent& event);

// Haar-like random unitary from QR of a seeded complex Gaussian matrix,
// with the R diagonal phase fixed; deterministic per seed.
ComplexMatrix randomUnitary(int m, std::uint64_t seed);

// Random unit vector, deterministic per seed.
ComplexVector randomState(int m, std::uint64_t seed);

}  // namespace qproc
