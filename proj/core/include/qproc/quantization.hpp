#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "qproc/process.hpp"

namespace qproc {

inline constexpr double kWeightSumTol = 1e-12;
inline constexpr double kStateSpectrumTol = 1e-12;

// A finite probability space: indexed points with positive weights
// summing to 1. Zero-weight points are dropped at construction, so every
// surviving point carries mass.
class DiscreteMeasureSpace {
 public:
  explicit DiscreteMeasureSpace(std::vector<double> weights);

  int size() const { return static_cast<int>(weights_.size()); }
  double weight(int point) const { return weights_[static_cast<std::size_t>(point)]; }
  double sqrtWeight(int point) const { return sqrtWeights_[static_cast<std::size_t>(point)]; }

  // ν(A) for a set of point indices (duplicates rejected).
  double measureOf(const std::vector<int>& points) const;

  // the point kept at position i originally had this index
  int originalIndex(int point) const { return original_[static_cast<std::size_t>(point)]; }
  int originalSize() const { return originalSize_; }

 private:
  std::vector<double> weights_;
  std::vector<double> sqrtWeights_;
  std::vector<int> original_;
  int originalSize_ = 0;
};

// Real values per point; finite entries only.
class RandomVariable {
 public:
  explicit RandomVariable(Eigen::VectorXd values);

  const Eigen::VectorXd& values() const { return values_; }
  double operator()(int point) const { return values_(point); }
  int size() const { return static_cast<int>(values_.size()); }

  // L2(ν) norm.
  double normIn(const DiscreteMeasureSpace& space) const;

 private:
  Eigen::VectorXd values_;
};

// f-hat in the orthonormalized point basis: the (x, y) entry is
// √νx √νy (min[f+(x), f+(y)] - min[f-(x), f-(y)]). Real symmetric, and
// positive semidefinite whenever f >= 0.
struct QuantizedOperator {
  Eigen::MatrixXd matrix;

  double operatorNorm() const;
};

QuantizedOperator quantize(const DiscreteMeasureSpace& space, const RandomVariable& f);

// Density matrix in the same orthonormalized basis: Hermitian, PSD
// within tolerance, unit trace.
class StateOperator {
 public:
  explicit StateOperator(Eigen::MatrixXcd rho);

  const Eigen::MatrixXcd& matrix() const { return rho_; }
  int size() const { return static_cast<int>(rho_.rows()); }

  // rank-1 pure state |u><u| from a unit vector.
  static StateOperator pure(const Eigen::VectorXcd& u);

 private:
  Eigen::MatrixXcd rho_;
};

// tr(ρ f-hat).
double qIntegral(const StateOperator& rho, const DiscreteMeasureSpace& space,
                 const RandomVariable& f);

// μ_ρ(A) = <ρ χ_A, χ_A> for a point-set event.
double qMeasureOf(const StateOperator& rho, const DiscreteMeasureSpace& space,
                  const std::vector<int>& points);

// ∫0∞ μ_ρ{f > λ} dλ - ∫0∞ μ_ρ{f < -λ} dλ as an exact finite sum over
// the sorted distinct values of f. Independent oracle for qIntegral.
double tailSumIntegral(const StateOperator& rho, const DiscreteMeasureSpace& space,
                       const RandomVariable& f);

// Closed-form eigenpairs of (α χ_A + β χ_B)-hat for disjoint A, B of
// positive measure. Same-sign pairs go through the quadratic
//   λ² - [ν(A) + r ν(B)] λ + (r - 1) ν(A) ν(B) = 0,   r = β/α,
// scaled back by α; mixed signs reduce to two rank-1 blocks. The
// unnormalized eigenvectors are χ_A + b± χ_B as point-basis values.
struct TwoValuedSpectrum {
  double lambdaPlus = 0.0;
  double lambdaMinus = 0.0;
  Eigen::VectorXd gPlus;      // point-basis values, unnormalized
  Eigen::VectorXd gMinus;
  Eigen::VectorXd gPlusUnit;  // orthonormal-basis unit vectors
  Eigen::VectorXd gMinusUnit;
};

TwoValuedSpectrum twoValuedSpectrum(const DiscreteMeasureSpace& space,
                                    const std::vector<int>& a,
                                    const std::vector<int>& b, double alpha,
                                    double beta);

// f-hat for a simple function Σ αi χ_Ai over mutually disjoint sets,
// built from the pairwise grade-2 expansion
//   Σ_{i<j} (αi χ_Ai + αj χ_Aj)^ - (n-2) Σ_i αi χ_Ai^.
// Must reproduce direct quantization; the second route of that oracle
// pair.
QuantizedOperator simpleExpansion(const DiscreteMeasureSpace& space,
                                  const std::vector<std::vector<int>>& partition,
                                  const std::vector<double>& alphas);

struct ProcessIntegralReport {
  int firstRank = 0;
  std::vector<double> values;  // tr(ρ_t' f-hat) per evaluation rank
  SuitabilityVerdict verdict = SuitabilityVerdict::NotConverged;
  std::optional<double> limit;
  double trailingSpread = 0.0;
};

// ∫ f dμ~ for an f measurable at rank `rank` (values indexed by path
// ordinal), evaluated as the tail sum of local expectations of its level
// sets at every rank t' in [rank, tMax] and windowed like
// evaluateSuitability. Constant in t' by consistency.
ProcessIntegralReport processIntegral(const QProcess& proc, int rank,
                                      const RandomVariable& valuesByOrdinal,
                                      int tMax, int window = kDefaultWindow,
                                      double tol = kDefaultWindowTol);

}  // namespace qproc
