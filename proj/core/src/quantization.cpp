#include "qproc/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qproc {

DiscreteMeasureSpace::DiscreteMeasureSpace(std::vector<double> weights) {
  originalSize_ = static_cast<int>(weights.size());
  double total = 0.0;
  for (int i = 0; i < originalSize_; ++i) {
    const double w = weights[static_cast<std::size_t>(i)];
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("weights must be finite and nonnegative");
    }
    if (w == 0.0) continue;  // zero-weight points are dropped
    weights_.push_back(w);
    sqrtWeights_.push_back(std::sqrt(w));
    original_.push_back(i);
    total += w;
  }
  if (weights_.empty()) throw std::invalid_argument("no points with positive weight");
  if (std::abs(total - 1.0) > kWeightSumTol) {
    throw std::invalid_argument("weights must sum to 1");
  }
}

double DiscreteMeasureSpace::measureOf(const std::vector<int>& points) const {
  std::set<int> seen;
  double nu = 0.0;
  for (int p : points) {
    if (p < 0 || p >= size()) throw std::out_of_range("point index out of range");
    if (!seen.insert(p).second) throw std::invalid_argument("duplicate point in event");
    nu += weight(p);
  }
  return nu;
}

RandomVariable::RandomVariable(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() == 0) throw std::invalid_argument("empty random variable");
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_(i))) {
      throw std::invalid_argument("random variables must be finite");
    }
  }
}

double RandomVariable::normIn(const DiscreteMeasureSpace& space) const {
  if (size() != space.size()) throw std::invalid_argument("dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < size(); ++i) s += values_(i) * values_(i) * space.weight(i);
  return std::sqrt(s);
}

double QuantizedOperator::operatorNorm() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix,
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

QuantizedOperator quantize(const DiscreteMeasureSpace& space, const RandomVariable& f) {
  const int n = space.size();
  if (f.size() != n) throw std::invalid_argument("dimension mismatch");
  Eigen::MatrixXd kernel(n, n);
  // strict split: zeros belong to neither support, keeping disjointness
  // of f+ and f- exact
  auto plus = [&](int x) { return std::max(f(x), 0.0); };
  auto minus = [&](int x) { return std::max(-f(x), 0.0); };
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y <= x; ++y) {
      const double k = std::min(plus(x), plus(y)) - std::min(minus(x), minus(y));
      const double entry = space.sqrtWeight(x) * space.sqrtWeight(y) * k;
      kernel(x, y) = entry;
      kernel(y, x) = entry;
    }
  }
  return QuantizedOperator{std::move(kernel)};
}

StateOperator::StateOperator(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
    throw std::invalid_argument("density matrix must be square");
  }
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kStateSpectrumTol) {
    throw std::invalid_argument("density matrix must be Hermitian");
  }
  if (std::abs(rho_.trace().real() - 1.0) > kStateSpectrumTol ||
      std::abs(rho_.trace().imag()) > kStateSpectrumTol) {
    throw std::invalid_argument("density matrix must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kStateSpectrumTol) {
    throw std::invalid_argument("density matrix must be positive semidefinite");
  }
}

StateOperator StateOperator::pure(const Eigen::VectorXcd& u) {
  if (std::abs(u.norm() - 1.0) > kStateSpectrumTol) {
    throw std::invalid_argument("pure state needs a unit vector");
  }
  return StateOperator(u * u.adjoint());
}

double qIntegral(const StateOperator& rho, const DiscreteMeasureSpace& space,
                 const RandomVariable& f) {
  if (rho.size() != space.size()) throw std::invalid_argument("dimension mismatch");
  const QuantizedOperator fhat = quantize(space, f);
  return (rho.matrix() * fhat.matrix.cast<Complex>()).trace().real();
}

namespace {

// orthonormal-basis vector of χ_A: √νx on A
Eigen::VectorXcd indicatorVector(const DiscreteMeasureSpace& space,
                                 const std::vector<int>& points) {
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(space.size());
  for (int p : points) {
    if (p < 0 || p >= space.size()) throw std::out_of_range("point index out of range");
    u(p) = space.sqrtWeight(p);
  }
  return u;
}

}  // namespace

double qMeasureOf(const StateOperator& rho, const DiscreteMeasureSpace& space,
                  const std::vector<int>& points) {
  if (rho.size() != space.size()) throw std::invalid_argument("dimension mismatch");
  const Eigen::VectorXcd u = indicatorVector(space, points);
  return (u.adjoint() * rho.matrix() * u)(0).real();
}

namespace {

// ∫0∞ μ_ρ{g > λ} dλ for g >= 0, exact over the step function of levels
double positiveTailSum(const StateOperator& rho, const DiscreteMeasureSpace& space,
                       const Eigen::VectorXd& g) {
  std::vector<double> levels;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g(i) > 0.0) levels.push_back(g(i));
  }
  if (levels.empty()) return 0.0;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  double integral = 0.0;
  double below = 0.0;
  for (double level : levels) {
    std::vector<int> event;
    for (int i = 0; i < static_cast<int>(g.size()); ++i) {
      if (g(i) >= level) event.push_back(i);
    }
    integral += (level - below) * qMeasureOf(rho, space, event);
    below = level;
  }
  return integral;
}

}  // namespace

double tailSumIntegral(const StateOperator& rho, const DiscreteMeasureSpace& space,
                       const RandomVariable& f) {
  if (rho.size() != space.size() || f.size() != space.size()) {
    throw std::invalid_argument("dimension mismatch");
  }
  const Eigen::VectorXd plus = f.values().cwiseMax(0.0);
  const Eigen::VectorXd minus = (-f.values()).cwiseMax(0.0);
  return positiveTailSum(rho, space, plus) - positiveTailSum(rho, space, minus);
}

TwoValuedSpectrum twoValuedSpectrum(const DiscreteMeasureSpace& space,
                                    const std::vector<int>& a,
                                    const std::vector<int>& b, double alpha,
                                    double beta) {
  const int n = space.size();
  std::vector<bool> inA(static_cast<std::size_t>(n), false);
  std::vector<bool> inB(static_cast<std::size_t>(n), false);
  for (int p : a) inA[static_cast<std::size_t>(p)] = true;
  for (int p : b) {
    if (inA[static_cast<std::size_t>(p)]) {
      throw std::invalid_argument("the two level sets must be disjoint");
    }
    inB[static_cast<std::size_t>(p)] = true;
  }
  const double nuA = space.measureOf(a);
  const double nuB = space.measureOf(b);
  if (nuA == 0.0 || nuB == 0.0) {
    throw std::invalid_argument("both level sets need positive measure");
  }
  if (alpha == 0.0 || beta == 0.0 || alpha == beta) {
    throw std::invalid_argument("coefficients must be nonzero and distinct");
  }

  auto pointVector = [&](double coeffA, double coeffB) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      if (inA[static_cast<std::size_t>(i)]) g(i) = coeffA;
      if (inB[static_cast<std::size_t>(i)]) g(i) = coeffB;
    }
    return g;
  };
  auto toUnit = [&](const Eigen::VectorXd& pointValues) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u(i) = pointValues(i) * space.sqrtWeight(i);
    const double norm = u.norm();
    if (norm > 0.0) u /= norm;
    return u;
  };

  TwoValuedSpectrum out;
  if (alpha > 0.0 && beta < 0.0) {
    // f-hat splits into two disjoint rank-1 blocks
    out.lambdaPlus = alpha * nuA;
    out.lambdaMinus = beta * nuB;
    out.gPlus = pointVector(1.0, 0.0);
    out.gMinus = pointVector(0.0, 1.0);
    out.gPlusUnit = toUnit(out.gPlus);
    out.gMinusUnit = toUnit(out.gMinus);
    return out;
  }
  if (alpha < 0.0 && beta > 0.0) {
    return twoValuedSpectrum(space, b, a, beta, alpha);
  }
  if (alpha < 0.0 && beta < 0.0) {
    // (-f)-hat = -f-hat: reflect the positive case
    out = twoValuedSpectrum(space, a, b, -alpha, -beta);
    const TwoValuedSpectrum positive = out;
    out.lambdaPlus = -positive.lambdaMinus;
    out.lambdaMinus = -positive.lambdaPlus;
    out.gPlus = positive.gMinus;
    out.gMinus = positive.gPlus;
    out.gPlusUnit = positive.gMinusUnit;
    out.gMinusUnit = positive.gPlusUnit;
    return out;
  }
  // both positive; normalize so the larger coefficient plays β > 1
  if (alpha > beta) {
    out = twoValuedSpectrum(space, b, a, beta, alpha);
    return out;
  }
  // the proof's quadratic for f = χ_A + r χ_B, r = β/α > 1:
  //   λ² - [ν(A) + r ν(B)] λ + (r - 1) ν(A) ν(B) = 0,
  // discriminant [ν(A) - r ν(B)]² + 4 ν(A) ν(B)
  const double r = beta / alpha;
  const double half = 0.5 * (nuA + r * nuB);
  const double disc = (nuA - r * nuB) * (nuA - r * nuB) + 4.0 * nuA * nuB;
  const double root = std::sqrt(disc);
  const double lamPlus = half + 0.5 * root;
  const double lamMinus = half - 0.5 * root;
  const double bPlus = (lamPlus - nuA) / nuB;
  const double bMinus = (lamMinus - nuA) / nuB;

  out.lambdaPlus = alpha * lamPlus;
  out.lambdaMinus = alpha * lamMinus;
  out.gPlus = pointVector(1.0, bPlus);
  out.gMinus = pointVector(1.0, bMinus);
  out.gPlusUnit = toUnit(out.gPlus);
  out.gMinusUnit = toUnit(out.gMinus);
  return out;
}

QuantizedOperator simpleExpansion(const DiscreteMeasureSpace& space,
                                  const std::vector<std::vector<int>>& partition,
                                  const std::vector<double>& alphas) {
  const int n = static_cast<int>(partition.size());
  if (n == 0) throw std::invalid_argument("expansion needs at least one set");
  if (alphas.size() != partition.size()) {
    throw std::invalid_argument("one coefficient per set");
  }
  std::vector<int> owner(static_cast<std::size_t>(space.size()), -1);
  for (int i = 0; i < n; ++i) {
    for (int p : partition[static_cast<std::size_t>(i)]) {
      if (p < 0 || p >= space.size()) throw std::out_of_range("point out of range");
      if (owner[static_cast<std::size_t>(p)] != -1) {
        throw std::invalid_argument("expansion sets overlap");
      }
      owner[static_cast<std::size_t>(p)] = i;
    }
  }

  auto indicatorCombo = [&](int i, double ai, int j, double aj) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(space.size());
    for (int p = 0; p < space.size(); ++p) {
      if (owner[static_cast<std::size_t>(p)] == i) g(p) = ai;
      else if (j >= 0 && owner[static_cast<std::size_t>(p)] == j) g(p) = aj;
    }
    return RandomVariable(std::move(g));
  };

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(space.size(), space.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      acc += quantize(space, indicatorCombo(i, alphas[static_cast<std::size_t>(i)], j,
                                            alphas[static_cast<std::size_t>(j)]))
                 .matrix;
    }
  }
  for (int i = 0; i < n; ++i) {
    acc -= double(n - 2) *
           quantize(space, indicatorCombo(i, alphas[static_cast<std::size_t>(i)], -1, 0.0))
               .matrix;
  }
  return QuantizedOperator{std::move(acc)};
}

ProcessIntegralReport processIntegral(const QProcess& proc, int rank,
                                      const RandomVariable& valuesByOrdinal,
                                      int tMax, int window, double tol) {
  if (window < 2) throw std::invalid_argument("window must be >= 2");
  if (tMax < rank) throw std::invalid_argument("tMax below the variable's rank");
  const PathDomain domain = proc.domain(rank);
  if (static_cast<std::uint64_t>(valuesByOrdinal.size()) != domain.size()) {
    throw std::invalid_argument("variable size must match the rank-t path space");
  }

  // distinct positive levels of f+ and f-
  auto levelEvents = [&](bool negative) {
    std::vector<std::pair<double, CylinderEvent>> levels;
    std::vector<double> distinct;
    for (int i = 0; i < valuesByOrdinal.size(); ++i) {
      const double v = negative ? -valuesByOrdinal(i) : valuesByOrdinal(i);
      if (v > 0.0) distinct.push_back(v);
    }
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (double level : distinct) {
      std::vector<std::uint64_t> indices;
      for (int i = 0; i < valuesByOrdinal.size(); ++i) {
        const double v = negative ? -valuesByOrdinal(i) : valuesByOrdinal(i);
        if (v >= level) indices.push_back(domain.indexAt(static_cast<std::uint64_t>(i)));
      }
      levels.emplace_back(level, CylinderEvent::fromIndices(domain, std::move(indices)));
    }
    return levels;
  };
  const auto plusLevels = levelEvents(false);
  const auto minusLevels = levelEvents(true);

  ProcessIntegralReport rep;
  rep.firstRank = rank;
  for (int t = rank; t <= tMax; ++t) {
    double integral = 0.0;
    double below = 0.0;
    for (const auto& [level, event] : plusLevels) {
      integral += (level - below) * localExpectation(proc, event, t);
      below = level;
    }
    below = 0.0;
    for (const auto& [level, event] : minusLevels) {
      integral -= (level - below) * localExpectation(proc, event, t);
      below = level;
    }
    rep.values.push_back(integral);
  }

  if (static_cast<int>(rep.values.size()) >= window) {
    const auto tail = rep.values.end() - window;
    const auto [lo, hi] = std::minmax_element(tail, rep.values.end());
    rep.trailingSpread = *hi - *lo;
    if (rep.trailingSpread <= tol) {
      rep.verdict = SuitabilityVerdict::Suitable;
      double mean = 0.0;
      for (auto it = tail; it != rep.values.end(); ++it) mean += *it;
      rep.limit = mean / window;
    }
  }
  return rep;
}

}  // namespace qproc
