#include "qproc/process.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace qproc {

namespace {

// applies U(to, from) to v one step at a time
ComplexVector evolve(const FiniteUnitarySystem& sys, ComplexVector v, int from, int to) {
  for (int k = from; k < to; ++k) v = sys.step(k) * v;
  return v;
}

ComplexVector maskedOff(ComplexVector v, int site) {
  v(site) = Complex(0.0, 0.0);
  return v;
}

ComplexVector keptOnly(const ComplexVector& v, int site) {
  ComplexVector out = ComplexVector::Zero(v.size());
  out(site) = v(site);
  return out;
}

}  // namespace

QProcess::QProcess(FiniteUnitarySystem sys, InitialState psi,
                   std::optional<int> fixedInitialSite, std::uint64_t enumerationCap)
    : sys_(std::move(sys)), psi_(std::move(psi)), fixed_(fixedInitialSite),
      cap_(enumerationCap) {
  if (psi_.dim() != sys_.dim()) throw std::invalid_argument("dimension mismatch");
  if (fixed_ && (*fixed_ < 0 || *fixed_ >= sys_.dim())) {
    throw std::invalid_argument("fixed initial site out of range");
  }
  if (fixed_ && std::abs(std::abs(psi_.component(*fixed_)) - 1.0) > kTraceTol) {
    throw std::invalid_argument("fixed initial site requires |ψ(site)| = 1");
  }
}

std::shared_ptr<const DecoherenceState> QProcess::state(int rank) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(rank);
  if (it != cache_.end()) return it->second;
  auto built = std::make_shared<const DecoherenceState>(
      buildDecoherence(sys_, psi_, rank, fixed_, cap_));
  cache_.emplace(rank, built);
  return built;
}

ComplexVector QProcess::effectiveInitialVector() const {
  if (!fixed_) return psi_.vector();
  ComplexVector v = ComplexVector::Zero(sys_.dim());
  v(*fixed_) = psi_.component(*fixed_);
  return v;
}

ComplexVector EventFamily::weightedSiteSums(const QProcess& proc, int rank) const {
  const auto state = proc.state(rank);
  const PathDomain& domain = state->domain();
  ComplexVector sums = ComplexVector::Zero(domain.m());
  forEachPath(domain, [&](std::uint64_t ord, const NPath& p) {
    const double w = coverage(rank, p);
    if (w != 0.0) sums(domain.finalSiteOf(ord)) += w * state->amplitudeAt(ord);
  });
  return sums;
}

double localExpectation(const QProcess& proc, const EventFamily& family, int rank) {
  if (family.m() != proc.m()) throw std::invalid_argument("site-count mismatch");
  if (rank < 0) throw std::invalid_argument("rank must be >= 0");
  if (family.maxRank() && rank > *family.maxRank()) {
    throw std::invalid_argument("family does not define coverage at this rank");
  }
  return family.weightedSiteSums(proc, rank).squaredNorm();
}

double localExpectation(const QProcess& proc, const CylinderEvent& event, int rank) {
  const PathDomain& domain = event.domain();
  if (domain.m() != proc.m()) throw std::invalid_argument("site-count mismatch");
  if (rank < domain.rank()) {
    throw std::invalid_argument("evaluation rank below the event's native rank");
  }
  ComplexVector s = classOperator(proc.system(), event) * proc.effectiveInitialVector();
  s = evolve(proc.system(), std::move(s), domain.rank(), rank);
  return s.squaredNorm();
}

double SuitabilityReport::maxSpread() const {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

namespace {

void finalizeReport(SuitabilityReport& rep, bool budgetHit) {
  const int window = rep.window;
  if (static_cast<int>(rep.values.size()) >= window) {
    const auto tail = rep.values.end() - window;
    const auto [lo, hi] = std::minmax_element(tail, rep.values.end());
    rep.trailingSpread = *hi - *lo;
  }
  if (budgetHit) {
    rep.verdict = SuitabilityVerdict::BudgetExhausted;
    return;
  }
  if (static_cast<int>(rep.values.size()) < window) {
    rep.verdict = SuitabilityVerdict::NotConverged;
    return;
  }
  if (rep.trailingSpread <= rep.tol) {
    rep.verdict = SuitabilityVerdict::Suitable;
    double mean = 0.0;
    for (auto it = rep.values.end() - window; it != rep.values.end(); ++it) mean += *it;
    rep.limit = mean / window;
  } else {
    rep.verdict = SuitabilityVerdict::NotConverged;
  }
}

}  // namespace

SuitabilityReport evaluateSuitability(const QProcess& proc, const EventFamily& family,
                                      int tMax, int window, double tol) {
  if (window < 2) throw std::invalid_argument("window must be >= 2");
  SuitabilityReport rep;
  rep.window = window;
  rep.tol = tol;
  rep.firstRank = 0;
  int last = tMax;
  if (family.maxRank()) last = std::min(last, *family.maxRank());
  bool budgetHit = false;
  for (int t = 0; t <= last; ++t) {
    try {
      rep.values.push_back(localExpectation(proc, family, t));
    } catch (const BudgetExceeded&) {
      budgetHit = true;
      break;
    }
  }
  finalizeReport(rep, budgetHit);
  return rep;
}

SuitabilityReport evaluateSuitability(const QProcess& proc, const CylinderEvent& event,
                                      int tMax, int window, double tol) {
  if (window < 2) throw std::invalid_argument("window must be >= 2");
  if (tMax < event.domain().rank()) {
    throw std::invalid_argument("tMax below the event's native rank");
  }
  SuitabilityReport rep;
  rep.window = window;
  rep.tol = tol;
  rep.firstRank = event.domain().rank();
  for (int t = rep.firstRank; t <= tMax; ++t) {
    rep.values.push_back(localExpectation(proc, event, t));
  }
  finalizeReport(rep, false);
  return rep;
}

ConsistencyReport verifyConsistency(const QProcess& proc, int rank,
                                    std::uint64_t samples, std::uint64_t seed) {
  const auto cur = proc.state(rank);
  const auto next = proc.state(rank + 1);
  const std::uint64_t n = cur->domain().size();
  const int m = proc.m();

  auto residualAt = [&](std::uint64_t ordA, std::uint64_t ordB) {
    Complex lhs(0.0, 0.0);
    if (cur->finalSite(ordA) == cur->finalSite(ordB)) {
      lhs = cur->amplitudeAt(ordA) * std::conj(cur->amplitudeAt(ordB));
    }
    Complex rhs(0.0, 0.0);
    const std::uint64_t baseA = ordA * static_cast<std::uint64_t>(m);
    const std::uint64_t baseB = ordB * static_cast<std::uint64_t>(m);
    for (int j = 0; j < m; ++j) {
      rhs += next->amplitudeAt(baseA + j) * std::conj(next->amplitudeAt(baseB + j));
    }
    return std::abs(lhs - rhs);
  };

  ConsistencyReport rep;
  rep.rank = rank;
  if (n * n <= samples) {
    rep.exhaustive = true;
    for (std::uint64_t a = 0; a < n; ++a) {
      for (std::uint64_t b = 0; b < n; ++b) {
        rep.maxResidual = std::max(rep.maxResidual, residualAt(a, b));
        ++rep.pairsChecked;
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
    for (std::uint64_t k = 0; k < samples; ++k) {
      rep.maxResidual = std::max(rep.maxResidual, residualAt(pick(rng), pick(rng)));
      ++rep.pairsChecked;
    }
  }
  return rep;
}

double grade2Residual(const DecoherenceState& state, const CylinderEvent& a,
                      const CylinderEvent& b, const CylinderEvent& c) {
  if (!a.disjointWith(b) || !a.disjointWith(c) || !b.disjointWith(c)) {
    throw std::invalid_argument("grade-2 identity needs mutually disjoint events");
  }
  const CylinderEvent ab = a.unionWith(b);
  const CylinderEvent ac = a.unionWith(c);
  const CylinderEvent bc = b.unionWith(c);
  const CylinderEvent abc = ab.unionWith(c);
  return qMeasure(state, abc) - qMeasure(state, ab) - qMeasure(state, ac) -
         qMeasure(state, bc) + qMeasure(state, a) + qMeasure(state, b) +
         qMeasure(state, c);
}

double grade2Residual(const QProcess& proc, const EventFamily& a,
                      const EventFamily& b, const EventFamily& c, int rank) {
  const ComplexVector sa = a.weightedSiteSums(proc, rank);
  const ComplexVector sb = b.weightedSiteSums(proc, rank);
  const ComplexVector sc = c.weightedSiteSums(proc, rank);
  return (sa + sb + sc).squaredNorm() - (sa + sb).squaredNorm() -
         (sa + sc).squaredNorm() - (sb + sc).squaredNorm() + sa.squaredNorm() +
         sb.squaredNorm() + sc.squaredNorm();
}

namespace {

class VisitsFamily final : public EventFamily {
 public:
  VisitsFamily(int m, int site)
      : EventFamily("visitsSite(" + std::to_string(site) + ")", EventKind::Tail, m),
        site_(site) {}

  // the prefix either already hit the site, or the uniform tail hits it
  // with conditional probability 1; both give coverage 1
  double coverage(int, const NPath&) const override { return 1.0; }

  ComplexVector weightedSiteSums(const QProcess& proc, int rank) const override {
    return evolve(proc.system(), proc.effectiveInitialVector(), 0, rank);
  }

  std::optional<Rational> classicalMeasure() const override { return Rational(1); }

 private:
  int site_;
};

class NeverVisitsFamily final : public EventFamily {
 public:
  NeverVisitsFamily(int m, int site)
      : EventFamily("neverVisitsSite(" + std::to_string(site) + ")", EventKind::Tail, m) {}

  double coverage(int, const NPath&) const override { return 0.0; }

  ComplexVector weightedSiteSums(const QProcess& proc, int) const override {
    return ComplexVector::Zero(proc.m());
  }

  std::optional<Rational> classicalMeasure() const override { return Rational(0); }
};

class FirstVisitFamily final : public EventFamily {
 public:
  FirstVisitFamily(int m, int site, int time)
      : EventFamily("firstVisitAt(" + std::to_string(site) + "," + std::to_string(time) + ")",
                    EventKind::Cylinder, m),
        site_(site), time_(time) {
    if (site < 0 || site >= m) throw std::invalid_argument("site out of range");
    if (time < 0) throw std::invalid_argument("time must be >= 0");
  }

  double coverage(int rank, const NPath& prefix) const override {
    const int guarded = std::min(rank, time_ - 1);
    for (int i = 0; i <= guarded; ++i) {
      if (prefix.sites[static_cast<std::size_t>(i)] == site_) return 0.0;
    }
    if (rank >= time_) {
      return prefix.sites[static_cast<std::size_t>(time_)] == site_ ? 1.0 : 0.0;
    }
    // remaining guard coordinates, then the visit itself
    double q = 1.0 / m();
    const double stay = static_cast<double>(m() - 1) / m();
    for (int i = 0; i < time_ - 1 - rank; ++i) q *= stay;
    return q;
  }

  ComplexVector weightedSiteSums(const QProcess& proc, int rank) const override {
    const FiniteUnitarySystem& sys = proc.system();
    ComplexVector v = proc.effectiveInitialVector();
    if (time_ > 0) v = maskedOff(std::move(v), site_);
    else v = keptOnly(v, site_);
    const int guardedSteps = std::min(rank, time_ - 1);
    for (int k = 1; k <= guardedSteps; ++k) {
      v = maskedOff(sys.step(k - 1) * v, site_);
    }
    if (rank < time_) {
      double q = 1.0 / m();
      const double stay = static_cast<double>(m() - 1) / m();
      for (int i = 0; i < time_ - 1 - rank; ++i) q *= stay;
      return q * v;
    }
    if (time_ > 0) v = keptOnly(sys.step(time_ - 1) * v, site_);
    return evolve(sys, std::move(v), time_, rank);
  }

  std::optional<Rational> classicalMeasure() const override {
    return Rational(checkedIntPow(m() - 1, time_), checkedIntPow(m(), time_ + 1));
  }

 private:
  int site_;
  int time_;
};

class PositionFamily final : public EventFamily {
 public:
  PositionFamily(int m, int time, int site)
      : EventFamily("positionAt(" + std::to_string(time) + "," + std::to_string(site) + ")",
                    EventKind::Cylinder, m),
        time_(time), site_(site) {
    if (site < 0 || site >= m) throw std::invalid_argument("site out of range");
    if (time < 0) throw std::invalid_argument("time must be >= 0");
  }

  double coverage(int rank, const NPath& prefix) const override {
    if (rank >= time_) {
      return prefix.sites[static_cast<std::size_t>(time_)] == site_ ? 1.0 : 0.0;
    }
    return 1.0 / m();
  }

  ComplexVector weightedSiteSums(const QProcess& proc, int rank) const override {
    const FiniteUnitarySystem& sys = proc.system();
    if (rank < time_) {
      return evolve(sys, proc.effectiveInitialVector(), 0, rank) / double(m());
    }
    ComplexVector v = evolve(sys, proc.effectiveInitialVector(), 0, time_);
    v = keptOnly(v, site_);
    return evolve(sys, std::move(v), time_, rank);
  }

  std::optional<Rational> classicalMeasure() const override {
    return Rational(1, m());
  }

 private:
  int time_;
  int site_;
};

class SingletonFamily final : public EventFamily {
 public:
  SingletonFamily(int m, NPath prefix)
      : EventFamily("singleton(rank " + std::to_string(prefix.rank()) + ")",
                    EventKind::Countable, m),
        prefix_(std::move(prefix)) {
    if (prefix_.rank() < 0) throw std::invalid_argument("empty singleton prefix");
    for (int s : prefix_.sites) {
      if (s < 0 || s >= m) throw std::invalid_argument("prefix site out of range");
    }
  }

  const NPath& prefix() const { return prefix_; }

  // shrinking-cylinder approximation of the null singleton: full
  // coverage down the defining prefix, m^-(t-n) on its extensions
  double coverage(int rank, const NPath& path) const override {
    const int upTo = std::min(rank, prefix_.rank());
    for (int i = 0; i <= upTo; ++i) {
      if (path.sites[static_cast<std::size_t>(i)] != prefix_.sites[static_cast<std::size_t>(i)]) {
        return 0.0;
      }
    }
    double w = 1.0;
    for (int i = prefix_.rank(); i < rank; ++i) w /= m();
    return w;
  }

  ComplexVector weightedSiteSums(const QProcess& proc, int rank) const override {
    const FiniteUnitarySystem& sys = proc.system();
    const ComplexVector psiEff = proc.effectiveInitialVector();
    if (rank <= prefix_.rank()) {
      NPath truncated;
      truncated.sites.assign(prefix_.sites.begin(), prefix_.sites.begin() + rank + 1);
      const Complex a = pathWeight(sys, truncated) * psiEff(truncated.sites.front());
      ComplexVector s = ComplexVector::Zero(m());
      s(truncated.sites.back()) = a;
      return s;
    }
    const Complex a = pathWeight(sys, prefix_) * psiEff(prefix_.sites.front());
    ComplexVector v = ComplexVector::Zero(m());
    v(prefix_.sites.back()) = a;
    v = evolve(sys, std::move(v), prefix_.rank(), rank);
    double w = 1.0;
    for (int i = prefix_.rank(); i < rank; ++i) w /= m();
    return w * v;
  }

  std::optional<Rational> classicalMeasure() const override { return Rational(0); }

 private:
  NPath prefix_;
};

bool isAncestorOrEqual(const NPath& a, const NPath& b) {
  if (a.rank() > b.rank()) return false;
  for (std::size_t i = 0; i < a.sites.size(); ++i) {
    if (a.sites[i] != b.sites[i]) return false;
  }
  return true;
}

class CountableFamily final : public EventFamily {
 public:
  CountableFamily(int m, std::vector<NPath> prefixes)
      : EventFamily("countableSet(" + std::to_string(prefixes.size()) + " members)",
                    EventKind::Countable, m) {
    if (prefixes.empty()) throw std::invalid_argument("countable set needs members");
    for (std::size_t i = 0; i < prefixes.size(); ++i) {
      for (std::size_t j = i + 1; j < prefixes.size(); ++j) {
        if (isAncestorOrEqual(prefixes[i], prefixes[j]) ||
            isAncestorOrEqual(prefixes[j], prefixes[i])) {
          throw std::invalid_argument("countable-set prefixes must not be nested");
        }
      }
    }
    maxMemberRank_ = 0;
    for (NPath& p : prefixes) {
      maxMemberRank_ = std::max(maxMemberRank_, p.rank());
      members_.push_back(std::make_shared<SingletonFamily>(m, std::move(p)));
    }
  }

  int maxMemberRank() const { return maxMemberRank_; }

  double coverage(int rank, const NPath& path) const override {
    double w = 0.0;
    for (const auto& member : members_) w += member->coverage(rank, path);
    return std::min(w, 1.0);
  }

  ComplexVector weightedSiteSums(const QProcess& proc, int rank) const override {
    if (rank < maxMemberRank_) {
      // ancestor ranks can clamp; fall back to direct enumeration
      return EventFamily::weightedSiteSums(proc, rank);
    }
    ComplexVector s = ComplexVector::Zero(m());
    for (const auto& member : members_) s += member->weightedSiteSums(proc, rank);
    return s;
  }

  std::optional<Rational> classicalMeasure() const override { return Rational(0); }

 private:
  std::vector<std::shared_ptr<const SingletonFamily>> members_;
  int maxMemberRank_ = 0;
};

class ComplementCountableFamily final : public EventFamily {
 public:
  ComplementCountableFamily(int m, std::vector<NPath> prefixes)
      : EventFamily("complementOfCountable", EventKind::Complement, m),
        inner_(m, std::move(prefixes)) {}

  double coverage(int rank, const NPath& path) const override {
    return 1.0 - inner_.coverage(rank, path);
  }

  ComplexVector weightedSiteSums(const QProcess& proc, int rank) const override {
    if (rank < inner_.maxMemberRank()) {
      return EventFamily::weightedSiteSums(proc, rank);
    }
    return evolve(proc.system(), proc.effectiveInitialVector(), 0, rank) -
           inner_.weightedSiteSums(proc, rank);
  }

  std::optional<Rational> classicalMeasure() const override { return Rational(1); }

 private:
  CountableFamily inner_;
};

class TableFamily final : public EventFamily {
 public:
  TableFamily(int m, std::string name,
              std::map<std::pair<int, std::uint64_t>, double> entries, int maxRank)
      : EventFamily(std::move(name), EventKind::Cylinder, m),
        entries_(std::move(entries)), maxRank_(maxRank) {
    for (const auto& [key, value] : entries_) {
      if (value < 0.0 || value > 1.0) {
        throw std::invalid_argument("coverage values must lie in [0, 1]");
      }
      if (key.first < 0 || key.first > maxRank_) {
        throw std::invalid_argument("coverage entry rank out of range");
      }
    }
  }

  std::optional<int> maxRank() const override { return maxRank_; }

  double coverage(int rank, const NPath& path) const override {
    const std::uint64_t index = PathDomain(m(), rank).indexOf(path);
    const auto it = entries_.find({rank, index});
    return it == entries_.end() ? 0.0 : it->second;
  }

 private:
  std::map<std::pair<int, std::uint64_t>, double> entries_;
  int maxRank_;
};

}  // namespace

FamilyPtr visitsSite(int m, int site) {
  if (site < 0 || site >= m) throw std::invalid_argument("site out of range");
  return std::make_shared<VisitsFamily>(m, site);
}

FamilyPtr neverVisitsSite(int m, int site) {
  if (site < 0 || site >= m) throw std::invalid_argument("site out of range");
  return std::make_shared<NeverVisitsFamily>(m, site);
}

FamilyPtr firstVisitAt(int m, int site, int time) {
  return std::make_shared<FirstVisitFamily>(m, site, time);
}

FamilyPtr positionAt(int m, int time, int site) {
  return std::make_shared<PositionFamily>(m, time, site);
}

FamilyPtr singletonPath(int m, NPath prefix) {
  return std::make_shared<SingletonFamily>(m, std::move(prefix));
}

FamilyPtr countableSet(int m, std::vector<NPath> prefixes) {
  return std::make_shared<CountableFamily>(m, std::move(prefixes));
}

FamilyPtr complementOfCountable(int m, std::vector<NPath> prefixes) {
  return std::make_shared<ComplementCountableFamily>(m, std::move(prefixes));
}

FamilyPtr coverageTableFamily(int m, std::string name,
                              std::map<std::pair<int, std::uint64_t>, double> entries,
                              int maxRank) {
  return std::make_shared<TableFamily>(m, std::move(name), std::move(entries), maxRank);
}

std::vector<FamilyCatalogEntry> builtinFamilies(int m) {
  if (m < 1) throw std::invalid_argument("site count must be >= 1");
  return {
      {"visitsSite", "site", "the path reaches the site at some time"},
      {"neverVisitsSite", "site", "the path avoids the site forever"},
      {"firstVisitAt", "site,time", "first visit to the site happens exactly at the time"},
      {"positionAt", "time,site", "the path sits at the site at the given time"},
      {"singleton", "prefix", "one fixed path, approximated by its shrinking cylinders"},
      {"countable", "prefixes", "a countable union of fixed paths"},
      {"complementOfCountable", "prefixes", "everything but a countable set of paths"},
  };
}

double martingaleResidual(const EventFamily& family, int rank, std::uint64_t cap) {
  const PathDomain domain(family.m(), rank);
  if (domain.size() * static_cast<std::uint64_t>(family.m()) > cap) {
    throw BudgetExceeded(family.m(), rank + 1, domain.size() * family.m(), cap);
  }
  double worst = 0.0;
  forEachPath(domain, [&](std::uint64_t, const NPath& p) {
    const double parent = family.coverage(rank, p);
    NPath child = p;
    child.sites.push_back(0);
    double mean = 0.0;
    for (int j = 0; j < family.m(); ++j) {
      child.sites.back() = j;
      mean += family.coverage(rank + 1, child);
    }
    mean /= family.m();
    worst = std::max(worst, std::abs(parent - mean));
  });
  return worst;
}

}  // namespace qproc
