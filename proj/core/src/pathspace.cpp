#include "qproc/pathspace.hpp"

#include <algorithm>
#include <stdexcept>

namespace qproc {

std::uint64_t pathCount(int m, int rank) {
  if (m < 1) throw std::invalid_argument("site count must be >= 1");
  if (rank < 0) throw std::invalid_argument("rank must be >= 0");
  std::uint64_t n = 1;
  for (int i = 0; i <= rank; ++i) {
    if (n > UINT64_MAX / static_cast<std::uint64_t>(m)) {
      throw std::overflow_error("path count overflow");
    }
    n *= static_cast<std::uint64_t>(m);
  }
  return n;
}

PathDomain::PathDomain(int m, int rank, std::optional<int> initialSite)
    : m_(m), rank_(rank), initialSite_(initialSite) {
  if (m < 1) throw std::invalid_argument("site count must be >= 1");
  if (rank < 0) throw std::invalid_argument("rank must be >= 0");
  if (initialSite_ && (*initialSite_ < 0 || *initialSite_ >= m)) {
    throw std::invalid_argument("fixed initial site out of range");
  }
  size_ = initialSite_ ? pathCount(m, rank) / static_cast<std::uint64_t>(m)
                       : pathCount(m, rank);
}

NPath PathDomain::pathAt(std::uint64_t ordinal) const {
  if (ordinal >= size_) throw std::out_of_range("path ordinal out of range");
  NPath p;
  p.sites.assign(static_cast<std::size_t>(rank_) + 1, 0);
  const int lowest = initialSite_ ? 1 : 0;
  if (initialSite_) p.sites[0] = *initialSite_;
  std::uint64_t v = ordinal;
  for (int pos = rank_; pos >= lowest; --pos) {
    p.sites[static_cast<std::size_t>(pos)] = static_cast<int>(v % m_);
    v /= static_cast<std::uint64_t>(m_);
  }
  return p;
}

std::uint64_t PathDomain::indexOf(const NPath& path) const {
  if (path.rank() != rank_) throw std::invalid_argument("path rank mismatch");
  if (initialSite_ && path.sites[0] != *initialSite_) {
    throw std::invalid_argument("path violates the fixed initial site");
  }
  std::uint64_t v = 0;
  for (int s : path.sites) {
    if (s < 0 || s >= m_) throw std::invalid_argument("site out of range");
    v = v * static_cast<std::uint64_t>(m_) + static_cast<std::uint64_t>(s);
  }
  return v;
}

std::uint64_t PathDomain::indexAt(std::uint64_t ordinal) const {
  if (ordinal >= size_) throw std::out_of_range("path ordinal out of range");
  if (!initialSite_) return ordinal;
  return static_cast<std::uint64_t>(*initialSite_) * size_ + ordinal;
}

std::uint64_t PathDomain::ordinalOf(std::uint64_t index) const {
  if (!admitsIndex(index)) throw std::out_of_range("path index not in domain");
  if (!initialSite_) return index;
  return index - static_cast<std::uint64_t>(*initialSite_) * size_;
}

bool PathDomain::admitsIndex(std::uint64_t index) const {
  if (!initialSite_) return index < size_;
  const std::uint64_t base = static_cast<std::uint64_t>(*initialSite_) * size_;
  return index >= base && index < base + size_;
}

int PathDomain::finalSiteOf(std::uint64_t ordinal) const {
  if (ordinal >= size_) throw std::out_of_range("path ordinal out of range");
  if (rank_ == 0) return initialSite_ ? *initialSite_ : static_cast<int>(ordinal);
  return static_cast<int>(ordinal % static_cast<std::uint64_t>(m_));
}

PathDomain PathDomain::extended(int extraRanks) const {
  if (extraRanks < 0) throw std::invalid_argument("extension must be >= 0");
  return PathDomain(m_, rank_ + extraRanks, initialSite_);
}

PathIndex encodePath(const NPath& path, int m) {
  if (path.rank() < 0) throw std::invalid_argument("empty path");
  return PathIndex{PathDomain(m, path.rank()).indexOf(path), path.rank()};
}

NPath decodePath(const PathIndex& index, int m) {
  return PathDomain(m, index.rank).pathAt(index.value);
}

std::vector<NPath> enumeratePaths(const PathDomain& domain, std::uint64_t cap) {
  if (domain.size() > cap) {
    throw BudgetExceeded(domain.m(), domain.rank(), domain.size(), cap);
  }
  std::vector<NPath> out;
  out.reserve(static_cast<std::size_t>(domain.size()));
  forEachPath(domain, [&](std::uint64_t, const NPath& p) { out.push_back(p); });
  return out;
}

std::vector<NPath> enumeratePaths(int m, int rank, std::uint64_t cap) {
  return enumeratePaths(PathDomain(m, rank), cap);
}

Rational pathMeasure(int m, int rank) {
  return Rational(1, checkedIntPow(m, rank + 1));
}

int flipCount(const NPath& path) {
  int flips = 0;
  for (std::size_t i = 1; i < path.sites.size(); ++i) {
    if (path.sites[i] != path.sites[i - 1]) ++flips;
  }
  return flips;
}

std::vector<int> twoSiteFlipVector(int n) {
  if (n < 0) throw std::invalid_argument("rank must be >= 0");
  if (n > 30) throw BudgetExceeded(2, n, std::uint64_t{1} << n, std::uint64_t{1} << 30);
  std::vector<int> c{0};  // c_0 = (0)
  for (int k = 0; k < n; ++k) {
    const std::size_t half = c.size();
    c.resize(2 * half);
    for (std::size_t j = 0; j < half; ++j) {
      c[2 * half - 1 - j] = c[j] + 1;
    }
  }
  return c;
}

std::pair<int, int> flipReflectionSides(int n, std::uint64_t j) {
  if (n < 0 || j >= (std::uint64_t{1} << n)) {
    throw std::invalid_argument("reflection index out of range");
  }
  const PathDomain next(2, n + 1, 0);
  const std::uint64_t mirrored = (std::uint64_t{1} << (n + 1)) - 1 - j;
  const int left = flipCount(next.pathAt(mirrored));
  const int right = flipCount(PathDomain(2, n, 0).pathAt(j)) + 1;
  return {left, right};
}

CylinderEvent CylinderEvent::empty(PathDomain domain) {
  CylinderEvent e(std::move(domain), kBitmapThreshold);
  e.members_ = std::vector<std::uint64_t>{};
  return e;
}

CylinderEvent CylinderEvent::full(PathDomain domain) {
  std::vector<std::uint64_t> all;
  all.reserve(static_cast<std::size_t>(domain.size()));
  for (std::uint64_t ord = 0; ord < domain.size(); ++ord) {
    all.push_back(domain.indexAt(ord));
  }
  return fromIndices(std::move(domain), std::move(all));
}

CylinderEvent CylinderEvent::fromIndices(PathDomain domain,
                                         std::vector<std::uint64_t> indices,
                                         std::uint64_t bitmapThreshold) {
  for (std::uint64_t idx : indices) {
    if (!domain.admitsIndex(idx)) {
      throw std::invalid_argument("event member outside its path domain");
    }
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  CylinderEvent e(std::move(domain), bitmapThreshold);
  e.adoptSorted(std::move(indices));
  return e;
}

CylinderEvent CylinderEvent::fromPaths(PathDomain domain,
                                       const std::vector<NPath>& paths) {
  std::vector<std::uint64_t> indices;
  indices.reserve(paths.size());
  for (const NPath& p : paths) indices.push_back(domain.indexOf(p));
  return fromIndices(std::move(domain), std::move(indices));
}

void CylinderEvent::adoptSorted(std::vector<std::uint64_t> sortedIndices) {
  if (sortedIndices.size() >= bitmapThreshold_) {
    std::vector<bool> bits(static_cast<std::size_t>(domain_.size()), false);
    for (std::uint64_t idx : sortedIndices) {
      bits[static_cast<std::size_t>(domain_.ordinalOf(idx))] = true;
    }
    bitmapCount_ = sortedIndices.size();
    members_ = std::move(bits);
  } else {
    bitmapCount_ = 0;
    members_ = std::move(sortedIndices);
  }
}

std::uint64_t CylinderEvent::size() const {
  if (const auto* v = std::get_if<std::vector<std::uint64_t>>(&members_)) {
    return v->size();
  }
  return bitmapCount_;
}

bool CylinderEvent::usesBitmap() const {
  return std::holds_alternative<std::vector<bool>>(members_);
}

bool CylinderEvent::contains(std::uint64_t index) const {
  if (!domain_.admitsIndex(index)) return false;
  if (const auto* v = std::get_if<std::vector<std::uint64_t>>(&members_)) {
    return std::binary_search(v->begin(), v->end(), index);
  }
  return std::get<std::vector<bool>>(members_)[static_cast<std::size_t>(
      domain_.ordinalOf(index))];
}

std::vector<std::uint64_t> CylinderEvent::indices() const {
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(size()));
  forEachIndex([&](std::uint64_t idx) { out.push_back(idx); });
  return out;
}

CylinderEvent CylinderEvent::extended(int extraRanks, std::uint64_t cap) const {
  const PathDomain target = domain_.extended(extraRanks);
  if (target.size() > cap) {
    throw BudgetExceeded(target.m(), target.rank(), target.size(), cap);
  }
  std::uint64_t stride = 1;  // m^k continuations per member
  for (int i = 0; i < extraRanks; ++i) stride *= static_cast<std::uint64_t>(domain_.m());
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(size() * stride));
  forEachIndex([&](std::uint64_t idx) {
    const std::uint64_t base = idx * stride;
    for (std::uint64_t k = 0; k < stride; ++k) out.push_back(base + k);
  });
  return fromIndices(target, std::move(out), bitmapThreshold_);
}

CylinderEvent CylinderEvent::complement() const {
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(domain_.size() - size()));
  for (std::uint64_t ord = 0; ord < domain_.size(); ++ord) {
    const std::uint64_t idx = domain_.indexAt(ord);
    if (!contains(idx)) out.push_back(idx);
  }
  return fromIndices(domain_, std::move(out), bitmapThreshold_);
}

CylinderEvent CylinderEvent::unionWith(const CylinderEvent& other) const {
  if (!(domain_ == other.domain_)) throw std::invalid_argument("domain mismatch");
  std::vector<std::uint64_t> out = indices();
  const std::vector<std::uint64_t> rhs = other.indices();
  out.insert(out.end(), rhs.begin(), rhs.end());
  return fromIndices(domain_, std::move(out), bitmapThreshold_);
}

CylinderEvent CylinderEvent::intersectWith(const CylinderEvent& other) const {
  if (!(domain_ == other.domain_)) throw std::invalid_argument("domain mismatch");
  std::vector<std::uint64_t> out;
  forEachIndex([&](std::uint64_t idx) {
    if (other.contains(idx)) out.push_back(idx);
  });
  return fromIndices(domain_, std::move(out), bitmapThreshold_);
}

bool CylinderEvent::disjointWith(const CylinderEvent& other) const {
  if (!(domain_ == other.domain_)) throw std::invalid_argument("domain mismatch");
  bool overlap = false;
  forEachIndex([&](std::uint64_t idx) {
    if (!overlap && other.contains(idx)) overlap = true;
  });
  return !overlap;
}

Rational CylinderEvent::classicalMeasure() const {
  return Rational(static_cast<std::int64_t>(size()),
                  static_cast<std::int64_t>(domain_.size()));
}

}  // namespace qproc
