#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "qproc/errors.hpp"
#include "qproc/exact.hpp"

namespace qproc {

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kBitmapThreshold = std::uint64_t{1} << 16;

// An n-path: the site string γ0 γ1 ... γn. rank() is n, so a path always
// has rank+1 entries.
struct NPath {
  std::vector<int> sites;

  NPath() = default;
  explicit NPath(std::vector<int> s) : sites(std::move(s)) {}

  int rank() const { return static_cast<int>(sites.size()) - 1; }
  friend bool operator==(const NPath&, const NPath&) = default;
};

// m^(n+1), overflow-checked.
std::uint64_t pathCount(int m, int rank);

// Canonical integer encoding of an n-path: γ0 is the most significant
// base-m digit, γn the least significant. With γ0 pinned to 0 this makes
// the two-site spaces coincide with {0, ..., 2^n - 1}.
struct PathIndex {
  std::uint64_t value = 0;
  int rank = 0;

  friend bool operator==(const PathIndex&, const PathIndex&) = default;
};

PathIndex encodePath(const NPath& path, int m);
NPath decodePath(const PathIndex& index, int m);

// The finite path space over m sites at a fixed rank, optionally
// conditioned on a fixed initial site γ0 = s. Ordinals number the
// admissible paths 0..size()-1 in increasing index order; for a free
// domain ordinal and index coincide.
class PathDomain {
 public:
  PathDomain(int m, int rank, std::optional<int> initialSite = std::nullopt);

  int m() const { return m_; }
  int rank() const { return rank_; }
  std::optional<int> initialSite() const { return initialSite_; }

  std::uint64_t size() const { return size_; }

  NPath pathAt(std::uint64_t ordinal) const;
  std::uint64_t indexOf(const NPath& path) const;
  std::uint64_t ordinalOf(std::uint64_t index) const;
  std::uint64_t indexAt(std::uint64_t ordinal) const;
  bool admitsIndex(std::uint64_t index) const;
  int finalSiteOf(std::uint64_t ordinal) const;

  // ν(cyl(γ)): uniform over admissible paths.
  Rational cylinderWeight() const { return Rational(1, static_cast<std::int64_t>(size_)); }

  // Same m and initial-site condition, rank increased by extraRanks.
  PathDomain extended(int extraRanks) const;

  friend bool operator==(const PathDomain&, const PathDomain&) = default;

 private:
  int m_;
  int rank_;
  std::optional<int> initialSite_;
  std::uint64_t size_;
};

// Visits every admissible path in increasing index order, maintaining the
// site string incrementally. f(ordinal, path).
template <typename F>
void forEachPath(const PathDomain& domain, F&& f) {
  NPath path = domain.pathAt(0);
  const int m = domain.m();
  const int lowest = domain.initialSite() ? 1 : 0;
  const std::uint64_t n = domain.size();
  for (std::uint64_t ord = 0; ord < n; ++ord) {
    f(ord, const_cast<const NPath&>(path));
    // odometer increment over the free digits
    for (int pos = path.rank(); pos >= lowest; --pos) {
      if (++path.sites[pos] < m) break;
      path.sites[pos] = 0;
    }
  }
}

// All of Ω_n for a free domain, in increasing index order.
std::vector<NPath> enumeratePaths(int m, int rank,
                                  std::uint64_t cap = kDefaultEnumerationCap);
std::vector<NPath> enumeratePaths(const PathDomain& domain,
                                  std::uint64_t cap = kDefaultEnumerationCap);

// ν(cyl(γ)) = m^-(n+1) for the free product measure.
Rational pathMeasure(int m, int rank);

// Number of positions i with γi != γi+1.
int flipCount(const NPath& path);

// Two-site flip-count vector c_n over {0,...,2^n-1}, paths read as
// 0 b1...bn. Built by the reflection recursion
// c_{n+1}(2^{n+1}-1-j) = c_n(j) + 1.
std::vector<int> twoSiteFlipVector(int n);

// Both sides of the reflection identity at (n, j): left is
// c_{n+1}(2^{n+1}-1-j), right is c_n(j) + 1.
std::pair<int, int> flipReflectionSides(int n, std::uint64_t j);

// A subset of a rank-n path space. Small events are kept as sorted index
// sets; events at or above bitmapThreshold members switch to a bitmap
// over ordinals.
class CylinderEvent {
 public:
  static CylinderEvent empty(PathDomain domain);
  static CylinderEvent full(PathDomain domain);
  static CylinderEvent fromIndices(PathDomain domain,
                                   std::vector<std::uint64_t> indices,
                                   std::uint64_t bitmapThreshold = kBitmapThreshold);
  static CylinderEvent fromPaths(PathDomain domain, const std::vector<NPath>& paths);

  template <typename Pred>
  static CylinderEvent fromPredicate(PathDomain domain, Pred&& pred,
                                     std::uint64_t bitmapThreshold = kBitmapThreshold) {
    std::vector<std::uint64_t> indices;
    forEachPath(domain, [&](std::uint64_t, const NPath& p) {
      if (pred(p)) indices.push_back(domain.indexOf(p));
    });
    return fromIndices(std::move(domain), std::move(indices), bitmapThreshold);
  }

  const PathDomain& domain() const { return domain_; }
  std::uint64_t size() const;
  bool isEmpty() const { return size() == 0; }
  bool contains(std::uint64_t index) const;
  bool usesBitmap() const;

  // Visits member indices in increasing order.
  template <typename F>
  void forEachIndex(F&& f) const {
    if (const auto* v = std::get_if<std::vector<std::uint64_t>>(&members_)) {
      for (std::uint64_t idx : *v) f(idx);
    } else {
      const auto& bits = std::get<std::vector<bool>>(members_);
      for (std::uint64_t ord = 0; ord < bits.size(); ++ord) {
        if (bits[ord]) f(domain_.indexAt(ord));
      }
    }
  }

  std::vector<std::uint64_t> indices() const;

  // Extends every member by all m^k continuations; the classical measure
  // is preserved exactly.
  CylinderEvent extended(int extraRanks,
                         std::uint64_t cap = kDefaultEnumerationCap) const;

  CylinderEvent complement() const;
  CylinderEvent unionWith(const CylinderEvent& other) const;
  CylinderEvent intersectWith(const CylinderEvent& other) const;
  bool disjointWith(const CylinderEvent& other) const;

  // ν(A) = |A| / |Ω_n|, exact.
  Rational classicalMeasure() const;

 private:
  CylinderEvent(PathDomain domain, std::uint64_t bitmapThreshold)
      : domain_(std::move(domain)), bitmapThreshold_(bitmapThreshold) {}

  void adoptSorted(std::vector<std::uint64_t> sortedIndices);

  PathDomain domain_;
  std::uint64_t bitmapThreshold_ = kBitmapThreshold;
  // sorted full-width indices, or bitmap over ordinals
  std::variant<std::vector<std::uint64_t>, std::vector<bool>> members_;
  std::uint64_t bitmapCount_ = 0;
};

}  // namespace qproc
