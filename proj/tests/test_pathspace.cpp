#include <doctest.h>

#include <algorithm>
#include <vector>

#include "qproc/pathspace.hpp"

using namespace qproc;

namespace {

// independent odometer enumeration, used as the oracle for enumeratePaths
std::vector<std::vector<int>> bruteForcePaths(int m, int rank) {
  std::vector<std::vector<int>> all;
  std::vector<int> digits(static_cast<std::size_t>(rank) + 1, 0);
  while (true) {
    all.push_back(digits);
    int pos = rank;
    while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == m) {
      digits[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return all;
}

}  // namespace

TEST_CASE("enumeratePaths lists the whole space in index order") {
  const auto base = enumeratePaths(2, 0);
  REQUIRE(base.size() == 2);
  CHECK(base[0].sites == std::vector<int>{0});
  CHECK(base[1].sites == std::vector<int>{1});

  const auto rank1 = enumeratePaths(2, 1);
  REQUIRE(rank1.size() == 4);
  CHECK(rank1[0].sites == std::vector<int>{0, 0});
  CHECK(rank1[1].sites == std::vector<int>{0, 1});
  CHECK(rank1[2].sites == std::vector<int>{1, 0});
  CHECK(rank1[3].sites == std::vector<int>{1, 1});

  const auto ternary = enumeratePaths(3, 2);
  REQUIRE(ternary.size() == 27);
  CHECK(ternary.front().sites == std::vector<int>{0, 0, 0});
  CHECK(ternary.back().sites == std::vector<int>{2, 2, 2});
  const auto oracle = bruteForcePaths(3, 2);
  for (std::size_t k = 0; k < ternary.size(); ++k) {
    CHECK(ternary[k].sites == oracle[k]);
  }
}

TEST_CASE("enumeration budget failure names m, n and the cap") {
  try {
    enumeratePaths(2, 10, 512);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.m == 2);
    CHECK(e.rank == 10);
    CHECK(e.required == 2048);
    CHECK(e.cap == 512);
    const std::string msg = e.what();
    CHECK(msg.find("m=2") != std::string::npos);
    CHECK(msg.find("n=10") != std::string::npos);
    CHECK(msg.find("512") != std::string::npos);
  }
}

TEST_CASE("pathMeasure is the exact uniform product weight") {
  CHECK(pathMeasure(2, 1) == Rational(1, 4));
  CHECK(pathMeasure(2, 3) == Rational(1, 16));
  CHECK(pathMeasure(3, 0) == Rational(1, 3));
}

TEST_CASE("path measures sum to exactly 1 over the space") {
  for (int m = 2; m <= 3; ++m) {
    for (int n = 0; n <= 4; ++n) {
      Rational sum(0);
      forEachPath(PathDomain(m, n), [&](std::uint64_t, const NPath&) {
        sum += pathMeasure(m, n);
      });
      CHECK(sum == Rational(1));
    }
  }
}

TEST_CASE("flip counts") {
  // two-site rank-3 table over the free digits with γ0 = 0
  const PathDomain walk(2, 3, 0);
  const std::vector<int> expected{0, 1, 2, 1, 2, 3, 2, 1};
  for (std::uint64_t j = 0; j < walk.size(); ++j) {
    CHECK(flipCount(walk.pathAt(j)) == expected[static_cast<std::size_t>(j)]);
  }
  CHECK(flipCount(NPath({0, 0, 0, 0})) == 0);
  CHECK(flipCount(NPath({0, 1, 0, 1})) == 3);
}

TEST_CASE("flip vector reflection recursion") {
  CHECK(twoSiteFlipVector(0) == std::vector<int>{0});
  CHECK(twoSiteFlipVector(1) == std::vector<int>{0, 1});
  CHECK(twoSiteFlipVector(2) == std::vector<int>{0, 1, 2, 1});
  CHECK(twoSiteFlipVector(3) == std::vector<int>{0, 1, 2, 1, 2, 3, 2, 1});

  // identity against brute-force flip counting, exhaustive through n = 12
  for (int n = 0; n <= 12; ++n) {
    const PathDomain domain(2, n, 0);
    const auto c = twoSiteFlipVector(n);
    REQUIRE(c.size() == domain.size());
    for (std::uint64_t j = 0; j < domain.size(); ++j) {
      CHECK(c[static_cast<std::size_t>(j)] == flipCount(domain.pathAt(j)));
      const auto [left, right] = flipReflectionSides(n, j);
      CHECK(left == right);
    }
  }
  CHECK_THROWS_AS(flipReflectionSides(2, 4), std::invalid_argument);
}

TEST_CASE("path index round-trips across small spaces") {
  for (int m = 2; m <= 4; ++m) {
    for (int n = 0; n <= 6; ++n) {
      const PathDomain domain(m, n);
      CHECK(domain.size() == pathCount(m, n));
      std::uint64_t count = 0;
      forEachPath(domain, [&](std::uint64_t ord, const NPath& p) {
        CHECK(domain.indexOf(p) == domain.indexAt(ord));
        CHECK(domain.pathAt(ord) == p);
        const PathIndex encoded = encodePath(p, m);
        CHECK(encoded.value == ord);
        CHECK(encoded.rank == n);
        CHECK(decodePath(encoded, m) == p);
        ++count;
      });
      CHECK(count == domain.size());
    }
  }
  // γ0 is the most significant digit
  CHECK(encodePath(NPath({2, 0, 1}), 3).value == 19);
  CHECK(decodePath(PathIndex{19, 2}, 3) == NPath({2, 0, 1}));
}

TEST_CASE("fixed initial site restricts the space and keeps indices canonical") {
  const PathDomain fixed(2, 4, 0);
  CHECK(fixed.size() == 16);
  forEachPath(fixed, [&](std::uint64_t ord, const NPath& p) {
    CHECK(p.sites.front() == 0);
    // with γ0 = 0 the canonical index equals the free-digit ordinal
    CHECK(fixed.indexAt(ord) == ord);
    CHECK(fixed.ordinalOf(fixed.indexOf(p)) == ord);
  });

  const PathDomain offset(3, 2, 1);
  CHECK(offset.size() == 9);
  CHECK(offset.indexAt(0) == 9);  // first admissible path is 1,0,0
  CHECK(offset.pathAt(0).sites == std::vector<int>{1, 0, 0});
  CHECK_FALSE(offset.admitsIndex(0));
  CHECK_THROWS_AS(offset.indexOf(NPath({0, 0, 0})), std::invalid_argument);

  const PathDomain degenerate(3, 0, 2);
  CHECK(degenerate.size() == 1);
  CHECK(degenerate.finalSiteOf(0) == 2);
}

TEST_CASE("cylinder events validate, dedupe and sort members") {
  const PathDomain domain(2, 2);
  const auto e = CylinderEvent::fromIndices(domain, {5, 1, 5, 3});
  CHECK(e.size() == 3);
  CHECK(e.indices() == std::vector<std::uint64_t>{1, 3, 5});
  CHECK(e.contains(3));
  CHECK_FALSE(e.contains(0));
  CHECK_THROWS_AS(CylinderEvent::fromIndices(domain, {8}), std::invalid_argument);
}

TEST_CASE("extension multiplies cardinality by m^k and keeps ν fixed") {
  const PathDomain domain(3, 1);
  const auto e = CylinderEvent::fromIndices(domain, {0, 4});
  const auto extended = e.extended(2);
  CHECK(extended.domain().rank() == 3);
  CHECK(extended.size() == 2 * 9);
  CHECK(extended.classicalMeasure() == e.classicalMeasure());
  // children of index 4 occupy [36, 45)
  CHECK(extended.contains(36));
  CHECK(extended.contains(44));
  CHECK_FALSE(extended.contains(45));
  CHECK(e.extended(0).indices() == e.indices());
}

TEST_CASE("bitmap and sorted-set representations agree") {
  const PathDomain domain(2, 6);
  std::vector<std::uint64_t> members;
  for (std::uint64_t i = 0; i < domain.size(); i += 3) members.push_back(i);

  const auto sparse = CylinderEvent::fromIndices(domain, members, /*threshold=*/1 << 16);
  const auto dense = CylinderEvent::fromIndices(domain, members, /*threshold=*/4);
  CHECK_FALSE(sparse.usesBitmap());
  CHECK(dense.usesBitmap());
  CHECK(sparse.indices() == dense.indices());
  CHECK(sparse.complement().indices() == dense.complement().indices());

  const auto other = CylinderEvent::fromIndices(domain, {0, 1, 2, 3}, 2);
  CHECK(sparse.intersectWith(other).indices() == dense.intersectWith(other).indices());
  CHECK(sparse.unionWith(other).size() == dense.unionWith(other).size());
  CHECK(sparse.disjointWith(other) == dense.disjointWith(other));
  CHECK(dense.complement().disjointWith(dense));
}

TEST_CASE("full and empty events") {
  const PathDomain domain(2, 3, 0);
  const auto all = CylinderEvent::full(domain);
  CHECK(all.size() == 8);
  CHECK(all.classicalMeasure() == Rational(1));
  const auto none = CylinderEvent::empty(domain);
  CHECK(none.isEmpty());
  CHECK(none.classicalMeasure() == Rational(0));
  CHECK(all.complement().isEmpty());
}
