#include <doctest.h>

#include "qproc/exact.hpp"

using namespace qproc;

TEST_CASE("rationals normalize on construction") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(3, 1).str() == "3");
  CHECK(Rational(1, 2).str() == "1/2");
  CHECK(Rational(-1, 2).str() == "-1/2");
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("rational arithmetic is exact") {
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) - Rational(1, 2) == Rational(0));
  CHECK(Rational(3, 4) * Rational(2, 3) == Rational(1, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK(-Rational(1, 2) == Rational(-1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(1, 3).toDouble() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  // a million mixed additions stay normalized
  Rational sum(0);
  for (int i = 0; i < 1 << 16; ++i) sum += Rational(1, 1 << 16);
  CHECK(sum == Rational(1));
}

TEST_CASE("rational overflow throws instead of wrapping") {
  const Rational big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, std::overflow_error);
  CHECK_THROWS_AS(checkedIntPow(10, 30), std::overflow_error);
  CHECK(checkedIntPow(2, 62) == (std::int64_t{1} << 62));
  CHECK(checkedIntPow(5, 11) == 48828125);
}

TEST_CASE("gaussian integers multiply in Z[i]") {
  const GaussianInt i{0, 1};
  CHECK(i * i == GaussianInt{-1, 0});
  CHECK((GaussianInt{1, 2} * GaussianInt{3, -1}) == GaussianInt{5, 5});
  CHECK(GaussianInt{3, 4}.normSq() == 25);
  CHECK(GaussianInt{-2, 1}.str() == "-2+1i");
  CHECK(GaussianInt{0, -3}.str() == "0-3i");
}

TEST_CASE("iPower cycles with period 4") {
  CHECK(iPower(0) == GaussianInt{1, 0});
  CHECK(iPower(1) == GaussianInt{0, 1});
  CHECK(iPower(2) == GaussianInt{-1, 0});
  CHECK(iPower(3) == GaussianInt{0, -1});
  for (int k = 0; k < 32; ++k) CHECK(iPower(k) == iPower(k + 4));
}
