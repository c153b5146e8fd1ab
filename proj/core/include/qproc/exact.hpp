#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qproc {

// Exact rational arithmetic on 64-bit integers, kept normalized with
// gcd(num, den) = 1 and den > 0. Intermediate products are formed in
// 128 bits; narrowing overflow throws std::overflow_error. Every
// measure value handled exactly in this project is m-adic with small m,
// so the 64-bit range is ample.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den);
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: intentionally implicit

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double toDouble() const;
  std::string str() const;  // "p/q", or "p" when q = 1

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;

  Rational& operator+=(const Rational& r) { return *this = *this + r; }
  Rational& operator-=(const Rational& r) { return *this = *this - r; }
  Rational& operator*=(const Rational& r) { return *this = *this * r; }
  Rational& operator/=(const Rational& r) { return *this = *this / r; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// base^exp as an exact nonnegative integer, overflow-checked.
std::int64_t checkedIntPow(std::int64_t base, int exp);

// Gaussian integer a + b·i on 64-bit components.
struct GaussianInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  friend GaussianInt operator+(GaussianInt a, GaussianInt b);
  friend GaussianInt operator-(GaussianInt a, GaussianInt b);
  friend GaussianInt operator*(GaussianInt a, GaussianInt b);
  friend bool operator==(const GaussianInt&, const GaussianInt&) = default;

  std::int64_t normSq() const;  // |z|^2
  std::string str() const;      // "a+bi"
};

// i^k for k >= 0 (period 4).
GaussianInt iPower(int k);

}  // namespace qproc
