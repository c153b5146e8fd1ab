#include "qproc/exact.hpp"

#include <cstdlib>
#include <numeric>

namespace qproc {

namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
  if (v > Wide(INT64_MAX) || v < Wide(INT64_MIN)) {
    throw std::overflow_error("rational arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ == 0) throw std::domain_error("rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

double Rational::toDouble() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

namespace {

Rational makeNormalized(Wide num, Wide den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide a = num < 0 ? -num : num;
  Wide b = den;
  while (b != 0) {
    const Wide t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational operator+(const Rational& a, const Rational& b) {
  return makeNormalized(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_,
                        Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return makeNormalized(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_,
                        Wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return makeNormalized(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return makeNormalized(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

bool operator<(const Rational& a, const Rational& b) {
  return Wide(a.num_) * b.den_ < Wide(b.num_) * a.den_;
}

std::int64_t checkedIntPow(std::int64_t base, int exp) {
  if (exp < 0) throw std::domain_error("negative exponent");
  Wide acc = 1;
  for (int i = 0; i < exp; ++i) {
    acc *= base;
    narrow(acc);
  }
  return narrow(acc);
}

GaussianInt operator+(GaussianInt a, GaussianInt b) {
  return {narrow(Wide(a.re) + b.re), narrow(Wide(a.im) + b.im)};
}

GaussianInt operator-(GaussianInt a, GaussianInt b) {
  return {narrow(Wide(a.re) - b.re), narrow(Wide(a.im) - b.im)};
}

GaussianInt operator*(GaussianInt a, GaussianInt b) {
  return {narrow(Wide(a.re) * b.re - Wide(a.im) * b.im),
          narrow(Wide(a.re) * b.im + Wide(a.im) * b.re)};
}

std::int64_t GaussianInt::normSq() const {
  return narrow(Wide(re) * re + Wide(im) * im);
}

std::string GaussianInt::str() const {
  return std::to_string(re) + (im < 0 ? "-" : "+") +
         std::to_string(im < 0 ? -im : im) + "i";
}

GaussianInt iPower(int k) {
  if (k < 0) throw std::domain_error("iPower expects k >= 0");
  switch (k % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

}  // namespace qproc
