#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "wnc/errors.hpp"

namespace wnc {

/// Exact rational arithmetic on 64-bit numerator/denominator. Dyadic tree
/// coordinates must satisfy their midpoint identities exactly, which rules
/// out doubles; the magnitudes involved are tiny so int64 with overflow
/// checks is enough.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (den_ == 0) throw NumericError("rational: zero denominator");
    normalize();
  }

  /// Every finite double is a dyadic rational; this conversion is exact.
  static Rational from_double(double x) {
    if (!std::isfinite(x)) throw NumericError("rational: non-finite double");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
    // 53 doublings make the mantissa integral.
    std::int64_t mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    exp -= 53;
    while (mant % 2 == 0 && exp < 0) {
      mant /= 2;
      ++exp;
    }
    if (exp >= 0) {
      if (exp > 62) throw NumericError("rational: double too large");
      return Rational(checked_mul(mant, std::int64_t(1) << exp), 1);
    }
    if (-exp > 62) throw NumericError("rational: double too small to represent");
    return Rational(mant, std::int64_t(1) << (-exp));
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const { return Rational(-num_, den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
                    checked_mul(a.den_, b.den_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw NumericError("rational: division by zero");
    return Rational(checked_mul(a.num_, b.den_), checked_mul(a.den_, b.num_));
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return checked_mul(a.num_, b.den_) < checked_mul(b.num_, a.den_);
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  static Rational parse(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  }

 private:
  static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    const __int128 r = static_cast<__int128>(a) * b;
    if (r > INT64_MAX || r < INT64_MIN) throw NumericError("rational: overflow");
    return static_cast<std::int64_t>(r);
  }
  static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    const __int128 r = static_cast<__int128>(a) + b;
    if (r > INT64_MAX || r < INT64_MIN) throw NumericError("rational: overflow");
    return static_cast<std::int64_t>(r);
  }

  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace wnc
