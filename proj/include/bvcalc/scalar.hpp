#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace bvcalc {

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long numerator);  // NOLINT(google-explicit-constructor)
  Scalar(long numerator, long denominator);

  /// Parses "p", "-p" or "p/q".
  static Scalar parse(std::string_view text);

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }
  int sign() const { return sgn(value_); }

  Scalar inverse() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& other);
  Scalar& operator-=(const Scalar& other);
  Scalar& operator*=(const Scalar& other);
  Scalar& operator/=(const Scalar& other);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b);

  std::string numerator() const;
  std::string denominator() const;
  std::string str() const;

 private:
  explicit Scalar(mpq_class value);
  mpq_class value_{0};
};

Scalar factorial(int n);

}  // namespace bvcalc
