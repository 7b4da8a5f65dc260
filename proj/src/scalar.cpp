#include "bvcalc/scalar.hpp"

#include "bvcalc/errors.hpp"

#include <cctype>

namespace bvcalc {

Scalar::Scalar(long numerator) : value_(numerator) {}

Scalar::Scalar(long numerator, long denominator) {
  if (denominator == 0) throw DivisionByZero("scalar with zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Scalar::Scalar(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Scalar Scalar::parse(std::string_view text) {
  auto valid_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::string_view num = text;
  std::string_view den = "1";
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
    if (!den.empty() && (den.front() == '-' || den.front() == '+')) den = {};
  }
  if (!valid_int(num) || !valid_int(den)) throw MalformedInput("not a rational number: '" + std::string(text) + "'");
  std::string n(num);
  if (n.front() == '+') n.erase(0, 1);
  mpz_class zn(n, 10);
  mpz_class zd(std::string(den), 10);
  if (zd == 0) throw DivisionByZero("rational with zero denominator: '" + std::string(text) + "'");
  return Scalar(mpq_class(zn, zd));
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero");
  return Scalar(mpq_class(1) / value_);
}

Scalar Scalar::operator-() const { return Scalar(mpq_class(-value_)); }

Scalar& Scalar::operator+=(const Scalar& other) {
  value_ += other.value_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& other) {
  value_ -= other.value_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& other) {
  value_ *= other.value_;
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& other) {
  if (other.is_zero()) throw DivisionByZero("division by zero");
  value_ /= other.value_;
  return *this;
}

std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
  int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Scalar::numerator() const { return value_.get_num().get_str(); }
std::string Scalar::denominator() const { return value_.get_den().get_str(); }
std::string Scalar::str() const { return value_.get_str(); }

Scalar factorial(int n) {
  Scalar f(1);
  for (int i = 2; i <= n; ++i) f *= Scalar(i);
  return f;
}

}  // namespace bvcalc
