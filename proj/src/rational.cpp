#include "ert/rational.hpp"

#include <numeric>
#include <ostream>
#include <stdexcept>

namespace ert {
namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw std::overflow_error("rational overflow");
  }
  return static_cast<std::int64_t>(v);
}

Rational make(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    const i128 t = a % b;
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

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.den_ +
                  static_cast<i128>(b.num_) * a.den_,
              static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.num_,
              static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.den_,
              static_cast<i128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const i128 lhs = static_cast<i128>(a.num_) * b.den_;
  const i128 rhs = static_cast<i128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(std::stoll(text));
  return Rational(std::stoll(text.substr(0, slash)),
                  std::stoll(text.substr(slash + 1)));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace ert
