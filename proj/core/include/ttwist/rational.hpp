#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace ttwist {

/// Arbitrary precision rational number, always in lowest terms with a
/// positive denominator. Serializes as "p/q", or "p" when q == 1.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : v_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }
  explicit Rational(mpq_class&& v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "p", "-p", "p/q". Throws InputError on malformed text or q == 0.
  static Rational parse(std::string_view text);

  std::string str() const;

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  int sign() const { return sgn(v_); }

  Rational inverse() const;
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// a -= f * b without temporaries beyond one scratch value.
  void sub_mul(const Rational& f, const Rational& b);
  /// a += f * b.
  void add_mul(const Rational& f, const Rational& b);

  const mpq_class& raw() const { return v_; }
  mpq_class& raw() { return v_; }

  /// Integer power, negative exponents allowed for nonzero values.
  Rational pow(int e) const;

 private:
  mpq_class v_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational factorial(unsigned n);
Rational binomial(unsigned n, unsigned k);

}  // namespace ttwist
