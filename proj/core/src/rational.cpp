#include "ttwist/rational.hpp"

#include <cctype>
#include <ostream>

#include "ttwist/errors.hpp"

namespace ttwist {

Rational::Rational(long num, long den) {
  if (den == 0) throw InputError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  };
  trim(s);
  if (s.empty()) throw InputError("empty rational literal");
  auto valid_int = [](std::string_view t, bool allow_sign) {
    if (t.empty()) return false;
    size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false))
    throw InputError("malformed rational literal '" + s + "'");
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw InputError("rational with zero denominator: '" + s + "'");
  Rational r;
  r.v_ = mpq_class(n, d);
  r.v_.canonicalize();
  return r;
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero rational");
  return Rational(mpq_class(1 / v_));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero rational");
  v_ /= o.v_;
  return *this;
}

void Rational::sub_mul(const Rational& f, const Rational& b) {
  thread_local mpq_class scratch;
  mpq_mul(scratch.get_mpq_t(), f.v_.get_mpq_t(), b.v_.get_mpq_t());
  mpq_sub(v_.get_mpq_t(), v_.get_mpq_t(), scratch.get_mpq_t());
}

void Rational::add_mul(const Rational& f, const Rational& b) {
  thread_local mpq_class scratch;
  mpq_mul(scratch.get_mpq_t(), f.v_.get_mpq_t(), b.v_.get_mpq_t());
  mpq_add(v_.get_mpq_t(), v_.get_mpq_t(), scratch.get_mpq_t());
}

Rational Rational::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  Rational result(1), base(*this);
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(mpq_class(f));
}

Rational binomial(unsigned n, unsigned k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rational(mpq_class(b));
}

}  // namespace ttwist
