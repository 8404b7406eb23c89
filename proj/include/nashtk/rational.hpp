#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "nashtk/errors.hpp"

namespace nashtk {

// Exact rational number in canonical form: gcd(|num|, den) = 1 and den > 0
// after every operation. Backed by GMP's mpq_class; this wrapper enforces
// canonicalization at construction boundaries and fixes the textual format
// "p/q" (just "p" when q = 1) used by every file format in the project.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design, integers embed
  Rational(const mpz_class& n) : v_(n) {}
  Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}
  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw InputError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  static Rational from_string(const std::string& s);
  std::string to_string() const;

  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }
  bool is_integer() const { return v_.get_den() == 1; }

  // Largest integer <= value.
  mpz_class floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(),
               v_.get_den().get_mpz_t());
    return q;
  }
  // Smallest integer >= value.
  mpz_class ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(),
               v_.get_den().get_mpz_t());
    return q;
  }

  Rational abs() const {
    Rational r = *this;
    if (r.v_ < 0) r.v_ = -r.v_;
    return r;
  }

  int sign() const { return sgn(v_); }

  Rational operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
  }
  Rational& operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    v_ *= o.v_;
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.v_ == 0) throw InputError("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.v_ == b.v_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return a.v_ != b.v_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.v_ < b.v_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return a.v_ <= b.v_;
  }
  friend bool operator>(const Rational& a, const Rational& b) {
    return a.v_ > b.v_;
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return a.v_ >= b.v_;
  }

 private:
  mpq_class v_;
};

inline const Rational& min(const Rational& a, const Rational& b) {
  return b < a ? b : a;
}
inline const Rational& max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}

// 2^k as an exact rational; k may be negative.
inline Rational pow2(long k) {
  mpz_class p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
  return k >= 0 ? Rational(p) : Rational(mpz_class(1), p);
}

// n^e for integer n >= 0, e >= 0.
inline mpz_class ipow(const mpz_class& n, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), n.get_mpz_t(), e);
  return r;
}

inline std::string Rational::to_string() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

inline Rational Rational::from_string(const std::string& s) {
  auto parse_int = [](const std::string& t) -> mpz_class {
    if (t.empty()) throw InputError("empty integer in rational literal");
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw InputError("sign without digits in rational literal");
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9')
        throw InputError("bad character in rational literal: " + t);
    // mpz_set_str accepts '-' but not '+'
    return mpz_class(t[0] == '+' ? t.substr(1) : t, 10);
  };
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_int(s));
  mpz_class num = parse_int(s.substr(0, slash));
  mpz_class den = parse_int(s.substr(slash + 1));
  if (den == 0) throw InputError("zero denominator in rational literal: " + s);
  return Rational(num, den);
}

}  // namespace nashtk
