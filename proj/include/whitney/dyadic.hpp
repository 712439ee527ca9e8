#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <ostream>
#include <string>

namespace whitney {

using BigInt = mpz_class;
using Rational = mpq_class;

// Exact dyadic rational mantissa * 2^exponent.
// Canonical form: odd mantissa, or zero mantissa with exponent 0.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long v);  // NOLINT(google-explicit-constructor)
  Dyadic(BigInt mantissa, long exponent);

  static Dyadic pow2(long e);
  // nullopt unless the denominator of q is a power of two
  static std::optional<Dyadic> from_rational(const Rational& q);
  // accepts "m*2^e", integers and finite decimals with a dyadic value
  static Dyadic parse(const std::string& text);

  const BigInt& mantissa() const { return m_; }
  long exponent() const { return e_; }
  int sign() const { return sgn(m_); }
  bool is_zero() const { return sgn(m_) == 0; }
  bool is_integer() const { return e_ >= 0; }

  Dyadic operator-() const;
  Dyadic abs() const;
  // exact multiplication by 2^k
  Dyadic shifted(long k) const;

  Dyadic& operator+=(const Dyadic& o);
  Dyadic& operator-=(const Dyadic& o);
  Dyadic& operator*=(const Dyadic& o);

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.e_ == b.e_ && a.m_ == b.m_;
  }

  // rounding onto the grid 2^-p Z
  Dyadic floor_to(long p) const;
  Dyadic ceil_to(long p) const;
  Dyadic round_to(long p) const;  // nearest, ties toward +inf

  // floor(log2 |x|); x must be nonzero
  long log2_floor() const;
  // smallest t with |x| <= 2^t (x nonzero)
  long log2_ceil() const;
  BigInt floor() const;
  BigInt ceil() const;

  Rational to_rational() const;
  double to_double() const;
  std::string str() const;      // "m*2^e"
  std::string decimal() const;  // exact, finite decimal expansion

 private:
  void normalize();
  BigInt m_ = 0;
  long e_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Dyadic& d);

inline const Dyadic& min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
inline const Dyadic& max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

// a/b rounded down / up onto the grid 2^-p Z; b nonzero
Dyadic div_floor(const Dyadic& a, const Dyadic& b, long p);
Dyadic div_ceil(const Dyadic& a, const Dyadic& b, long p);
// q rounded onto 2^-p Z
Dyadic rational_floor(const Rational& q, long p);
Dyadic rational_ceil(const Rational& q, long p);
// sqrt(x) rounded onto 2^-p Z, x >= 0; exact when the root lies on the grid
Dyadic sqrt_floor(const Dyadic& x, long p);
Dyadic sqrt_ceil(const Dyadic& x, long p);

// Parses "p/q", "m*2^e", integers and finite decimals ("-1.25").
Rational parse_rational(const std::string& text);
std::string rational_str(const Rational& q);

// sign of p + q*sqrt(n), decided exactly
int sign_plus_sqrt(const Dyadic& p, const Dyadic& q, long n);
// sign of p + q*sqrt(n) for rationals
int sign_plus_sqrt(const Rational& p, const Rational& q, long n);

// upper / lower dyadic bounds of sqrt(n) with p fractional bits
Dyadic sqrt_int_upper(long n, long p);
Dyadic sqrt_int_lower(long n, long p);

}  // namespace whitney
