#include "whitney/dyadic.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace whitney {

namespace {

BigInt shl(const BigInt& v, unsigned long k) {
  BigInt r;
  mpz_mul_2exp(r.get_mpz_t(), v.get_mpz_t(), k);
  return r;
}

BigInt fdiv_2exp(const BigInt& v, unsigned long k) {
  BigInt r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), v.get_mpz_t(), k);
  return r;
}

BigInt cdiv_2exp(const BigInt& v, unsigned long k) {
  BigInt r;
  mpz_cdiv_q_2exp(r.get_mpz_t(), v.get_mpz_t(), k);
  return r;
}

long bitlen(const BigInt& v) {
  if (sgn(v) == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

BigInt babs(const BigInt& v) {
  BigInt r;
  mpz_abs(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

bool is_pow2(const BigInt& v) { return sgn(v) > 0 && mpz_popcount(v.get_mpz_t()) == 1; }

}  // namespace

Dyadic::Dyadic(long v) : m_(v), e_(0) { normalize(); }

Dyadic::Dyadic(BigInt mantissa, long exponent) : m_(std::move(mantissa)), e_(exponent) {
  normalize();
}

void Dyadic::normalize() {
  if (sgn(m_) == 0) {
    e_ = 0;
    return;
  }
  unsigned long tz = mpz_scan1(m_.get_mpz_t(), 0);
  if (tz > 0) {
    mpz_tdiv_q_2exp(m_.get_mpz_t(), m_.get_mpz_t(), tz);
    e_ += static_cast<long>(tz);
  }
}

Dyadic Dyadic::pow2(long e) { return Dyadic(BigInt(1), e); }

std::optional<Dyadic> Dyadic::from_rational(const Rational& q) {
  const BigInt& den = q.get_den();
  if (!is_pow2(den)) return std::nullopt;
  long k = bitlen(den) - 1;
  return Dyadic(q.get_num(), -k);
}

Dyadic Dyadic::parse(const std::string& text) {
  auto d = from_rational(parse_rational(text));
  if (!d) throw std::invalid_argument("not a dyadic rational: " + text);
  return *d;
}

Dyadic Dyadic::operator-() const {
  Dyadic r = *this;
  r.m_ = -r.m_;
  return r;
}

Dyadic Dyadic::abs() const {
  Dyadic r = *this;
  if (sgn(r.m_) < 0) r.m_ = -r.m_;
  return r;
}

Dyadic Dyadic::shifted(long k) const {
  if (is_zero()) return *this;
  Dyadic r = *this;
  r.e_ += k;
  return r;
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.e_ == b.e_) return Dyadic(a.m_ + b.m_, a.e_);
  if (a.e_ < b.e_) return Dyadic(a.m_ + shl(b.m_, b.e_ - a.e_), a.e_);
  return Dyadic(shl(a.m_, a.e_ - b.e_) + b.m_, b.e_);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero() || b.is_zero()) return Dyadic();
  Dyadic r;
  r.m_ = a.m_ * b.m_;
  r.e_ = a.e_ + b.e_;  // product of odd mantissas stays odd
  return r;
}

Dyadic& Dyadic::operator+=(const Dyadic& o) { return *this = *this + o; }
Dyadic& Dyadic::operator-=(const Dyadic& o) { return *this = *this - o; }
Dyadic& Dyadic::operator*=(const Dyadic& o) { return *this = *this * o; }

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  int sa = a.sign(), sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  int c;
  if (a.e_ == b.e_) {
    c = cmp(a.m_, b.m_);
  } else if (a.e_ < b.e_) {
    c = cmp(a.m_, shl(b.m_, b.e_ - a.e_));
  } else {
    c = cmp(shl(a.m_, a.e_ - b.e_), b.m_);
  }
  return c <=> 0;
}

Dyadic Dyadic::floor_to(long p) const {
  // x * 2^p = m * 2^(e+p)
  long s = e_ + p;
  if (s >= 0) return *this;
  return Dyadic(fdiv_2exp(m_, static_cast<unsigned long>(-s)), -p);
}

Dyadic Dyadic::ceil_to(long p) const {
  long s = e_ + p;
  if (s >= 0) return *this;
  return Dyadic(cdiv_2exp(m_, static_cast<unsigned long>(-s)), -p);
}

Dyadic Dyadic::round_to(long p) const {
  long s = e_ + p;
  if (s >= 0) return *this;
  return (*this + Dyadic::pow2(-p - 1)).floor_to(p);
}

long Dyadic::log2_floor() const {
  if (is_zero()) throw std::domain_error("log2 of zero");
  return e_ + bitlen(m_) - 1;
}

long Dyadic::log2_ceil() const {
  if (is_zero()) throw std::domain_error("log2 of zero");
  BigInt a = babs(m_);
  long b = bitlen(a) - 1;
  return e_ + (is_pow2(a) ? b : b + 1);
}

BigInt Dyadic::floor() const {
  if (e_ >= 0) return shl(m_, e_);
  return fdiv_2exp(m_, -e_);
}

BigInt Dyadic::ceil() const {
  if (e_ >= 0) return shl(m_, e_);
  return cdiv_2exp(m_, -e_);
}

Rational Dyadic::to_rational() const {
  if (e_ >= 0) return Rational(shl(m_, e_));
  Rational q(m_, shl(BigInt(1), -e_));
  q.canonicalize();
  return q;
}

double Dyadic::to_double() const {
  long ex;
  double d = mpz_get_d_2exp(&ex, m_.get_mpz_t());
  return std::ldexp(d, static_cast<int>(ex + e_));
}

std::string Dyadic::str() const { return m_.get_str() + "*2^" + std::to_string(e_); }

std::string Dyadic::decimal() const {
  if (e_ >= 0) return shl(m_, e_).get_str();
  // m / 2^k = m * 5^k / 10^k
  unsigned long k = static_cast<unsigned long>(-e_);
  BigInt five;
  mpz_ui_pow_ui(five.get_mpz_t(), 5, k);
  BigInt scaled = babs(m_) * five;
  std::string digits = scaled.get_str();
  if (digits.size() <= k) digits = std::string(k - digits.size() + 1, '0') + digits;
  std::string out = digits.substr(0, digits.size() - k) + "." + digits.substr(digits.size() - k);
  return (sgn(m_) < 0 ? "-" : "") + out;
}

std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.str(); }

Dyadic div_floor(const Dyadic& a, const Dyadic& b, long p) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  // a/b * 2^p = (ma/mb) * 2^(ea - eb + p)
  long t = a.exponent() - b.exponent() + p;
  BigInt num = a.mantissa(), den = b.mantissa();
  if (sgn(den) < 0) {
    num = -num;
    den = -den;
  }
  if (t >= 0) num = shl(num, t);
  else den = shl(den, -t);
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return Dyadic(q, -p);
}

Dyadic div_ceil(const Dyadic& a, const Dyadic& b, long p) {
  return -div_floor(-a, b, p);
}

Dyadic rational_floor(const Rational& q, long p) {
  BigInt num = q.get_num(), den = q.get_den();
  if (p >= 0) num = shl(num, p);
  else den = shl(den, -p);
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return Dyadic(r, -p);
}

Dyadic rational_ceil(const Rational& q, long p) { return -rational_floor(-q, p); }

namespace {
// floor(x * 4^p) as an integer, x >= 0
BigInt scaled_floor(const Dyadic& x, long p) { return x.shifted(2 * p).floor(); }
BigInt scaled_ceil(const Dyadic& x, long p) { return x.shifted(2 * p).ceil(); }
}  // namespace

Dyadic sqrt_floor(const Dyadic& x, long p) {
  if (x.sign() < 0) throw std::domain_error("sqrt of negative");
  BigInt r;
  BigInt s = scaled_floor(x, p);
  mpz_sqrt(r.get_mpz_t(), s.get_mpz_t());
  return Dyadic(r, -p);
}

Dyadic sqrt_ceil(const Dyadic& x, long p) {
  if (x.sign() < 0) throw std::domain_error("sqrt of negative");
  BigInt s = scaled_ceil(x, p);
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), s.get_mpz_t());
  if (r * r < s) r += 1;
  return Dyadic(r, -p);
}

Rational parse_rational(const std::string& raw) {
  std::string t;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  if (t.empty()) throw std::invalid_argument("empty number");
  auto bad = [&]() { return std::invalid_argument("malformed number: " + raw); };

  if (auto star = t.find("*2^"); star != std::string::npos) {
    Rational m = parse_rational(t.substr(0, star));
    std::string es = t.substr(star + 3);
    long e;
    try {
      size_t used = 0;
      e = std::stol(es, &used);
      if (used != es.size()) throw bad();
    } catch (const std::invalid_argument&) {
      throw bad();
    } catch (const std::out_of_range&) {
      throw bad();
    }
    if (m.get_den() != 1) throw bad();
    return Dyadic::pow2(e).to_rational() * m;
  }
  if (auto slash = t.find('/'); slash != std::string::npos) {
    Rational a = parse_rational(t.substr(0, slash));
    Rational b = parse_rational(t.substr(slash + 1));
    if (sgn(b) == 0) throw std::invalid_argument("zero denominator: " + raw);
    return a / b;
  }
  size_t pos = 0;
  bool neg = false;
  if (t[pos] == '+' || t[pos] == '-') neg = (t[pos++] == '-');
  std::string ip, fp;
  while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ip += t[pos++];
  if (pos < t.size() && t[pos] == '.') {
    ++pos;
    while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) fp += t[pos++];
  }
  long ex = 0;
  if (pos < t.size() && (t[pos] == 'e' || t[pos] == 'E')) {
    ++pos;
    std::string es = t.substr(pos);
    try {
      size_t used = 0;
      ex = std::stol(es, &used);
      if (used != es.size()) throw bad();
    } catch (const std::invalid_argument&) {
      throw bad();
    } catch (const std::out_of_range&) {
      throw bad();
    }
    pos = t.size();
  }
  if (pos != t.size() || (ip.empty() && fp.empty())) throw bad();
  BigInt num((ip + fp).empty() ? "0" : ip + fp, 10);
  long scale = static_cast<long>(fp.size()) - ex;
  BigInt ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational q = scale >= 0 ? Rational(num, ten_pow) : Rational(num * ten_pow);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

std::string rational_str(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

int sign_plus_sqrt(const Rational& p, const Rational& q, long n) {
  if (n < 0) throw std::domain_error("sqrt of negative");
  BigInt root;
  BigInt nn(n);
  if (mpz_perfect_square_p(nn.get_mpz_t())) {
    mpz_sqrt(root.get_mpz_t(), nn.get_mpz_t());
    return sgn(p + q * Rational(root));
  }
  int sp = sgn(p), sq = sgn(q);
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  // opposite signs: compare p^2 with q^2 n
  int c = cmp(p * p, q * q * n);
  if (c == 0) return 0;  // impossible for irrational sqrt(n)
  return c > 0 ? sp : sq;
}

int sign_plus_sqrt(const Dyadic& p, const Dyadic& q, long n) {
  if (n < 0) throw std::domain_error("sqrt of negative");
  BigInt nn(n);
  if (mpz_perfect_square_p(nn.get_mpz_t())) {
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), nn.get_mpz_t());
    return (p + q * Dyadic(root, 0)).sign();
  }
  int sp = p.sign(), sq = q.sign();
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  auto c = (p * p) <=> (q * q * Dyadic(n));
  if (c == 0) return 0;
  return c > 0 ? sp : sq;
}

Dyadic sqrt_int_upper(long n, long p) { return sqrt_ceil(Dyadic(n), p); }
Dyadic sqrt_int_lower(long n, long p) { return sqrt_floor(Dyadic(n), p); }

}  // namespace whitney
