#include "whitney/interval.hpp"

#include <algorithm>

namespace whitney {

DyInterval::DyInterval(Dyadic l, Dyadic h) : lo(std::move(l)), hi(std::move(h)) {
  if (hi < lo) throw std::invalid_argument("interval with lo > hi");
}

DyInterval DyInterval::of_rational(const Rational& q, long p) {
  if (auto d = Dyadic::from_rational(q)) return DyInterval(*d);
  return {rational_floor(q, p), rational_ceil(q, p)};
}

Dyadic DyInterval::mig() const {
  if (contains_zero()) return Dyadic();
  return min(lo.abs(), hi.abs());
}

DyInterval operator+(const DyInterval& a, const DyInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
DyInterval operator-(const DyInterval& a, const DyInterval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
DyInterval operator-(const DyInterval& a) { return {-a.hi, -a.lo}; }

DyInterval operator*(const DyInterval& a, const DyInterval& b) {
  if (a.is_point() && b.is_point()) return DyInterval(a.lo * b.lo);
  if (a.lo.sign() >= 0 && b.lo.sign() >= 0) return {a.lo * b.lo, a.hi * b.hi};
  Dyadic p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {min(min(p1, p2), min(p3, p4)), max(max(p1, p2), max(p3, p4))};
}

DyInterval& operator+=(DyInterval& a, const DyInterval& b) { return a = a + b; }
DyInterval& operator*=(DyInterval& a, const DyInterval& b) { return a = a * b; }

DyInterval hull(const DyInterval& a, const DyInterval& b) {
  return {min(a.lo, b.lo), max(a.hi, b.hi)};
}

DyInterval intersect(const DyInterval& a, const DyInterval& b) {
  Dyadic l = max(a.lo, b.lo), h = min(a.hi, b.hi);
  if (h < l) throw std::logic_error("disjoint enclosures of one quantity");
  return {l, h};
}

DyInterval sqr(const DyInterval& a) {
  if (a.lo.sign() >= 0) return {a.lo * a.lo, a.hi * a.hi};
  if (a.hi.sign() <= 0) return {a.hi * a.hi, a.lo * a.lo};
  Dyadic m = a.mag();
  return {Dyadic(), m * m};
}

DyInterval pow(const DyInterval& a, unsigned k) {
  DyInterval r(Dyadic(1));
  DyInterval base = a;
  // even powers via squaring keep enclosures nonnegative
  if (k % 2 == 0) {
    DyInterval s = sqr(a);
    for (unsigned j = 0; j < k / 2; ++j) r = r * s;
    return r;
  }
  for (unsigned j = 0; j < k; ++j) r = r * base;
  return r;
}

DyInterval abs(const DyInterval& a) {
  if (a.lo.sign() >= 0) return a;
  if (a.hi.sign() <= 0) return -a;
  return {Dyadic(), a.mag()};
}

DyInterval recip(const DyInterval& b, long p) {
  if (b.contains_zero()) throw RefinementRequired("divisor enclosure contains zero");
  Dyadic one(1);
  return {div_floor(one, b.hi, p), div_ceil(one, b.lo, p)};
}

DyInterval div(const DyInterval& a, const DyInterval& b, long p) {
  if (b.contains_zero()) throw RefinementRequired("divisor enclosure contains zero");
  if (b.is_point()) {
    return {min(div_floor(a.lo, b.lo, p), div_floor(a.hi, b.lo, p)),
            max(div_ceil(a.lo, b.lo, p), div_ceil(a.hi, b.lo, p))};
  }
  Dyadic l = div_floor(a.lo, b.lo, p), h = div_ceil(a.lo, b.lo, p);
  for (const Dyadic* x : {&a.lo, &a.hi})
    for (const Dyadic* y : {&b.lo, &b.hi}) {
      l = min(l, div_floor(*x, *y, p));
      h = max(h, div_ceil(*x, *y, p));
    }
  return {l, h};
}

DyInterval div_int(const DyInterval& a, long d, long p) {
  Dyadic dd(d);
  if (d > 0) return {div_floor(a.lo, dd, p), div_ceil(a.hi, dd, p)};
  return {div_floor(a.hi, dd, p), div_ceil(a.lo, dd, p)};
}

DyInterval sqrt(const DyInterval& a, long p) {
  if (a.hi.sign() < 0) throw RefinementRequired("sqrt of a negative enclosure");
  Dyadic l = a.lo.sign() > 0 ? sqrt_floor(a.lo, p) : Dyadic();
  return {l, sqrt_ceil(a.hi, p)};
}

namespace {

// Enclosure of e^y for a single dyadic y, width about 2^-p.
DyInterval exp_point(const Dyadic& y, long p) {
  if (y.is_zero()) return DyInterval(Dyadic(1));
  // e^y <= 2^-(p+2) once y <= -(p+2) ln 2; 45/64 > ln 2
  if (y.sign() < 0 && y * Dyadic(64) <= Dyadic(-45) * Dyadic(p + 2)) {
    return {Dyadic(), Dyadic::pow2(-(p + 2))};
  }
  long s = std::max(0L, y.log2_floor() + 2);  // |y| / 2^s <= 1/2
  long extra = 0;
  if (y.sign() > 0) {
    // e^y < 2^(3y/2 + 1)
    BigInt c = y.ceil();
    extra = c.get_si() * 3 / 2 + 2;
  }
  long w = p + s + 10 + extra;
  Dyadic r = y.shifted(-s);
  DyInterval sum(Dyadic(1)), term(Dyadic(1));
  for (long j = 1;; ++j) {
    term = div_int(term * DyInterval(r), j, w);
    sum = sum + term;
    if (term.mag() <= Dyadic::pow2(-w)) break;
  }
  Dyadic tail = term.mag();
  sum = DyInterval(sum.lo - tail, sum.hi + tail).round_out(w);
  if (sum.lo.sign() < 0) sum.lo = Dyadic();
  for (long j = 0; j < s; ++j) sum = sqr(sum).round_out(w);
  return sum.round_out(p + 2);
}

// Taylor series of cos (odd = false) or sin (odd = true) at a dyadic point.
DyInterval trig_point(const Dyadic& y, long p, bool odd) {
  if (y.is_zero()) return DyInterval(Dyadic(odd ? 0 : 1));
  long guard = 0;
  if (y.abs() > Dyadic(1)) guard = y.abs().ceil().get_si() * 3 / 2 + 2;
  long w = p + 10 + guard;
  DyInterval yy(y), y2 = DyInterval(y * y);
  DyInterval term = odd ? yy : DyInterval(Dyadic(1));
  DyInterval sum = term;
  long j = odd ? 1 : 0;
  Dyadic ay = y.abs();
  for (;;) {
    term = div_int(-(term * y2), (j + 1) * (j + 2), w);
    j += 2;
    sum = sum + term;
    if (Dyadic(j) > ay && term.mag() <= Dyadic::pow2(-w)) break;
  }
  Dyadic tail = term.mag();
  return DyInterval(sum.lo - tail, sum.hi + tail).round_out(p + 2);
}

DyInterval trig(const DyInterval& a, long p, bool odd) {
  DyInterval unit(Dyadic(-1), Dyadic(1));
  Dyadic r = a.width().shifted(-1);
  if (r >= Dyadic(2)) return unit;
  Dyadic m = a.mid();
  DyInterval c = trig_point(m, p, odd);
  DyInterval out(c.lo - r, c.hi + r);
  return DyInterval(max(out.lo, Dyadic(-1)), min(out.hi, Dyadic(1)));
}

}  // namespace

DyInterval exp(const DyInterval& a, long p) {
  if (a.is_point()) return exp_point(a.lo, p);
  return {exp_point(a.lo, p).lo, exp_point(a.hi, p).hi};
}

DyInterval cos(const DyInterval& a, long p) { return trig(a, p, false); }
DyInterval sin(const DyInterval& a, long p) { return trig(a, p, true); }

Dyadic settle(const DyInterval& iv, long i) {
  if (iv.is_point()) return iv.lo;
  return iv.mid().round_to(i + 2);
}

}  // namespace whitney
