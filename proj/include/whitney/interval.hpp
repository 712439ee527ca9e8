#pragma once

#include <stdexcept>

#include "whitney/dyadic.hpp"

namespace whitney {

// Signalled when an enclosure is too wide for the requested operation,
// e.g. a divisor interval that contains zero. Callers refine their inputs.
struct RefinementRequired : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed interval [lo, hi] with dyadic endpoints. Every operation returns an
// enclosure of the exact image. Operations that cannot be exact take an
// absolute precision p and round outward onto the grid 2^-p Z.
struct DyInterval {
  Dyadic lo, hi;

  DyInterval() = default;
  DyInterval(const Dyadic& v) : lo(v), hi(v) {}  // NOLINT(google-explicit-constructor)
  DyInterval(Dyadic l, Dyadic h);

  static DyInterval around(const Dyadic& c, const Dyadic& r) { return {c - r, c + r}; }
  static DyInterval of_rational(const Rational& q, long p);

  Dyadic width() const { return hi - lo; }
  Dyadic mid() const { return (lo + hi).shifted(-1); }
  Dyadic mag() const { return max(lo.abs(), hi.abs()); }
  Dyadic mig() const;
  bool is_point() const { return lo == hi; }
  bool contains(const Dyadic& v) const { return lo <= v && v <= hi; }
  bool contains(const DyInterval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }
  bool positive() const { return lo.sign() > 0; }

  DyInterval round_out(long p) const { return {lo.floor_to(p), hi.ceil_to(p)}; }
  // width <= 2^-i
  bool tight(long i) const { return width() <= Dyadic::pow2(-i); }
};

DyInterval operator+(const DyInterval& a, const DyInterval& b);
DyInterval operator-(const DyInterval& a, const DyInterval& b);
DyInterval operator-(const DyInterval& a);
DyInterval operator*(const DyInterval& a, const DyInterval& b);
DyInterval& operator+=(DyInterval& a, const DyInterval& b);
DyInterval& operator*=(DyInterval& a, const DyInterval& b);

DyInterval hull(const DyInterval& a, const DyInterval& b);
// intersection; the arguments must overlap
DyInterval intersect(const DyInterval& a, const DyInterval& b);
DyInterval sqr(const DyInterval& a);
DyInterval pow(const DyInterval& a, unsigned k);
DyInterval abs(const DyInterval& a);

DyInterval div(const DyInterval& a, const DyInterval& b, long p);
DyInterval recip(const DyInterval& b, long p);
DyInterval div_int(const DyInterval& a, long d, long p);
DyInterval sqrt(const DyInterval& a, long p);
DyInterval exp(const DyInterval& a, long p);
DyInterval cos(const DyInterval& a, long p);
DyInterval sin(const DyInterval& a, long p);

// Rounds an enclosure of width <= 2^-(i+1) to a single dyadic within 2^-i of
// every point of the enclosure; point intervals are returned exactly.
Dyadic settle(const DyInterval& iv, long i);

}  // namespace whitney
