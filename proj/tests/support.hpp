#pragma once

#include <algorithm>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "whitney/closedset.hpp"
#include "whitney/dyadic.hpp"

namespace whitney::test {

inline Dyadic D(const std::string& s) { return *Dyadic::from_rational(parse_rational(s)); }
inline Dyadic D(long v) { return Dyadic(v); }

inline SetPart point_part(DyPoint p) { return SetPart{SetPart::Kind::Point, std::move(p), {}, Dyadic(0)}; }
inline SetPart box_part(DyPoint lo, DyPoint hi) {
  return SetPart{SetPart::Kind::Box, std::move(lo), std::move(hi), Dyadic(0)};
}
inline SetPart ball_part(DyPoint c, Dyadic r) { return SetPart{SetPart::Kind::Ball, std::move(c), {}, std::move(r)}; }

inline SetSpec spec_of(int dim, std::vector<SetPart> parts) {
  SetSpec s;
  s.dim = dim;
  s.parts = std::move(parts);
  return s;
}

inline SetPtr origin() { return make_set(spec_of(1, {point_part({D(0)})})); }
inline SetPtr two_points(long a = 0, long b = 1) {
  return make_set(spec_of(1, {point_part({D(a)}), point_part({D(b)})}));
}
inline SetPtr unit_ball2() { return make_set(spec_of(2, {ball_part({D(0), D(0)}, D(1))})); }
inline SetPtr unit_box2() { return make_set(spec_of(2, {box_part({D(0), D(0)}, {D(1), D(1)})})); }
// [-2,-1] u [1,2]
inline SetPtr split_interval() {
  return make_set(spec_of(1, {box_part({D(-2)}, {D(-1)}), box_part({D(1)}, {D(2)})}));
}

// exact rational enclosures of elementary constants by alternating series
// (terms decrease in modulus, so consecutive partial sums bracket the limit)
struct RationalBracket {
  Rational lo, hi;
};

inline RationalBracket alternating(const std::vector<Rational>& terms) {
  Rational s = 0, prev = 0;
  for (const auto& t : terms) {
    prev = s;
    s += t;
  }
  return s < prev ? RationalBracket{s, prev} : RationalBracket{prev, s};
}

// e^-1 = sum (-1)^k / k!
inline RationalBracket exp_minus_one() {
  std::vector<Rational> t;
  Rational f = 1;
  for (int k = 0; k < 30; ++k) {
    if (k > 0) f /= k;
    t.push_back(k % 2 ? Rational(-f) : f);
  }
  return alternating(t);
}

// cos(x) = sum (-1)^k x^(2k) / (2k)!  for |x| <= 1
inline RationalBracket cos_of(const Rational& x) {
  std::vector<Rational> t;
  Rational term = 1;
  for (int k = 0; k < 20; ++k) {
    if (k > 0) term = term * x * x / Rational((2 * k - 1) * (2 * k));
    t.push_back(k % 2 ? Rational(-term) : term);
  }
  return alternating(t);
}

inline Rational R(const Dyadic& d) { return d.to_rational(); }

inline Dyadic random_dyadic(std::mt19937_64& rng, long lo, long hi, int bits) {
  std::uniform_int_distribution<long> u(lo << bits, hi << bits);
  return Dyadic(BigInt(std::to_string(u(rng))), -bits);
}

// Membership oracle for F = {0} in R written directly from the definitions:
// Q of level k is in F0 iff some r in R(Q, max(k+1,0)) has
// 2 diam - eta_k < |r| < 4 diam + eta_k, and Q is in F iff it is in F0 and no
// ancestor of level h, h*_k < h <= k-1, is.
struct OriginOracle {
  static Dyadic eta(long k) { return Dyadic::pow2(-std::max(k + 3, 0L)); }

  static bool in_F0(long k, long long z) {
    const Dyadic e = Dyadic::pow2(-k);
    const long h = std::max(k + 1, 0L);
    const Dyadic step = Dyadic::pow2(-std::max(h, k));
    const Dyadic lo = Dyadic(z) * e, hi = lo + e;
    for (Dyadic r = lo; r <= hi; r += step) {
      const Dyadic d = r.abs();
      if (Dyadic(2) * e - eta(k) < d && d < Dyadic(4) * e + eta(k)) return true;
    }
    return false;
  }

  static long hstar(long k) {
    long h = k;
    while (!(Dyadic::pow2(-h - 1) > Dyadic(4) * Dyadic::pow2(-k) + eta(k).shifted(1))) --h;
    while (Dyadic::pow2(-h - 2) > Dyadic(4) * Dyadic::pow2(-k) + eta(k).shifted(1)) ++h;
    return h;
  }

  static bool in_F(long k, long long z) {
    if (!in_F0(k, z)) return false;
    for (long h = hstar(k) + 1; h <= k - 1; ++h) {
      const long long zh = z >> (k - h);  // floor division by 2^(k-h)
      if (in_F0(h, zh)) return false;
    }
    return true;
  }
};

}  // namespace whitney::test
