#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "whitney/bump.hpp"
#include "whitney/closedset.hpp"

namespace whitney {

// Continuous function on a closed set F.
//
// `enclose` returns an enclosure of f over the points of F inside a
// coordinate box (it may ignore the restriction to F). `modulus(R, e)` returns
// d > 0 with |f(a) - f(b)| <= e whenever a, b lie in F, |a|, |b| <= R and
// d(a, b) <= d; it is monotone in e.
struct FnOnF {
  using Enclose = std::function<DyInterval(const std::vector<DyInterval>&, long)>;
  using Modulus = std::function<Dyadic(const Dyadic&, const Dyadic&)>;

  SetPtr F;
  Enclose enclose;
  Modulus modulus;

  // |result - f(x)| <= 2^-i for x in F
  Dyadic eval(const CPoint& x, long i) const;
  DyInterval enclose_at(const CPoint& x, long p) const { return enclose(x.enclose(p), p); }
  // smallest power of two w with modulus(R, w) >= r, an upper bound for the
  // oscillation of f over pairs at distance <= r; nullopt above 2^64
  std::optional<Dyadic> oscillation(const Dyadic& R, const Rational& r) const;
};

// f + g, a * f
FnOnF fn_sum(const FnOnF& f, const FnOnF& g);
FnOnF fn_scale(const FnOnF& f, const Dyadic& a);

// Whitney jet of order m on F with compatibility constant M.
struct WhitneyJet {
  int order = 0;
  SetPtr F;
  std::map<MultiIndex, FnOnF> comp;  // every |k| <= order
  Dyadic M;

  int dim() const { return F->dim(); }
  const FnOnF& operator[](const MultiIndex& k) const;
  // components of order <= m2 with the same M
  WhitneyJet truncated(int m2) const;
};

// a*J1 + b*J2 on the same set; M = |a| M1 + |b| M2
WhitneyJet jet_combine(const Dyadic& a, const WhitneyJet& j1, const Dyadic& b, const WhitneyJet& j2);

// Built-in global functions of x_1:
//   poly  h = sum c_j x_1^j      (coeffs c_0, c_1, ...)
//   cos   h = cos(a x_1 + b)     (coeffs a, b)
//   sin   h = sin(a x_1 + b)
//   expc  h = exp(a x_1 + b)
struct JetSpec {
  std::string builtin;
  std::vector<Dyadic> coeffs;
  int order = 0;
  std::optional<Dyadic> M;  // nullopt: derived automatically
};

// Restriction of the built-in h and its partials to F. With M unset, uses
// n^((m+1)/2) * sup_{|j|=m+1, hull F} |d_j h| * max(1, sum_{|l|<=m} 1/l!).
// Throws std::invalid_argument on a bad spec, or when that bound needs a
// bounded F and none is known.
WhitneyJet jet_make(const JetSpec& spec, SetPtr F);

// d_k h as a function on R^n for the built-in of the spec (used by tests
// and the checker to compare against the closed form)
FnOnF builtin_partial(const JetSpec& spec, SetPtr F, const MultiIndex& k);

// P^k_y(x) = sum_{|k+l| <= m} f^(k+l)(y) (x - y)^l / l!
DyInterval taylor_enclose(const WhitneyJet& jet, const MultiIndex& k, const CPoint& y, const CPoint& x, long p);
Dyadic taylor_eval(const WhitneyJet& jet, const MultiIndex& k, const CPoint& y, const CPoint& x, long i);

// Sampled check of |f^(k)(x) - P^k_y(x)| <= M d(x,y)^(m-|k|+1) over pairs of
// dense points. A pair counts as a violation only when certified.
struct CompatReport {
  bool ok = true;
  long pairs = 0;
  long checks = 0;
  long violations = 0;
  std::string first_violation;
};
CompatReport validate_compat(const WhitneyJet& jet, long pairs, std::uint64_t seed, size_t dense_points = 256);

}  // namespace whitney
