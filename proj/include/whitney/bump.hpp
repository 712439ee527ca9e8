#pragma once

#include <map>
#include <vector>

#include "whitney/cubes.hpp"

namespace whitney {

using MultiIndex = std::vector<int>;

int norm(const MultiIndex& k);
BigInt factorial(const MultiIndex& k);
// C(k, l) = prod C(k_c, l_c); zero unless l <= k componentwise
BigInt binomial(const MultiIndex& k, const MultiIndex& l);
bool leq(const MultiIndex& l, const MultiIndex& k);
MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);
MultiIndex unit_index(int n, int c);
// all multi-indices of dimension n with |k| <= K, graded then lexicographic
std::vector<MultiIndex> indices_up_to(int n, int K);
// all multi-indices of dimension n with |k| == K
std::vector<MultiIndex> indices_of_degree(int n, int K);
std::string index_str(const MultiIndex& k);

// Symbolic expansion of a partial derivative of a quotient u/v:
//   d_k (u/v) = sum_j W_j / v^(|k|+1),
//   W_j = r_j * (d_{lead_j} u) * prod_{l != 0} (d_l v)^{powers_j[l]} * v^{vpow_j}.
struct QuotientTerm {
  BigInt r;
  MultiIndex lead;
  std::map<MultiIndex, int> powers;
  int vpow = 0;
};

struct QuotientExpansion {
  MultiIndex k;
  std::vector<QuotientTerm> terms;
};

// cached; safe for concurrent use
const QuotientExpansion& quotient_expand(const MultiIndex& k);

// Evaluates an expansion with enclosures U[l] of d_l u and V[l] of d_l v
// (indexed through `index_of`); V[0] must be bounded away from zero.
template <class LookupU, class LookupV>
DyInterval eval_quotient(const QuotientExpansion& e, LookupU&& U, LookupV&& V, long p);

// Coefficients of P_k with lambda^(k)(x) = e^(-1/x) x^(-2k) P_k(x) for x > 0.
std::vector<BigInt> lambda_poly(int k);

struct DerivBoundTable {
  std::vector<BigInt> A;  // sum of |coefficients| of P_k
  std::vector<BigInt> H;  // sup |lambda^(k)| <= H_k
  std::vector<BigInt> T;  // numerator bound of mu^(k)
  std::vector<BigInt> B;  // sup |mu^(k)| <= B_k
};

// Tables for k <= kmax; computed once and grown on demand.
DerivBoundTable deriv_bounds(int kmax);
BigInt bound_H(int k);
BigInt bound_B(int k);
// B_k for a multi-index: product of the per-axis B
BigInt bound_B(const MultiIndex& k);
// ceil(197 sqrt n)^n
BigInt cube_count_bound(int n);
// dyadic upper bound of B'_k (derivative bound of the partition functions)
Dyadic bprime(const MultiIndex& k, int n);

// Interval enclosures. Each returns the vector of derivatives of orders 0..K
// over the argument interval, with inexact operations rounded at precision p.
std::vector<DyInterval> lambda_enclose(const DyInterval& x, int K, long p);
std::vector<DyInterval> mu_enclose(const DyInterval& t, int K, long p);
std::vector<DyInterval> nu_enclose(const DyInterval& x, int K, const Dyadic& eps, long p);

// 2^-i approximations of derivatives at computable reals.
Dyadic lambda_deriv(const CReal& x, int k, long i);
Dyadic mu_deriv(const CReal& x, int k, long i);
Dyadic nu_deriv(const CReal& x, int k, long i, const Dyadic& eps);

// Enclosures of d_k phi_Q, d_k Phi and d_k phi*_Q at one point for every cube
// of a list (normally G_x) and every |k| <= K, at working precision p.
struct PhiTable {
  std::vector<MultiIndex> index;  // indices_up_to(n, K)
  std::vector<std::vector<DyInterval>> phi;      // [cube][index]
  std::vector<DyInterval> Phi;                   // [index]
  std::vector<std::vector<DyInterval>> phistar;  // [cube][index]
  size_t slot(const MultiIndex& k) const;
};

PhiTable phi_table(const std::vector<DyadicCube>& cubes, const CPoint& x, int K,
                   const Dyadic& eps, long p);

// Raised when a partition function is requested at a point not certified to
// lie outside F.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 2^-i approximation of d_k phi_Q(x).
Dyadic phi_deriv(const DyadicCube& q, const CPoint& x, const MultiIndex& k, long i, const Dyadic& eps);
// 2^-i approximation of d_k phi*_Q(x); x must be outside F (certified through
// the G_x search within `budget`).
Dyadic phistar_deriv(const CubeContext& ctx, const DyadicCube& q, const CPoint& x, const MultiIndex& k,
                     long i, long budget = 200);

// ---------------------------------------------------------------------------

template <class LookupU, class LookupV>
DyInterval eval_quotient(const QuotientExpansion& e, LookupU&& U, LookupV&& V, long p) {
  const MultiIndex zero(e.k.size(), 0);
  const DyInterval v0 = V(zero);
  DyInterval num(Dyadic(0));
  for (const auto& t : e.terms) {
    DyInterval w = DyInterval(Dyadic(t.r, 0)) * U(t.lead);
    for (const auto& [l, m] : t.powers) w = (w * pow(V(l), static_cast<unsigned>(m))).round_out(p);
    if (t.vpow > 0) w = (w * pow(v0, static_cast<unsigned>(t.vpow))).round_out(p);
    num += w;
  }
  return div(num, pow(v0, static_cast<unsigned>(norm(e.k) + 1)).round_out(p + 8), p);
}

}  // namespace whitney
