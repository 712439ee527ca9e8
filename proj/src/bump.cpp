#include "whitney/bump.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace whitney {

namespace {

long bits(const BigInt& z) { return z == 0 ? 0 : static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2)); }

Dyadic big(const BigInt& z) { return Dyadic(z, 0); }

DyInterval sym(const Dyadic& r) { return {-r, r}; }

DyInterval shifted(const DyInterval& a, long s) { return {a.lo.shifted(s), a.hi.shifted(s)}; }

// intersection that tolerates only the expected overlap
DyInterval meet(const DyInterval& a, const DyInterval& b) { return intersect(a, b); }

BigInt binom(int n, int k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// multi-indices

int norm(const MultiIndex& k) {
  int s = 0;
  for (int v : k) s += v;
  return s;
}

BigInt factorial(const MultiIndex& k) {
  BigInt r = 1;
  for (int v : k) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(v));
    r *= f;
  }
  return r;
}

bool leq(const MultiIndex& l, const MultiIndex& k) {
  for (size_t c = 0; c < k.size(); ++c)
    if (l[c] > k[c]) return false;
  return true;
}

BigInt binomial(const MultiIndex& k, const MultiIndex& l) {
  if (!leq(l, k)) return 0;
  BigInt r = 1;
  for (size_t c = 0; c < k.size(); ++c) r *= binom(k[c], l[c]);
  return r;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r(a);
  for (size_t c = 0; c < r.size(); ++c) r[c] += b[c];
  return r;
}

MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r(a);
  for (size_t c = 0; c < r.size(); ++c) r[c] -= b[c];
  return r;
}

MultiIndex unit_index(int n, int c) {
  MultiIndex r(n, 0);
  r[c] = 1;
  return r;
}

std::vector<MultiIndex> indices_of_degree(int n, int K) {
  std::vector<MultiIndex> out;
  MultiIndex cur(n, 0);
  // lexicographically decreasing in the first coordinate
  auto rec = [&](auto&& self, int c, int left) -> void {
    if (c == n - 1) {
      cur[c] = left;
      out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[c] = v;
      self(self, c + 1, left - v);
    }
  };
  if (n > 0) rec(rec, 0, K);
  return out;
}

std::vector<MultiIndex> indices_up_to(int n, int K) {
  std::vector<MultiIndex> out;
  for (int d = 0; d <= K; ++d) {
    auto layer = indices_of_degree(n, d);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

std::string index_str(const MultiIndex& k) {
  std::string s = "(";
  for (size_t c = 0; c < k.size(); ++c) {
    if (c) s += ",";
    s += std::to_string(k[c]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// quotient expansion

namespace {

using Signature = std::tuple<MultiIndex, std::map<MultiIndex, int>, int>;

QuotientExpansion differentiate(const QuotientExpansion& e, int c) {
  const int n = static_cast<int>(e.k.size());
  const int d = norm(e.k) + 1;
  const MultiIndex ec = unit_index(n, c);
  std::map<Signature, BigInt> acc;
  auto add = [&](const MultiIndex& lead, const std::map<MultiIndex, int>& powers, int vpow, const BigInt& r) {
    if (r == 0) return;
    acc[Signature{lead, powers, vpow}] += r;
  };
  for (const auto& t : e.terms) {
    add(t.lead + ec, t.powers, t.vpow + 1, t.r);
    for (const auto& [l, m] : t.powers) {
      auto p = t.powers;
      if (--p[l] == 0) p.erase(l);
      ++p[l + ec];
      add(t.lead, p, t.vpow + 1, t.r * m);
    }
    auto p = t.powers;
    ++p[ec];
    add(t.lead, p, t.vpow, t.r * (t.vpow - d));
  }
  QuotientExpansion out;
  out.k = e.k + ec;
  for (auto& [sig, r] : acc) {
    if (r == 0) continue;
    out.terms.push_back({r, std::get<0>(sig), std::get<1>(sig), std::get<2>(sig)});
  }
  return out;
}

std::mutex g_expand_mu;
std::map<MultiIndex, QuotientExpansion> g_expand;

}  // namespace

const QuotientExpansion& quotient_expand(const MultiIndex& k) {
  std::lock_guard<std::mutex> lock(g_expand_mu);
  if (auto it = g_expand.find(k); it != g_expand.end()) return it->second;
  // build along the path that raises the leading coordinates first
  MultiIndex cur(k.size(), 0);
  auto it = g_expand.find(cur);
  if (it == g_expand.end()) {
    QuotientExpansion base;
    base.k = cur;
    base.terms.push_back({BigInt(1), cur, {}, 0});
    it = g_expand.emplace(cur, std::move(base)).first;
  }
  for (size_t c = 0; c < k.size(); ++c) {
    while (cur[c] < k[c]) {
      MultiIndex next = cur;
      ++next[c];
      auto nit = g_expand.find(next);
      if (nit == g_expand.end()) nit = g_expand.emplace(next, differentiate(it->second, static_cast<int>(c))).first;
      it = nit;
      cur = next;
    }
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// bound tables

std::vector<BigInt> lambda_poly(int k) {
  std::vector<BigInt> p{BigInt(1)};
  for (int j = 0; j < k; ++j) {
    // P_{j+1} = (1 - 2j x) P_j + x^2 P_j'
    std::vector<BigInt> q(p.size() + 1, BigInt(0));
    for (size_t a = 0; a < p.size(); ++a) {
      q[a] += p[a];
      q[a + 1] -= BigInt(2 * j) * p[a];
      if (a >= 1) q[a + 1] += BigInt(static_cast<long>(a)) * p[a];
    }
    while (q.size() > 1 && q.back() == 0) q.pop_back();
    p = std::move(q);
  }
  return p;
}

namespace {

std::mutex g_bounds_mu;
DerivBoundTable g_bounds;

void ensure_bounds(int kmax) {
  auto& t = g_bounds;
  while (static_cast<int>(t.H.size()) <= kmax) {
    const int k = static_cast<int>(t.H.size());
    BigInt a = 0;
    for (const auto& c : lambda_poly(k)) a += abs(c);
    t.A.push_back(a);
    BigInt h = a;
    if (k > 0) {
      BigInt base = 2 * k, pw;
      mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(2 * k));
      h *= pw;
    }
    t.H.push_back(h);
  }
  while (static_cast<int>(t.T.size()) <= kmax) {
    const int k = static_cast<int>(t.T.size());
    BigInt total = 0;
    for (const auto& term : quotient_expand(MultiIndex{k}).terms) {
      BigInt w = abs(term.r) * t.H[term.lead[0]];
      for (const auto& [l, m] : term.powers) {
        BigInt f, b = 2 * t.H[l[0]];
        mpz_pow_ui(f.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(m));
        w *= f;
      }
      w <<= static_cast<unsigned long>(term.vpow);
      total += w;
    }
    t.T.push_back(total);
    t.B.push_back(total << static_cast<unsigned long>(3 * (k + 1)));
  }
}

}  // namespace

DerivBoundTable deriv_bounds(int kmax) {
  std::lock_guard<std::mutex> lock(g_bounds_mu);
  ensure_bounds(kmax);
  DerivBoundTable out;
  out.A.assign(g_bounds.A.begin(), g_bounds.A.begin() + kmax + 1);
  out.H.assign(g_bounds.H.begin(), g_bounds.H.begin() + kmax + 1);
  out.T.assign(g_bounds.T.begin(), g_bounds.T.begin() + kmax + 1);
  out.B.assign(g_bounds.B.begin(), g_bounds.B.begin() + kmax + 1);
  return out;
}

BigInt bound_H(int k) {
  std::lock_guard<std::mutex> lock(g_bounds_mu);
  ensure_bounds(k);
  return g_bounds.H[k];
}

BigInt bound_B(int k) {
  std::lock_guard<std::mutex> lock(g_bounds_mu);
  ensure_bounds(k);
  return g_bounds.B[k];
}

BigInt bound_B(const MultiIndex& k) {
  BigInt r = 1;
  for (int v : k) r *= bound_B(v);
  return r;
}

BigInt cube_count_bound(int n) {
  // smallest c with c^2 >= 197^2 n
  BigInt t = BigInt(197 * 197) * n, c;
  mpz_sqrt(c.get_mpz_t(), t.get_mpz_t());
  if (c * c < t) ++c;
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

Dyadic bprime(const MultiIndex& k, int n) {
  if (static_cast<int>(k.size()) != n) throw std::invalid_argument("multi-index dimension mismatch");
  const Dyadic rn = sqrt_int_upper(n, 32);
  const Dyadic N = big(cube_count_bound(n));
  Dyadic total;
  for (const auto& t : quotient_expand(k).terms) {
    Dyadic w = big(abs(t.r)) * big(bound_B(t.lead));
    for (int j = 0; j < norm(t.lead); ++j) w *= rn;
    for (const auto& [l, m] : t.powers) {
      Dyadic f = N * big(bound_B(l));
      for (int j = 0; j < norm(l); ++j) f *= Dyadic(21) * rn;
      for (int j = 0; j < m; ++j) w *= f;
    }
    total += w;
  }
  return total;
}

// ---------------------------------------------------------------------------
// lambda, mu, nu

std::vector<DyInterval> lambda_enclose(const DyInterval& x, int K, long p) {
  std::vector<DyInterval> out(K + 1, DyInterval(Dyadic(0)));
  if (x.hi.sign() <= 0) return out;
  std::vector<Dyadic> H(K + 2);
  for (int k = 0; k <= K + 1; ++k) H[k] = big(bound_H(k));
  // |lambda^(k)(t)| <= H_{k+1} t for t > 0 (mean value from 0)
  std::vector<DyInterval> mvt(K + 1);
  bool all_small = true;
  const Dyadic tiny = Dyadic::pow2(-p - 2);
  for (int k = 0; k <= K; ++k) {
    Dyadic m = H[k + 1] * x.hi;
    mvt[k] = k == 0 ? DyInterval(Dyadic(0), min(m, Dyadic(1))) : sym(m);
    if (m > tiny) all_small = false;
  }
  if (x.lo.sign() <= 0 || all_small) return mvt;

  const DyInterval y = recip(x, p + 8);
  const long ybits = std::max(1L, y.hi.log2_ceil());
  const long abits = bits(deriv_bounds(K).A[K]);
  const long w = p + 2 * K * ybits + abits + 12;
  const DyInterval yw = recip(x, w);
  const DyInterval e = exp(-yw, w);
  const DyInterval y2 = sqr(yw).round_out(w);
  DyInterval ypow(Dyadic(1));
  for (int k = 0; k <= K; ++k) {
    const auto coeffs = lambda_poly(k);
    DyInterval poly(big(coeffs.back()));
    for (size_t a = coeffs.size() - 1; a-- > 0;) poly = (poly * x + DyInterval(big(coeffs[a]))).round_out(w);
    DyInterval v = (e * ypow).round_out(w);
    v = (v * poly).round_out(p + 2);
    v = meet(v, sym(H[k]));
    v = meet(v, mvt[k]);
    out[k] = v;
    ypow = (ypow * y2).round_out(w);
  }
  return out;
}

std::vector<DyInterval> mu_enclose(const DyInterval& t, int K, long p) {
  std::vector<DyInterval> out(K + 1, DyInterval(Dyadic(0)));
  const Dyadic one(1);
  if (t.hi.sign() <= 0) return out;
  if (t.lo >= one) {
    out[0] = DyInterval(one);
    return out;
  }
  const auto tab = deriv_bounds(K + 1);
  std::vector<DyInterval> cap(K + 1);
  for (int k = 0; k <= K; ++k) cap[k] = k == 0 ? DyInterval(Dyadic(0), one) : sym(big(tab.B[k]));
  // mean value bounds around the endpoints 0 and 1 of the transition
  auto near0 = [&](int k) { return sym(big(tab.B[k + 1]) * t.hi); };
  auto near1 = [&](int k) {
    Dyadic r = big(tab.B[k + 1]) * (one - t.lo);
    Dyadic c = k == 0 ? one : Dyadic(0);
    return DyInterval(c - r, c + r);
  };
  const bool straddle0 = t.lo.sign() <= 0;
  const bool straddle1 = t.hi >= one;
  if (straddle0 && straddle1) return cap;
  if (straddle0) {
    for (int k = 0; k <= K; ++k) out[k] = meet(cap[k], near0(k));
    return out;
  }
  if (straddle1) {
    for (int k = 0; k <= K; ++k) out[k] = meet(cap[k], near1(k));
    return out;
  }
  const long w = p + 3 * (K + 1) + bits(tab.T[K]) + 10;
  const auto U = lambda_enclose(t, K, w);
  const auto W = lambda_enclose(DyInterval(one) - t, K, w);
  std::vector<DyInterval> V(K + 1);
  for (int l = 0; l <= K; ++l) V[l] = (l % 2 == 0) ? U[l] + W[l] : U[l] - W[l];
  // lambda(t) + lambda(1-t) >= lambda(1/2) > 1/8
  V[0] = meet(V[0], DyInterval(Dyadic(1, -3), Dyadic(2)));
  auto u = [&](const MultiIndex& l) { return U[l[0]]; };
  auto v = [&](const MultiIndex& l) { return V[l[0]]; };
  for (int k = 0; k <= K; ++k) {
    DyInterval r = eval_quotient(quotient_expand(MultiIndex{k}), u, v, p + 2);
    r = meet(r, cap[k]);
    r = meet(r, near0(k));
    r = meet(r, near1(k));
    out[k] = r;
  }
  return out;
}

std::vector<DyInterval> nu_enclose(const DyInterval& x, int K, const Dyadic& eps, long p) {
  const Dyadic half(1, -1);
  const Dyadic a = half + eps.shifted(-1);
  std::vector<DyInterval> out(K + 1, DyInterval(Dyadic(0)));
  // outside the support every derivative vanishes
  if (x.lo >= a || x.hi <= -a) return out;
  if (x.lo >= -half && x.hi <= half) {
    out[0] = DyInterval(Dyadic(1));
    return out;
  }
  const DyInterval s = div(DyInterval(Dyadic(2)), DyInterval(eps), p + 16);
  const long sbits = s.hi.log2_ceil() + 1;
  const long w = p + K * (sbits + 1) + K + 8;
  const DyInterval sw = div(DyInterval(Dyadic(2)), DyInterval(eps), w);
  const DyInterval t1 = (sw * (x + DyInterval(a))).round_out(w);
  const DyInterval t2 = (sw * (DyInterval(a) - x)).round_out(w);
  const auto m1 = mu_enclose(t1, K, w);
  const auto m2 = mu_enclose(t2, K, w);
  DyInterval spow(Dyadic(1));
  for (int k = 0; k <= K; ++k) {
    DyInterval acc(Dyadic(0));
    for (int i = 0; i <= k; ++i) {
      DyInterval term = (DyInterval(big(binom(k, i))) * m1[k - i] * m2[i]).round_out(w);
      acc = (i % 2 == 0) ? acc + term : acc - term;
    }
    DyInterval v = (acc * spow).round_out(p + 2);
    if (k == 0) v = meet(v, DyInterval(Dyadic(0), Dyadic(1)));
    else v = meet(v, sym(big(bound_B(k)) * spow.hi));
    out[k] = v;
    spow = (spow * sw).round_out(w);
  }
  return out;
}

Dyadic lambda_deriv(const CReal& x, int k, long i) {
  const BigInt H = bound_H(k + 1);
  // least j with 2^(-j+1) H < 2^-i
  long j = i + 1;
  while (!(big(H) * Dyadic::pow2(1 - j) < Dyadic::pow2(-i))) ++j;
  const Dyadic xj = x.approx(j);
  // x[j] < 2^-i / H - 2^-j, multiplied through by H
  if (xj * big(H) < Dyadic::pow2(-i) - Dyadic::pow2(-j) * big(H)) return Dyadic(0);
  return refine([&](long p) { return lambda_enclose(x.enclose(p), k, p)[k]; }, i);
}

Dyadic mu_deriv(const CReal& x, int k, long i) {
  return refine([&](long p) { return mu_enclose(x.enclose(p), k, p)[k]; }, i);
}

Dyadic nu_deriv(const CReal& x, int k, long i, const Dyadic& eps) {
  return refine([&](long p) { return nu_enclose(x.enclose(p), k, eps, p)[k]; }, i);
}

// ---------------------------------------------------------------------------
// phi tables

namespace {

std::vector<DyInterval> phi_values(const DyadicCube& q, const CPoint& x, const std::vector<MultiIndex>& idx,
                                   int K, const Dyadic& eps, long p) {
  const int n = q.dim();
  const long lev = q.level;
  const long pp = p + K * std::max(lev, 0L) + 4 * n + 8;
  const DyPoint c = q.center();
  std::vector<std::vector<DyInterval>> nus(n);
  for (int d = 0; d < n; ++d) {
    DyInterval t = shifted(x[d].enclose(pp + std::max(-lev, 0L) + 4) - DyInterval(c[d]), lev);
    nus[d] = nu_enclose(t, K, eps, pp);
  }
  std::vector<DyInterval> out;
  out.reserve(idx.size());
  for (const auto& k : idx) {
    DyInterval v(Dyadic(1));
    for (int d = 0; d < n; ++d) v = (v * nus[d][k[d]]).round_out(pp);
    out.push_back(shifted(v, lev * norm(k)).round_out(p + 4));
  }
  return out;
}

}  // namespace

size_t PhiTable::slot(const MultiIndex& k) const {
  for (size_t s = 0; s < index.size(); ++s)
    if (index[s] == k) return s;
  throw std::out_of_range("multi-index outside table");
}

PhiTable phi_table(const std::vector<DyadicCube>& cubes, const CPoint& x, int K, const Dyadic& eps, long p) {
  const int n = x.dim();
  PhiTable t;
  t.index = indices_up_to(n, K);
  const size_t m = t.index.size();
  t.Phi.assign(m, DyInterval(Dyadic(0)));
  for (const auto& q : cubes) {
    t.phi.push_back(phi_values(q, x, t.index, K, eps, p + 8));
    for (size_t s = 0; s < m; ++s) t.Phi[s] += t.phi.back()[s];
  }
  if (t.Phi[0].hi < Dyadic(1)) throw std::logic_error("cube list does not cover the point");
  t.Phi[0] = meet(t.Phi[0], DyInterval(Dyadic(1), max(t.Phi[0].hi, Dyadic(1))));
  for (size_t q = 0; q < cubes.size(); ++q) {
    std::vector<DyInterval> row;
    row.reserve(m);
    auto u = [&](const MultiIndex& l) { return t.phi[q][t.slot(l)]; };
    auto v = [&](const MultiIndex& l) { return t.Phi[t.slot(l)]; };
    for (size_t s = 0; s < m; ++s) {
      DyInterval r = eval_quotient(quotient_expand(t.index[s]), u, v, p + 4);
      if (s == 0) r = meet(r, DyInterval(Dyadic(0), Dyadic(1)));
      row.push_back(r);
    }
    t.phistar.push_back(std::move(row));
  }
  return t;
}

Dyadic phi_deriv(const DyadicCube& q, const CPoint& x, const MultiIndex& k, long i, const Dyadic& eps) {
  if (x.dim() != q.dim() || static_cast<int>(k.size()) != q.dim())
    throw std::invalid_argument("dimension mismatch");
  const std::vector<MultiIndex> idx{k};
  const int K = *std::max_element(k.begin(), k.end());
  return refine([&](long p) { return phi_values(q, x, idx, K, eps, p)[0]; }, i);
}

Dyadic phistar_deriv(const CubeContext& ctx, const DyadicCube& q, const CPoint& x, const MultiIndex& k,
                     long i, long budget) {
  if (x.dim() != q.dim() || static_cast<int>(k.size()) != q.dim())
    throw std::invalid_argument("dimension mismatch");
  auto gx = ctx.enum_Gx(x, budget);
  if (!gx) throw PreconditionError("point not certified outside the set");
  const int K = norm(k);
  const auto index = indices_up_to(x.dim(), K);
  const auto& e = quotient_expand(k);
  auto slot = [&](const MultiIndex& l) {
    return static_cast<size_t>(std::find(index.begin(), index.end(), l) - index.begin());
  };
  return refine(
      [&](long p) {
        // the normalizer is shared by every cube of G_x
        const std::string key = "Phi|" + x.key() + "|" + std::to_string(K) + "|" + std::to_string(p) + "|" + ctx.eps().str();
        std::vector<DyInterval> Phi;
        if (auto hit = ctx.memo_get(key)) {
          Phi = std::move(*hit);
        } else {
          const PhiTable t = phi_table(gx->cubes, x, K, ctx.eps(), p);
          Phi = t.Phi;
          ctx.memo_put(key, Phi);
        }
        auto uq = phi_values(q, x, index, K, ctx.eps(), p + 8);
        auto u = [&](const MultiIndex& l) { return uq[slot(l)]; };
        auto v = [&](const MultiIndex& l) { return Phi[slot(l)]; };
        return eval_quotient(e, u, v, p + 4);
      },
      i);
}

}  // namespace whitney
