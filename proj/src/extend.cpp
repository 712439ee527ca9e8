#include "whitney/extend.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace whitney {

namespace {

Rational rpow(const Rational& a, int k) {
  Rational r = 1;
  for (int t = 0; t < k; ++t) r *= a;
  return r;
}

Rational bprime_r(const MultiIndex& l, int n) {
  static std::mutex mu;
  static std::map<MultiIndex, Rational> memo;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = memo.find(l); it != memo.end()) return it->second;
  }
  Rational v = bprime(l, n).to_rational();
  std::lock_guard<std::mutex> lock(mu);
  return memo.emplace(l, v).first->second;
}

Rational e_of(const Dyadic& eps) { return Rational(2) / (Rational(1) - eps.to_rational()); }

// (98 e / eps)^|l| B'_l
Rational deriv_factor(const MultiIndex& l, const Rational& e, const Dyadic& eps, int n) {
  return rpow(Rational(98) * e / eps.to_rational(), norm(l)) * bprime_r(l, n);
}

Dyadic norm1_ceil(const DyPoint& y) {
  Dyadic s;
  for (const auto& v : y) s += v.abs();
  return Dyadic(s.ceil(), 0);
}

}  // namespace

BigInt degree_count(int n, int d) {
  if (d < 0) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(d + n - 1), static_cast<unsigned long>(n - 1));
  return r;
}

Rational whitney_A(int n, int m, const Rational& M, const MultiIndex& k, const Dyadic& eps) {
  const Rational e = e_of(eps);
  const Rational a = Rational(7) * e + 1;
  auto inner = [&](const MultiIndex& base) {
    Rational s = 0;
    for (const auto& l : indices_up_to(n, m - norm(base))) {
      s += M * rpow(a, m - norm(base + l) + 1) / Rational(factorial(l));
    }
    return s;
  };
  Rational total = inner(k);
  const Rational N(cube_count_bound(n));
  for (const auto& l : indices_up_to(n, norm(k))) {
    if (norm(l) == 0 || !leq(l, k)) continue;
    total += Rational(binomial(k, l)) * N * deriv_factor(l, e, eps, n) * inner(k - l);
  }
  return total;
}

ExtConstants ext_constants(const WhitneyJet& jet, const Dyadic& eps) {
  ExtConstants c;
  c.eps = eps;
  c.n = jet.dim();
  c.m = jet.order;
  c.M = jet.M.to_rational();
  c.e = e_of(eps);
  c.c = Rational(14) * c.e + 1;
  c.N = cube_count_bound(c.n);
  for (const auto& k : indices_up_to(c.n, c.m)) c.Ak[k] = whitney_A(c.n, c.m, c.M, k, eps);
  c.A = c.Ak.at(MultiIndex(c.n, 0));
  return c;
}

// ---------------------------------------------------------------------------

FnPair make_pair(const FnOnF& f, const DyPoint& y, long b) {
  const Dyadic R = norm1_ceil(y) + Dyadic(1);
  const Dyadic rho = f.modulus(R, Dyadic::pow2(-b - 2));
  FnPair p;
  p.b = b;
  p.domain = Ball{y, min(Dyadic::pow2(-b), rho)};
  p.value = Ball{{f.eval(CPoint::exact(y), b + 2)}, Dyadic::pow2(-b)};
  return p;
}

FnPair PairStream::next() {
  while (pos_ >= buf_.size()) {
    if (++b_ > stage_) {
      ++stage_;
      b_ = 0;
    }
    buf_.clear();
    pos_ = 0;
    f_.F->dense_round(stage_ - b_, [&](const DyPoint& y) {
      buf_.push_back(y);
      return true;
    });
  }
  FnPair p = make_pair(f_, buf_[pos_], b_);
  p.round = stage_ - b_;
  ++pos_;
  return p;
}

std::string branch_name(Branch b) { return b == Branch::OutsideF ? "outsideF" : "viaF"; }

WhitneyJet as_jet(const FnOnF& f) {
  WhitneyJet j;
  j.order = 0;
  j.F = f.F;
  j.comp.emplace(MultiIndex(f.F->dim(), 0), f);
  return j;
}

// ---------------------------------------------------------------------------

struct Extender::Query {
  const WhitneyJet& jet;
  const CPoint& x;
  const MultiIndex& k;
  long i;
  Rational e, c, tol;
  BigInt N;
  // approximations to 1/2 of the order-0 extensions of the top components at x
  std::map<MultiIndex, Dyadic> top;
  bool have_top = false;
  Dyadic out;
};

Extender::Extender(std::shared_ptr<const CubeContext> ctx) : ctx_(std::move(ctx)) {
  if (!ctx_) throw std::invalid_argument("extender needs a cube context");
}

namespace {

// ceil(log2 sqrt(n)) + 1: points within sup-distance r 2^-t of x lie within r/2
long inner_shift(int n) {
  long t = 0;
  while ((1L << (2 * t)) < n) ++t;
  return t + 1;
}

// Walks dense round a within sup-distance `reach` of x until accept() holds.
template <class Accept>
bool first_near(const TotalClosedSet& F, long a, const CPoint& x, const Dyadic& reach, long p, Accept&& accept) {
  const DyPoint X = x.approx(p);
  bool hit = false;
  F.dense_round_near(a, X, reach, [&](const DyPoint& y) {
    if (accept(y)) {
      hit = true;
      return false;
    }
    return true;
  });
  return hit;
}

}  // namespace

EvalResult Extender::wet0(const FnOnF& f, const CPoint& x, long i) const {
  const TotalClosedSet& F = ctx_->F();
  if (x.dim() != F.dim()) throw std::invalid_argument("point dimension mismatch");
  const Rational c = Rational(14) * e_of(eps()) + 1;
  for (long s = 0;; ++s) {
    if (F.probe_round(x, s)) {
      return {outside_value(as_jet(f), x, MultiIndex(x.dim(), 0), i), i, Branch::OutsideF, s};
    }
    for (long b = std::max(i, 0L); b <= s; ++b) {
      // admissible centres lie within min(2^-b, rho) / c of x
      const Dyadic R = norm1_ceil(x.approx(0)) + Dyadic(3);
      const Dyadic r = min(Dyadic::pow2(-b), f.modulus(R, Dyadic::pow2(-b - 2)));
      const long p = std::max(b, -r.log2_floor()) + 16;
      const Dyadic reach = rational_floor(r.to_rational() / c, p).shifted(-inner_shift(x.dim()));
      if (reach.sign() <= 0) continue;
      Dyadic out;
      bool found = first_near(F, s - b, x, reach, p, [&](const DyPoint& y) {
        const DyInterval d = dist_enclosure(x, y, p);
        FnPair pr = make_pair(f, y, b);
        if (!(d.hi.to_rational() * c < pr.domain.radius.to_rational())) return false;
        out = pr.value.center[0];
        return true;
      });
      if (found) return {out, i, Branch::ViaF, s};
    }
  }
}

EvalResult Extender::wetm(const WhitneyJet& jet, const CPoint& x, const MultiIndex& k, long i) const {
  const TotalClosedSet& F = ctx_->F();
  if (x.dim() != F.dim() || static_cast<int>(k.size()) != F.dim())
    throw std::invalid_argument("dimension mismatch");
  if (norm(k) > jet.order) throw std::invalid_argument("derivative order above the jet order");
  for (int v : k)
    if (v < 0) throw std::invalid_argument("negative multi-index entry");
  if (jet.order == 0) return wet0(jet[k], x, i);

  Query q{jet, x, k, i, e_of(eps()), 0, Rational(1, 2) * Dyadic::pow2(-i).to_rational(), cube_count_bound(x.dim()),
          {}, false, {}};
  q.c = Rational(14) * q.e + 1;
  long bmin = 0;
  for (long s = 0;; ++s) {
    if (F.probe_round(x, s)) return {outside_value(jet, x, k, i), i, Branch::OutsideF, s};
    for (long b = bmin; b <= s; ++b) {
      const Rational delta = Dyadic::pow2(-b).to_rational();
      const Dyadic reach = Dyadic::pow2(-b - inner_shift(x.dim()));
      // the conditions are checked at the first admissible centre only
      DyPoint centre;
      bool found = first_near(F, s - b, x, reach, b + 16, [&](const DyPoint& y) {
        if (!(dist_enclosure(x, y, b + 16).hi.to_rational() < delta)) return false;
        centre = y;
        return true;
      });
      if (!found) continue;
      if (via_f(q, centre, b)) return {q.out, i, Branch::ViaF, s};
      // larger radii are not retried
      bmin = b + 1;
    }
  }
}

bool Extender::via_f(Query& q, const DyPoint& y, long b) const {
  const WhitneyJet& jet = q.jet;
  const int n = jet.dim();
  const int m = jet.order;
  const int K = norm(q.k);
  const Rational delta = Dyadic::pow2(-b).to_rational();
  const Rational cd = q.c * delta;
  const BigInt cfloor = q.c.get_num() / q.c.get_den();
  const Dyadic R = norm1_ceil(y) + Dyadic(BigInt(2 * (cfloor + 1)), 0);
  const CPoint Y = CPoint::exact(y);

  auto osc = [&](const MultiIndex& j, const Rational& r) -> std::optional<Rational> {
    auto w = jet[j].oscillation(R, r);
    if (!w) return std::nullopt;
    return w->to_rational();
  };
  // bounds of |f^(j)| over F within c delta of y
  std::map<MultiIndex, Rational> sup;
  for (const auto& j : indices_up_to(n, m)) {
    auto w = osc(j, cd);
    if (!w) return false;
    sup[j] = abs(jet[j].eval(Y, 10).to_rational()) + Rational(1, 1024) + *w;
  }
  const Rational err = Dyadic::pow2(-q.i - 3).to_rational();

  if (K == m) {
    auto w = osc(q.k, cd);
    if (!w || !(err + *w < q.tol)) return false;
    Rational H = 0;
    for (const auto& h : indices_up_to(n, K)) {
      if (h == q.k || !leq(h, q.k)) continue;
      H += Rational(binomial(q.k, h)) * deriv_factor(q.k - h, q.e, eps(), n) *
           whitney_A(n, m, jet.M.to_rational(), h, eps());
    }
    H *= Rational(q.N);
    if (!(H * cd < q.tol)) return false;
  } else {
    const int m2 = m - 1;
    Rational tail = 0;
    for (const auto& j : indices_up_to(n, m2)) {
      Rational s = 0;
      for (const auto& l : indices_of_degree(n, m - norm(j))) s += sup[j + l] / Rational(factorial(l));
      tail = std::max(tail, s);
    }
    const Rational Mloc = jet.M.to_rational() * (Rational(7) * q.e + 1) * delta + tail;
    Rational E = whitney_A(n, m2, Mloc, q.k, eps()) * rpow(delta, m2 - K + 1);
    for (const auto& l : indices_up_to(n, m2 - K))
      if (norm(l) > 0) E += sup[q.k + l] * rpow(delta, norm(l)) / Rational(factorial(l));
    auto w = osc(q.k, 2 * delta);
    if (!w) return false;
    E += *w;
    if (!(err + E < q.tol)) return false;

    if (!q.have_top) {
      for (const auto& l : indices_of_degree(n, m)) q.top[l] = wet0(jet[l], q.x, 1).value;
      q.have_top = true;
    }
    // S_h bounds |f^(h+j)(r_Q)| / j! over |h+j| = m for the cubes at x
    auto S = [&](const MultiIndex& h) {
      Rational stated = 0, local = 0;
      for (const auto& j : indices_of_degree(n, m - norm(h))) {
        const Rational fj(factorial(j));
        stated = std::max(stated, Rational(abs(q.top.at(h + j).to_rational()) / fj));
        local = std::max(local, Rational(sup.at(h + j) / fj));
      }
      return std::max(Rational(Rational(1, 2) + stated), local);
    };
    if (K == 0) {
      if (!(Rational(degree_count(n, m)) * S(q.k) * rpow(cd, m) < q.tol)) return false;
    } else {
      Rational H = 0;
      for (const auto& h : indices_up_to(n, K)) {
        if (!leq(h, q.k)) continue;
        H += Rational(binomial(q.k, h)) * S(h) * deriv_factor(q.k - h, q.e, eps(), n) *
             Rational(degree_count(n, m - norm(h)));
      }
      H *= Rational(q.N);
      if (!(H * rpow(cd, m - K) < q.tol)) return false;
    }
  }
  q.out = jet[q.k].eval(Y, q.i + 3);
  return true;
}

Dyadic Extender::outside_value(const WhitneyJet& jet, const CPoint& x, const MultiIndex& k, long i) const {
  auto gx = ctx_->enum_Gx(x, 1L << 20);
  if (!gx) throw PreconditionError("point not certified outside the set");
  const int n = x.dim();
  std::vector<CPoint> proj;
  for (const auto& q : gx->cubes) proj.push_back(CPoint::exact(ctx_->approx_projection(q)));
  std::vector<MultiIndex> below;
  for (const auto& l : indices_up_to(n, norm(k)))
    if (leq(l, k)) below.push_back(l);
  return refine(
      [&](long p) {
        PhiTable t = phi_table(gx->cubes, x, norm(k), eps(), p + 4);
        DyInterval total(Dyadic(0));
        for (size_t q = 0; q < gx->cubes.size(); ++q) {
          for (const auto& l : below) {
            const DyInterval P = taylor_enclose(jet, l, proj[q], x, p + 8);
            total += (DyInterval(Dyadic(binomial(k, l), 0)) * P * t.phistar[q][t.slot(k - l)]).round_out(p + 8);
          }
        }
        return total;
      },
      i);
}

Dyadic wet0_eval(const Extender& ext, const FnOnF& f, const CPoint& x, long i) { return ext.wet0(f, x, i).value; }

Dyadic wetm_eval(const Extender& ext, const WhitneyJet& jet, const CPoint& x, const MultiIndex& k, long i) {
  return ext.wetm(jet, x, k, i).value;
}

}  // namespace whitney
