// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each criterion also fails when it exceeds its time limit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "support.hpp"
#include "whitney/bump.hpp"
#include "whitney/extend.hpp"

using namespace whitney;
using namespace whitney::test;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Verdict()> body;
};

std::string str(const Rational& q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", q.get_d());
  return buf;
}

JetSpec spec(std::string builtin, std::vector<Dyadic> coeffs, int order) {
  return JetSpec{std::move(builtin), std::move(coeffs), order, std::nullopt};
}

std::shared_ptr<const CubeContext> context(SetPtr F) { return std::make_shared<const CubeContext>(std::move(F)); }

std::vector<DyPoint> dense_points(const SetPtr& F, size_t count) {
  std::vector<DyPoint> out;
  auto cur = F->dense();
  while (out.size() < count) out.push_back(cur.next());
  return out;
}

// squared Euclidean norm compared against multiples of edge^2, exactly
Dyadic sq(const Dyadic& d) { return d * d; }

// a point whose distance to F is certified to lie in [lo, hi]; the offset from
// a dense point of F has a log-uniform scale
std::optional<DyPoint> point_at_scale(const SetPtr& F, const std::vector<DyPoint>& pts, std::mt19937_64& rng, long lo_exp,
                                      long hi_exp) {
  const int n = F->dim();
  const long u = lo_exp + static_cast<long>(rng() % static_cast<unsigned long>(hi_exp - lo_exp + 1));
  DyPoint x = pts[rng() % pts.size()];
  for (int c = 0; c < n; ++c) x[c] += Dyadic(BigInt(static_cast<long>(rng() % 2049) - 1024), u - 10);
  const long j = 30;
  const Dyadic d = F->dist(CPoint::exact(x), j);
  if (d - Dyadic::pow2(-j) < Dyadic::pow2(lo_exp) || d + Dyadic::pow2(-j) > Dyadic::pow2(hi_exp)) return std::nullopt;
  return x;
}

// 1. golden decomposition of {0} against the brute-force oracle
Verdict golden() {
  const CubeContext ctx(origin());
  const Box w{{D(-64)}, {D(64)}};
  const long kmin = -8, kmax = 6;
  std::set<std::pair<long, long long>> got, oracle, closed;
  for (const auto& q : ctx.enum_region(w, kmin, kmax)) got.insert({q.level, q.corner[0]});
  for (long k = kmin; k <= kmax; ++k) {
    const Dyadic e = Dyadic::pow2(-k);
    const long long span = k >= -6 ? 64LL << std::max(k, 0L) >> std::max(-k, 0L) : 1;
    for (long long z = -span - 1; z <= span; ++z) {
      const Dyadic lo = Dyadic(z) * e;
      if (lo < D(64) && D(-64) < lo + e && OriginOracle::in_F(k, z)) oracle.insert({k, z});
    }
  }
  for (long j = -6; j <= 5; ++j) {
    closed.insert({-j, 1});   // [2^j, 2^(j+1)]
    closed.insert({-j, -2});  // [-2^(j+1), -2^j]
  }
  Verdict v;
  v.pass = got == oracle && got == closed;
  v.detail = std::to_string(got.size()) + " cubes, oracle " + std::to_string(oracle.size()) + ", closed form " +
             std::to_string(closed.size());
  return v;
}

// 2. (1/2) diam Q < d(Q,F) < 5 diam Q from certified enclosures
Verdict certificate() {
  struct Case {
    SetPtr F;
    Box w;
    long kmin, kmax;
  };
  const std::vector<Case> cases = {
      {origin(), Box{{D(-64)}, {D(64)}}, -8, 40},
      {two_points(0, 1), Box{{D(-4)}, {D(5)}}, -3, 30},
      {unit_ball2(), Box{{D(-2), D(-2)}, {D(2), D(2)}}, -2, 5},
      {unit_box2(), Box{{D(-1), D(-1)}, {D(2), D(2)}}, -2, 5},
  };
  long total = 0, bad = 0;
  std::string first, per;
  for (const auto& c : cases) {
    const CubeContext ctx(c.F);
    const int n = c.F->dim();
    const auto cubes = ctx.enum_region(c.w, c.kmin, c.kmax);
    per += (per.empty() ? "" : "/") + std::to_string(cubes.size());
    for (const auto& q : cubes) {
      ++total;
      const DyInterval d = ctx.cube_distance(q, q.level + 24);
      // diam^2 = n edge^2
      const Dyadic e2 = sq(q.edge()) * Dyadic(n);
      const bool ok = d.lo.sign() > 0 && sq(d.lo) * Dyadic(4) > e2 && sq(d.hi) < e2 * Dyadic(25);
      if (!ok) {
        if (!bad) first = " first " + q.str();
        ++bad;
      }
    }
  }
  Verdict v;
  v.pass = bad == 0 && total >= 500;
  v.detail = std::to_string(total) + " cubes (" + per + "), " + std::to_string(bad) + " violations" + first;
  return v;
}

// 3. every sampled point with 2^-8 <= d(x,F) <= 2^8 lies in an enumerated cube
Verdict covering() {
  long tested = 0, missed = 0;
  std::string first;
  const std::vector<SetPtr> sets = {origin(), two_points(0, 1), unit_ball2(), unit_box2()};
  std::mt19937_64 rng(2718);
  for (const auto& F : sets) {
    const CubeContext ctx(F);
    const int n = F->dim();
    const auto pts = dense_points(F, 64);
    int count = 0;
    while (count < 250) {
      const auto xo = point_at_scale(F, pts, rng, -8, 8);
      if (!xo) continue;
      ++count;
      ++tested;
      const DyPoint& x = *xo;
      // a cube of F holding x has diam in (d/6, 2d)
      const Dyadic d = F->dist(CPoint::exact(x), 30);
      const long top = d.log2_ceil() + 2, bottom = d.log2_ceil() - 4;
      Box around;
      for (int c = 0; c < n; ++c) {
        around.lo.push_back(x[c] - Dyadic::pow2(bottom - 20));
        around.hi.push_back(x[c] + Dyadic::pow2(bottom - 20));
      }
      bool hit = false;
      for (const auto& q : ctx.enum_region(around, -top, -bottom + 1)) {
        bool in = true;
        for (int c = 0; c < n; ++c) in = in && q.lo()[c] <= x[c] && x[c] <= q.hi()[c];
        hit = hit || in;
      }
      if (!hit) {
        if (!missed) first = " first at x1=" + x[0].decimal();
        ++missed;
      }
    }
  }
  Verdict v;
  v.pass = missed == 0 && tested == 1000;
  v.detail = std::to_string(tested) + " points, " + std::to_string(missed) + " misses" + first;
  return v;
}

// 4. sum of phi*_Q over G_x and of its derivatives of order <= 2
Verdict partition() {
  const long i = 21;
  long points = 0, bad = 0;
  Rational worst0 = 0, worstd = 0;
  std::mt19937_64 rng(3141);
  const std::vector<std::pair<SetPtr, Box>> sets = {
      {origin(), Box{{D(-4)}, {D(4)}}},
      {split_interval(), Box{{D(-3)}, {D(3)}}},
      {unit_ball2(), Box{{D(-2), D(-2)}, {D(2), D(2)}}},
      {unit_box2(), Box{{D(-1), D(-1)}, {D(2), D(2)}}},
  };
  for (const auto& [F, w] : sets) {
    const CubeContext ctx(F);
    const int n = F->dim();
    int count = 0;
    while (count < 100) {
      DyPoint xa;
      for (int c = 0; c < n; ++c)
        xa.push_back(random_dyadic(rng, static_cast<long>(w.lo[c].to_double()), static_cast<long>(w.hi[c].to_double()), 12));
      const CPoint x = CPoint::exact(xa);
      if (F->dist(x, 20) < Dyadic::pow2(-8)) continue;
      ++count;
      ++points;
      const auto g = ctx.enum_Gx(x);
      if (!g) {
        ++bad;
        continue;
      }
      // each term to 2^-(i + log2 |G_x| + 2): the sum of the errors stays below 2^-(i+1)
      long extra = 2;
      while ((1L << (extra - 2)) < static_cast<long>(g->cubes.size())) ++extra;
      // values returned by the evaluator at the allocated precision
      for (const auto& k : indices_up_to(n, 2)) {
        Dyadic sum(0);
        for (const auto& q : g->cubes) sum += phistar_deriv(ctx, q, x, k, i + extra);
        const bool value = norm(k) == 0;
        const Rational m = R((value ? sum - Dyadic(1) : sum).abs());
        if (value) worst0 = std::max(worst0, m);
        else worstd = std::max(worstd, m);
        if (m > R(value ? Dyadic::pow2(-20) : Dyadic::pow2(-16))) ++bad;
      }
      // and the certified enclosures of the same sums
      const PhiTable t = phi_table(g->cubes, x, 2, ctx.eps(), i + extra + 8);
      for (size_t j = 0; j < t.index.size(); ++j) {
        DyInterval sum(Dyadic(0));
        for (size_t c = 0; c < g->cubes.size(); ++c) sum += t.phistar[c][j];
        if (norm(t.index[j]) > 2) continue;
        const bool value = norm(t.index[j]) == 0;
        const DyInterval dev = value ? sum - DyInterval(Dyadic(1)) : sum;
        const Rational m = R(dev.mag());
        if (value) worst0 = std::max(worst0, m);
        else worstd = std::max(worstd, m);
        if (m > R(value ? Dyadic::pow2(-20) : Dyadic::pow2(-16))) ++bad;
      }
    }
  }
  Verdict v;
  v.pass = bad == 0;
  v.detail = std::to_string(points) + " points (n=1: 200, n=2: 200), max |sum-1| " + str(worst0) +
             ", max |sum of derivatives| " + str(worstd) + ", " + std::to_string(bad) + " violations";
  return v;
}

// 5. bound tables from the recurrences, and sampled derivative bounds
Verdict bounds() {
  // oracle: P_0 = 1, P_{k+1} = (1 - 2k x) P_k + x^2 P_k'; H_k = (2k)^(2k) sum |coeff P_k|
  std::vector<std::vector<BigInt>> P = {{1}};
  std::vector<BigInt> H;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) {
      const auto& p = P.back();
      std::vector<BigInt> q(p.size() + 1, 0);
      for (size_t j = 0; j < p.size(); ++j) {
        q[j] += p[j];
        q[j + 1] -= BigInt(2 * (k - 1)) * p[j];
        if (j > 0) q[j + 1] += BigInt(static_cast<long>(j)) * p[j];
      }
      P.push_back(q);
    }
    BigInt a = 0;
    for (const auto& c : P[k]) a += abs(c);
    BigInt pw = 1;
    for (int j = 0; j < 2 * k; ++j) pw *= 2 * k;
    H.push_back(pw * a);
  }
  const DerivBoundTable t = deriv_bounds(6);
  Verdict v;
  v.pass = H[0] == 1 && H[1] == 4 && H[2] == 768;
  for (int k = 0; k <= 6; ++k) v.pass = v.pass && t.H[k] == H[k];

  const Dyadic eps = D("1/8");
  std::mt19937_64 rng(1618);
  const Dyadic two_over_eps = *Dyadic::from_rational(Rational(2) / R(eps));
  long over = 0;
  for (int s = 0; s < 1000; ++s) {
    const Dyadic xl = random_dyadic(rng, 0, 4, 14);     // lambda: support (0, inf)
    const Dyadic xm = random_dyadic(rng, -1, 2, 14);    // mu: transition on (0, 1)
    const Dyadic xn = random_dyadic(rng, -1, 1, 14);    // nu: transition on 1/2 < |x| < 1/2 + eps/2
    const auto lam = lambda_enclose(DyInterval(xl), 6, 64);
    const auto mu = mu_enclose(DyInterval(xm), 6, 64);
    const auto nu = nu_enclose(DyInterval(xn), 6, eps, 64);
    Dyadic scale(1);
    for (int k = 0; k <= 6; ++k) {
      const Dyadic B(t.B[k], 0);
      if (lam[k].mag() > Dyadic(H[k], 0)) ++over;
      if (mu[k].mag() > B) ++over;
      if (nu[k].mag() > B * scale) ++over;
      scale *= two_over_eps;
    }
  }
  v.pass = v.pass && over == 0;
  std::ostringstream os;
  os << "H0..H2 = " << t.H[0] << ", " << t.H[1] << ", " << t.H[2] << "; 3x1000 samples, k<=6, " << over
     << " over bound";
  v.detail = os.str();
  return v;
}

// 6. WET_0 of cos(x1) agrees on F and stays in [min f, max f] off F
Verdict wet0_cos() {
  const long i = 20;
  long on = 0, off = 0, bad = 0;
  std::string first;
  const auto c1 = cos_of(1);
  std::mt19937_64 rng(577);
  for (const SetPtr& F : {two_points(0, 1), unit_ball2()}) {
    const Extender ext(context(F));
    const int n = F->dim();
    const WhitneyJet j = jet_make(spec("cos", {D(1), D(0)}, 0), F);
    const FnOnF& f = j[MultiIndex(n, 0)];
    for (const auto& y : dense_points(F, 200)) {
      ++on;
      const Dyadic g = wet0_eval(ext, f, CPoint::exact(y), i);
      const auto ref = cos_of(R(y[0]));
      const Rational tol = R(Dyadic::pow2(-i));
      if (!(R(g) >= ref.hi - tol && R(g) <= ref.lo + tol)) {
        if (!bad) first = " first on F at x1=" + y[0].decimal();
        ++bad;
      }
    }
    int count = 0;
    while (count < 50) {
      DyPoint x;
      for (int c = 0; c < n; ++c) x.push_back(random_dyadic(rng, -3, 3, 10));
      if (F->dist(CPoint::exact(x), 20) < Dyadic::pow2(-10)) continue;
      ++count;
      ++off;
      const Dyadic g = wet0_eval(ext, f, CPoint::exact(x), i);
      const Rational tol = R(Dyadic::pow2(-i));
      if (R(g) < c1.lo - tol || R(g) > 1 + tol) {
        if (!bad) first = " first off F at x1=" + x[0].decimal();
        ++bad;
      }
    }
  }
  Verdict v;
  v.pass = bad == 0;
  v.detail = std::to_string(on) + " dense points, " + std::to_string(off) + " off-F points, " + std::to_string(bad) +
             " violations" + first;
  return v;
}

// 7. the extension of the jet of x on {0} is x
Verdict identity() {
  const long i = 16;
  const SetPtr F = origin();
  const Extender ext(context(F));
  const WhitneyJet j = jet_make(spec("poly", {D(0), D(1)}, 1), F);
  std::mt19937_64 rng(1414);
  Rational worst = 0;
  long bad = 0;
  for (int t = 0; t < 100; ++t) {
    const Dyadic x = t == 0 ? D(0) : random_dyadic(rng, -4, 4, 16);
    const CPoint cx = CPoint::exact({x});
    const Rational e0 = abs(R(wetm_eval(ext, j, cx, {0}, i) - x));
    const Rational e1 = abs(R(wetm_eval(ext, j, cx, {1}, i) - D(1)));
    worst = std::max({worst, e0, e1});
    if (e0 > R(Dyadic::pow2(-i)) || e1 > R(Dyadic::pow2(-i))) ++bad;
  }
  Verdict v;
  v.pass = bad == 0;
  v.detail = "100 points, max error " + str(worst) + ", " + std::to_string(bad) + " violations";
  return v;
}

// 8. Whitney estimates for x^3, m = 2, on [-2,-1] u [1,2]
Verdict whitney_estimates() {
  const SetPtr F = split_interval();
  const Extender ext(context(F));
  const WhitneyJet j = jet_make(spec("poly", {D(0), D(0), D(0), D(1)}, 2), F);
  const ExtConstants C = ext_constants(j);
  const auto pts = dense_points(F, 256);
  const long i = 30;
  // closed forms: d(x,F) and the Taylor polynomials of x^3 at a
  auto dist_F = [](const Rational& x) {
    const Rational ax = abs(x);
    if (ax < 1) return Rational(1 - ax);
    if (ax > 2) return Rational(ax - 2);
    return Rational(0);
  };
  auto taylor = [](int k, const Rational& a, const Rational& x) {
    const Rational h = x - a;
    switch (k) {
      case 0: return Rational(a * a * a + 3 * a * a * h + 3 * a * h * h);
      case 1: return Rational(3 * a * a + 6 * a * h);
      default: return Rational(6 * a);
    }
  };
  std::mt19937_64 rng(4669);
  long samples = 0, checks = 0, bad = 0;
  Rational worst = 0;
  std::string first;
  while (samples < 200) {
    const Dyadic xd = random_dyadic(rng, -3, 3, 10);
    const Rational x = R(xd);
    // half the anchors are nearest points of F, half random dense points
    Rational a;
    if (samples % 2 == 0) {
      a = R(pts[rng() % pts.size()][0]);
    } else {
      const Rational ax = abs(x);
      const Rational s = x < 0 ? Rational(-1) : Rational(1);
      a = ax < 1 ? s : ax > 2 ? Rational(2 * s) : x;
    }
    ++samples;
    const Rational d = abs(x - a);
    const Rational dF = dist_F(x);
    const CPoint cx = CPoint::exact({xd});
    for (int k = 0; k <= 2; ++k) {
      if (k > 0 && d > 7 * C.e * dF) continue;
      ++checks;
      const Dyadic g = wetm_eval(ext, j, cx, {k}, i);
      Rational bound = C.Ak.at({k});
      for (int p = 0; p < 3 - k; ++p) bound *= d;
      const Rational err = abs(R(g) - taylor(k, a, x));
      // g is known to 2^-i
      if (err > bound + R(Dyadic::pow2(-i))) {
        if (!bad) first = " first x=" + xd.decimal() + " k=" + std::to_string(k);
        ++bad;
      }
      if (bound > 0) worst = std::max(worst, Rational(err / bound));
    }
  }
  Verdict v;
  v.pass = bad == 0;
  v.detail = std::to_string(samples) + " samples, " + std::to_string(checks) + " estimates, max error/bound " + str(worst) +
             ", " + std::to_string(bad) + " violations" + first;
  return v;
}

// f^(1) + 1 where x1 > 0
WhitneyJet perturbed(WhitneyJet j) {
  MultiIndex e(j.dim(), 0);
  e[0] = 1;
  const FnOnF base = j.comp.at(e);
  FnOnF g = base;
  g.enclose = [base](const std::vector<DyInterval>& X, long p) {
    DyInterval v = base.enclose(X, p);
    if (X[0].lo.sign() > 0) return v + DyInterval(Dyadic(1));
    if (X[0].hi.sign() <= 0) return v;
    return v + DyInterval(Dyadic(0), Dyadic(1));
  };
  j.comp.at(e) = g;
  return j;
}

// 9. compatibility sampling accepts built-in jets and rejects a perturbed one
Verdict compat() {
  long ok = 0, runs = 0;
  std::string first;
  const std::vector<SetPtr> sets = {two_points(0, 1), split_interval(), unit_ball2(), unit_box2()};
  const std::vector<JetSpec> specs = {spec("cos", {D(1), D(0)}, 2), spec("sin", {D(2), D("1/4")}, 1),
                                      spec("expc", {D("1/2"), D(0)}, 2), spec("poly", {D(1), D(-2), D(0), D(1)}, 2)};
  for (const auto& F : sets)
    for (const auto& s : specs) {
      ++runs;
      const CompatReport r = validate_compat(jet_make(s, F), 1000, 99);
      if (r.ok && r.pairs == 1000) ++ok;
      else if (first.empty()) first = " first failure " + s.builtin + ": " + r.first_violation;
    }
  const SetPtr segment = make_set(spec_of(1, {box_part({D(-1)}, {D(1)})}));
  int caught = 0;
  for (const SetPtr& F : {segment, unit_ball2()}) {
    const CompatReport r = validate_compat(perturbed(jet_make(spec("cos", {D(1), D(0)}, 1), F)), 1000, 99);
    if (!r.ok) ++caught;
  }
  Verdict v;
  v.pass = ok == runs && caught == 2;
  v.detail = std::to_string(ok) + "/" + std::to_string(runs) + " built-in jets pass over 1000 pairs, " +
             std::to_string(caught) + "/2 perturbed jets rejected" + first;
  return v;
}

// 10. fresh contexts and threads give identical bits; consecutive precisions agree
Verdict determinism() {
  struct Query {
    int set;
    DyPoint x;
    MultiIndex k;
    long i;
  };
  const std::vector<std::function<SetPtr()>> makers = {[] { return split_interval(); }, [] { return unit_ball2(); }};
  const std::vector<JetSpec> specs = {spec("cos", {D(1), D(0)}, 2), spec("sin", {D(1), D("1/2")}, 1)};
  std::mt19937_64 rng(8128);
  std::vector<Query> qs;
  for (int t = 0; t < 100; ++t) {
    Query q;
    q.set = t % 2;
    const int n = q.set == 0 ? 1 : 2;
    for (int c = 0; c < n; ++c) q.x.push_back(random_dyadic(rng, -3, 3, 8));
    q.k = MultiIndex(n, 0);
    if (t % 3 == 1) q.k[0] = 1;
    q.i = 8 + static_cast<long>(rng() % 17);
    qs.push_back(q);
  }
  auto run = [&](std::vector<Dyadic>& at_i, std::vector<Dyadic>* at_next) {
    std::vector<std::shared_ptr<const CubeContext>> ctx;
    std::vector<WhitneyJet> jets;
    for (int s = 0; s < 2; ++s) {
      ctx.push_back(context(makers[s]()));
      jets.push_back(jet_make(specs[s], ctx.back()->set()));
    }
    for (const auto& q : qs) {
      const Extender ext(ctx[q.set]);
      at_i.push_back(wetm_eval(ext, jets[q.set], CPoint::exact(q.x), q.k, q.i));
      if (at_next) at_next->push_back(wetm_eval(ext, jets[q.set], CPoint::exact(q.x), q.k, q.i + 1));
    }
  };
  std::vector<Dyadic> a, a_next, b;
  run(a, &a_next);
  run(b, nullptr);

  // concurrent evaluation on one shared context per set
  std::vector<Dyadic> c(qs.size());
  {
    std::vector<std::shared_ptr<const CubeContext>> ctx;
    std::vector<WhitneyJet> jets;
    for (int s = 0; s < 2; ++s) {
      ctx.push_back(context(makers[s]()));
      jets.push_back(jet_make(specs[s], ctx.back()->set()));
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < 4; ++w)
      pool.emplace_back([&, w] {
        for (size_t t = w; t < qs.size(); t += 4) {
          const Extender ext(ctx[qs[t].set]);
          c[t] = wetm_eval(ext, jets[qs[t].set], CPoint::exact(qs[t].x), qs[t].k, qs[t].i);
        }
      });
    for (auto& th : pool) th.join();
  }
  long differ = 0, jumps = 0;
  for (size_t t = 0; t < qs.size(); ++t) {
    if (a[t] != b[t] || a[t] != c[t]) ++differ;
    if ((a[t] - a_next[t]).abs() > Dyadic::pow2(-qs[t].i) + Dyadic::pow2(-qs[t].i - 1)) ++jumps;
  }
  Verdict v;
  v.pass = differ == 0 && jumps == 0;
  v.detail = "100 queries, " + std::to_string(differ) + " differ across runs/threads, " + std::to_string(jumps) +
             " precision violations";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "golden_decomposition", 5, golden},
      {2, "cube_distance_certificate", 60, certificate},
      {3, "covering", 60, covering},
      {4, "partition_of_unity", 300, partition},
      {5, "bound_tables", 60, bounds},
      {6, "wet0_agreement", 300, wet0_cos},
      {7, "identity_collapse", 120, identity},
      {8, "whitney_estimates", 600, whitney_estimates},
      {9, "jet_compatibility", 120, compat},
      {10, "determinism", 120, determinism},
  };
  std::set<int> only;
  for (int a = 1; a < argc; ++a) only.insert(std::atoi(argv[a]));
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s < c.limit_s;
    const bool pass = v.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s %2d %-26s %8.2fs / %5.0fs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), s, c.limit_s,
                v.detail.c_str(), in_time ? "" : " [time limit exceeded]");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
