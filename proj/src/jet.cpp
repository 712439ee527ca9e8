#include "whitney/jet.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace whitney {

namespace {

const Dyadic kHuge = Dyadic::pow2(62);

// power of two >= |a| (a nonzero)
long ceil_log2(const Dyadic& a) { return a.abs().log2_ceil(); }

// e / L rounded down, L >= 0; kHuge when L vanishes
Dyadic lipschitz_modulus(const Dyadic& e, const Dyadic& L) {
  if (L.is_zero()) return kHuge;
  const long p = 64 + std::max(0L, L.log2_ceil() - e.log2_floor());
  Dyadic d = div_floor(e, L, p);
  return min(d, kHuge);
}

struct Builtin {
  enum class Kind { Poly, Cos, Sin, Exp } kind;
  std::vector<Dyadic> c;

  Dyadic a() const { return c[0]; }
  Dyadic b() const { return c[1]; }

  // coefficients of the j-th derivative of the polynomial
  std::vector<Dyadic> poly_deriv(int j) const {
    std::vector<Dyadic> out;
    for (size_t t = j; t < c.size(); ++t) {
      BigInt f = 1;
      for (size_t s = t - j + 1; s <= t; ++s) f *= static_cast<unsigned long>(s);
      out.push_back(c[t] * Dyadic(f, 0));
    }
    return out;
  }

  // enclosure of h^(j) over X
  DyInterval deriv(int j, const DyInterval& X, long p) const {
    if (kind == Kind::Poly) {
      auto d = poly_deriv(j);
      DyInterval v(Dyadic(0));
      for (size_t t = d.size(); t-- > 0;) v = (v * X + DyInterval(d[t])).round_out(p + 8);
      return v.round_out(p);
    }
    const DyInterval u = DyInterval(a()) * X + DyInterval(b());
    DyInterval aj(Dyadic(1));
    for (int s = 0; s < j; ++s) aj = aj * DyInterval(a());
    DyInterval core;
    const long w = p + 8 + (aj.mag().is_zero() ? 0 : std::max(0L, ceil_log2(aj.mag())));
    if (kind == Kind::Exp) {
      core = exp(u, w);
    } else {
      // derivatives of cos cycle through cos, -sin, -cos, sin; of sin through sin, cos, -sin, -cos
      const int phase = (j + (kind == Kind::Sin ? 3 : 0)) % 4;
      switch (phase) {
        case 0: core = cos(u, w); break;
        case 1: core = -sin(u, w); break;
        case 2: core = -cos(u, w); break;
        default: core = sin(u, w); break;
      }
    }
    return (aj * core).round_out(p);
  }

  // upper bound of |h^(j)| over X
  Dyadic deriv_sup(int j, const DyInterval& X) const {
    if (kind == Kind::Cos || kind == Kind::Sin) {
      Dyadic r(1);
      for (int s = 0; s < j; ++s) r *= a().abs();
      return r;
    }
    return deriv(j, X, 64).mag();
  }

  // whether sup |h^(j)| over R is finite without a bounded window
  bool globally_bounded(int j) const {
    if (kind == Kind::Cos || kind == Kind::Sin) return true;
    if (kind == Kind::Exp) return a().is_zero() && j > 0;
    int deg = static_cast<int>(c.size()) - 1;
    while (deg > 0 && c[deg].is_zero()) --deg;
    return j >= deg;
  }
};

Builtin parse_builtin(const JetSpec& spec) {
  Builtin b;
  if (spec.builtin == "poly") {
    b.kind = Builtin::Kind::Poly;
    b.c = spec.coeffs;
    if (b.c.empty()) b.c.push_back(Dyadic(0));
    return b;
  }
  if (spec.builtin == "cos") b.kind = Builtin::Kind::Cos;
  else if (spec.builtin == "sin") b.kind = Builtin::Kind::Sin;
  else if (spec.builtin == "expc") b.kind = Builtin::Kind::Exp;
  else throw std::invalid_argument("unknown builtin '" + spec.builtin + "'");
  if (spec.coeffs.size() > 2) throw std::invalid_argument(spec.builtin + " takes coeffs [a, b]");
  b.c = spec.coeffs;
  if (b.c.empty()) b.c.push_back(Dyadic(1));
  if (b.c.size() == 1) b.c.push_back(Dyadic(0));
  return b;
}

bool only_first_axis(const MultiIndex& k) {
  for (size_t c = 1; c < k.size(); ++c)
    if (k[c] != 0) return false;
  return true;
}

std::optional<DyInterval> hull_x1(const SetPtr& F) {
  auto bb = F->bounding_box();
  if (!bb) return std::nullopt;
  return DyInterval(bb->lo[0], bb->hi[0]);
}

}  // namespace

// ---------------------------------------------------------------------------

Dyadic FnOnF::eval(const CPoint& x, long i) const {
  return refine([&](long p) { return enclose(x.enclose(p), p); }, i);
}

std::optional<Dyadic> FnOnF::oscillation(const Dyadic& R, const Rational& r) const {
  auto ok = [&](long t) { return modulus(R, Dyadic::pow2(t)).to_rational() >= r; };
  long lo = -256, hi = 64;
  if (ok(lo)) return Dyadic::pow2(lo);
  if (!ok(hi)) return std::nullopt;
  while (hi - lo > 1) {
    long mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return Dyadic::pow2(hi);
}

FnOnF fn_sum(const FnOnF& f, const FnOnF& g) {
  FnOnF h;
  h.F = f.F;
  h.enclose = [f, g](const std::vector<DyInterval>& x, long p) {
    return (f.enclose(x, p + 1) + g.enclose(x, p + 1)).round_out(p);
  };
  h.modulus = [f, g](const Dyadic& R, const Dyadic& e) {
    return min(f.modulus(R, e.shifted(-1)), g.modulus(R, e.shifted(-1)));
  };
  return h;
}

FnOnF fn_scale(const FnOnF& f, const Dyadic& a) {
  FnOnF h;
  h.F = f.F;
  if (a.is_zero()) {
    h.enclose = [](const std::vector<DyInterval>&, long) { return DyInterval(Dyadic(0)); };
    h.modulus = [](const Dyadic&, const Dyadic&) { return kHuge; };
    return h;
  }
  const long s = ceil_log2(a);
  h.enclose = [f, a, s](const std::vector<DyInterval>& x, long p) {
    return (DyInterval(a) * f.enclose(x, p + std::max(0L, s))).round_out(p);
  };
  h.modulus = [f, s](const Dyadic& R, const Dyadic& e) { return f.modulus(R, e.shifted(-s)); };
  return h;
}

const FnOnF& WhitneyJet::operator[](const MultiIndex& k) const {
  auto it = comp.find(k);
  if (it == comp.end()) throw std::out_of_range("jet has no component " + index_str(k));
  return it->second;
}

WhitneyJet WhitneyJet::truncated(int m2) const {
  if (m2 > order) throw std::invalid_argument("truncation above the jet order");
  WhitneyJet j;
  j.order = m2;
  j.F = F;
  j.M = M;
  for (const auto& [k, f] : comp)
    if (norm(k) <= m2) j.comp.emplace(k, f);
  return j;
}

WhitneyJet jet_combine(const Dyadic& a, const WhitneyJet& j1, const Dyadic& b, const WhitneyJet& j2) {
  if (j1.order != j2.order || j1.F != j2.F) throw std::invalid_argument("jets differ in order or set");
  WhitneyJet j;
  j.order = j1.order;
  j.F = j1.F;
  j.M = a.abs() * j1.M + b.abs() * j2.M;
  for (const auto& [k, f] : j1.comp) j.comp.emplace(k, fn_sum(fn_scale(f, a), fn_scale(j2[k], b)));
  return j;
}

FnOnF builtin_partial(const JetSpec& spec, SetPtr F, const MultiIndex& k) {
  const Builtin h = parse_builtin(spec);
  FnOnF f;
  f.F = F;
  if (!only_first_axis(k)) {
    f.enclose = [](const std::vector<DyInterval>&, long) { return DyInterval(Dyadic(0)); };
    f.modulus = [](const Dyadic&, const Dyadic&) { return kHuge; };
    return f;
  }
  const int j = k[0];
  const auto hull = hull_x1(F);
  f.enclose = [h, j](const std::vector<DyInterval>& x, long p) { return h.deriv(j, x[0], p); };
  f.modulus = [h, j, hull](const Dyadic& R, const Dyadic& e) {
    DyInterval X(-R, R);
    if (hull && hull->lo <= R && -R <= hull->hi) X = DyInterval(max(hull->lo, -R), min(hull->hi, R));
    return lipschitz_modulus(e, h.deriv_sup(j + 1, X));
  };
  return f;
}

WhitneyJet jet_make(const JetSpec& spec, SetPtr F) {
  if (!F) throw std::invalid_argument("jet needs a set");
  if (spec.order < 0) throw std::invalid_argument("jet order must be nonnegative");
  if (spec.order > 12) throw std::invalid_argument("jet order above 12 is not supported");
  const Builtin h = parse_builtin(spec);
  const int n = F->dim();
  const int m = spec.order;
  WhitneyJet jet;
  jet.order = m;
  jet.F = F;
  for (const auto& k : indices_up_to(n, m)) jet.comp.emplace(k, builtin_partial(spec, F, k));

  if (spec.M) {
    if (spec.M->sign() < 0) throw std::invalid_argument("M must be nonnegative");
    jet.M = *spec.M;
    return jet;
  }
  Dyadic sup;
  if (auto hull = hull_x1(F)) {
    sup = h.deriv_sup(m + 1, *hull);
  } else if (h.globally_bounded(m + 1)) {
    sup = h.deriv_sup(m + 1, DyInterval(Dyadic(0)));
  } else {
    throw std::invalid_argument("automatic M needs a bounded set for builtin " + spec.builtin);
  }
  // n^((m+1)/2)
  Dyadic root(1);
  for (int t = 0; t < (m + 1) / 2; ++t) root *= Dyadic(n);
  if ((m + 1) % 2 == 1) root *= sqrt_int_upper(n, 32);
  Rational s = 0;
  for (const auto& l : indices_up_to(n, m)) s += Rational(1, factorial(l));
  const Dyadic fac = s > 1 ? rational_ceil(s, 64) : Dyadic(1);
  jet.M = root * sup * fac;
  return jet;
}

// ---------------------------------------------------------------------------

DyInterval taylor_enclose(const WhitneyJet& jet, const MultiIndex& k, const CPoint& y, const CPoint& x, long p) {
  const int n = jet.dim();
  if (norm(k) > jet.order) throw std::invalid_argument("derivative order above the jet order");
  const auto Y = y.enclose(p);
  const auto X = x.enclose(p);
  std::vector<DyInterval> diff(n);
  for (int c = 0; c < n; ++c) diff[c] = X[c] - Y[c];
  DyInterval total(Dyadic(0));
  for (const auto& l : indices_up_to(n, jet.order - norm(k))) {
    DyInterval term = jet[k + l].enclose(Y, p);
    for (int c = 0; c < n; ++c) term = (term * pow(diff[c], static_cast<unsigned>(l[c]))).round_out(p + 8);
    const BigInt f = factorial(l);
    if (f != 1) term = div(term, DyInterval(Dyadic(f, 0)), p + 8);
    total += term;
  }
  return total.round_out(p);
}

Dyadic taylor_eval(const WhitneyJet& jet, const MultiIndex& k, const CPoint& y, const CPoint& x, long i) {
  return refine([&](long p) { return taylor_enclose(jet, k, y, x, p); }, i);
}

CompatReport validate_compat(const WhitneyJet& jet, long pairs, std::uint64_t seed, size_t dense_points) {
  CompatReport rep;
  const int n = jet.dim();
  const int m = jet.order;
  std::vector<DyPoint> pts;
  auto cur = jet.F->dense();
  while (pts.size() < dense_points) pts.push_back(cur.next());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, pts.size() - 1);
  const long p = 64;
  const auto ks = indices_up_to(n, m);
  for (long t = 0; t < pairs; ++t) {
    const DyPoint& xa = pts[pick(rng)];
    const DyPoint& ya = pts[pick(rng)];
    const CPoint x = CPoint::exact(xa), y = CPoint::exact(ya);
    const DyInterval d = dist_enclosure(x, ya, p);
    ++rep.pairs;
    for (const auto& k : ks) {
      ++rep.checks;
      const DyInterval lhs = abs(jet[k].enclose_at(x, p) - taylor_enclose(jet, k, y, x, p));
      const DyInterval rhs = DyInterval(jet.M) * pow(DyInterval(Dyadic(0), d.hi), static_cast<unsigned>(m - norm(k) + 1));
      if (lhs.lo > rhs.hi) {
        ++rep.violations;
        if (rep.ok) {
          std::ostringstream os;
          os << "k=" << index_str(k) << " x=(";
          for (int c = 0; c < n; ++c) os << (c ? "," : "") << xa[c].decimal();
          os << ") y=(";
          for (int c = 0; c < n; ++c) os << (c ? "," : "") << ya[c].decimal();
          os << ") |f-P|>=" << lhs.lo.to_double() << " bound<=" << rhs.hi.to_double();
          rep.first_violation = os.str();
        }
        rep.ok = false;
      }
    }
  }
  return rep;
}

}  // namespace whitney
