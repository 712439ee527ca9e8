#include "whitney/closedset.hpp"

#include <sstream>
#include <stdexcept>

namespace whitney {

namespace {

BigInt qfloor(const Dyadic& a, const Dyadic& b) { return div_floor(a, b, 0).floor(); }
BigInt qceil(const Dyadic& a, const Dyadic& b) { return div_ceil(a, b, 0).ceil(); }

// Lexicographic walk over the integer box [lo, hi] (first coordinate slowest).
// Returns false when f asked to stop.
template <class F>
bool odometer(const std::vector<BigInt>& lo, const std::vector<BigInt>& hi, F&& f) {
  const size_t n = lo.size();
  for (size_t c = 0; c < n; ++c)
    if (lo[c] > hi[c]) return true;
  std::vector<BigInt> z = lo;
  for (;;) {
    if (!f(z)) return false;
    size_t c = n;
    while (c > 0) {
      --c;
      if (z[c] < hi[c]) {
        ++z[c];
        for (size_t d = c + 1; d < n; ++d) z[d] = lo[d];
        break;
      }
      if (c == 0) return true;
    }
    if (n == 0) return true;
  }
}

Dyadic sup_dist(const DyPoint& a, const DyPoint& b) {
  Dyadic m;
  for (size_t c = 0; c < a.size(); ++c) m = max(m, (a[c] - b[c]).abs());
  return m;
}

// distance from t to [lo, hi] for an interval argument
DyInterval gap(const DyInterval& t, const Dyadic& lo, const Dyadic& hi) {
  auto g = [&](const Dyadic& v) {
    if (v < lo) return lo - v;
    if (v > hi) return v - hi;
    return Dyadic();
  };
  Dyadic a = g(t.lo), b = g(t.hi);
  Dyadic top = max(a, b);
  bool meets = t.hi >= lo && t.lo <= hi;
  return {meets ? Dyadic() : min(a, b), top};
}

Dyadic gap_exact(const Dyadic& lo1, const Dyadic& hi1, const Dyadic& lo2, const Dyadic& hi2) {
  return max(Dyadic(), max(lo2 - hi1, lo1 - hi2));
}

DyInterval clamp_nonneg(const DyInterval& d) {
  return {max(d.lo, Dyadic()), max(d.hi, Dyadic())};
}

DyInterval min_iv(const std::optional<DyInterval>& a, const DyInterval& b) {
  if (!a) return b;
  return {min(a->lo, b.lo), min(a->hi, b.hi)};
}

}  // namespace

// ---------------------------------------------------------------------------
// TotalClosedSet

void TotalClosedSet::dense_round_near(long k, const DyPoint& x, const Dyadic& r,
                                      const PointVisitor& visit) const {
  dense_round(k, [&](const DyPoint& p) {
    if (sup_dist(p, x) <= r) return visit(p);
    return true;
  });
}

bool TotalClosedSet::complement_emits(long s, const DyPoint& p) const {
  const Dyadic half = Dyadic::pow2(s);
  for (const auto& c : p)
    if (c.abs() > half) return false;
  Dyadic d = dist(CPoint::exact(p), s + 4);
  return d - Dyadic::pow2(-(s + 4)) >= Dyadic::pow2(-s);
}

std::vector<Ball> TotalClosedSet::complement_round(long s) const {
  const int n = dim();
  BigInt reach = BigInt(1) << static_cast<unsigned long>(2 * s + 1);
  double count = 1;
  for (int c = 0; c < n; ++c) count *= 2 * reach.get_d() + 1;
  if (count > 2e7) throw std::length_error("complement round too large to materialise");
  std::vector<BigInt> lo(n, -reach), hi(n, reach);
  std::vector<Ball> out;
  const Dyadic radius = Dyadic::pow2(-s);
  odometer(lo, hi, [&](const std::vector<BigInt>& z) {
    DyPoint p;
    for (const auto& zc : z) p.emplace_back(zc, -s - 1);
    if (complement_emits(s, p)) out.push_back({p, radius});
    return true;
  });
  return out;
}

std::optional<Ball> TotalClosedSet::probe_round(const CPoint& x, long s) const {
  const int n = dim();
  if (x.dim() != n) throw std::invalid_argument("dimension mismatch");
  const long q = s + 6;
  DyPoint X = x.approx(q);
  const Dyadic radius = Dyadic::pow2(-s);
  const Dyadic reach = radius + Dyadic::pow2(-q);
  std::vector<BigInt> lo(n), hi(n);
  for (int c = 0; c < n; ++c) {
    lo[c] = (X[c] - reach).shifted(s + 1).ceil();
    hi[c] = (X[c] + reach).shifted(s + 1).floor();
  }
  std::optional<Ball> found;
  odometer(lo, hi, [&](const std::vector<BigInt>& z) {
    DyPoint p;
    for (const auto& zc : z) p.emplace_back(zc, -s - 1);
    if (dist_enclosure(x, p, q).hi >= radius) return true;
    if (!complement_emits(s, p)) return true;
    found = Ball{p, radius};
    return false;
  });
  return found;
}

std::optional<Ball> TotalClosedSet::outside_probe(const CPoint& x, long budget) const {
  for (long s = 0; s < budget; ++s)
    if (auto b = probe_round(x, s)) return b;
  return std::nullopt;
}

DyPoint TotalClosedSet::DenseCursor::next() {
  while (pos_ >= buf_.size()) {
    ++round_;
    buf_.clear();
    pos_ = 0;
    set_->dense_round(round_, [&](const DyPoint& p) {
      buf_.push_back(p);
      return true;
    });
  }
  return buf_[pos_++];
}

Ball TotalClosedSet::ComplementCursor::next() {
  while (pos_ >= buf_.size()) {
    ++round_;
    pos_ = 0;
    buf_ = set_->complement_round(round_);
  }
  return buf_[pos_++];
}

// ---------------------------------------------------------------------------
// PrimitiveSet

PrimitiveSet::PrimitiveSet(SetSpec spec) : spec_(std::move(spec)) {}

void PrimitiveSet::dense_round(long k, const PointVisitor& visit) const {
  const int n = spec_.dim;
  const BigInt full = BigInt(1) << static_cast<unsigned long>(k);
  for (const auto& part : spec_.parts) {
    bool go = true;
    switch (part.kind) {
      case SetPart::Kind::Point: go = visit(part.a); break;
      case SetPart::Kind::Box: {
        std::vector<BigInt> lo(n, BigInt(0)), hi(n);
        for (int c = 0; c < n; ++c) hi[c] = part.a[c] == part.b[c] ? BigInt(0) : full;
        go = odometer(lo, hi, [&](const std::vector<BigInt>& z) {
          DyPoint p(n);
          for (int c = 0; c < n; ++c) p[c] = part.a[c] + (part.b[c] - part.a[c]) * Dyadic(z[c], -k);
          return visit(p);
        });
        break;
      }
      case SetPart::Kind::Ball: {
        if (part.radius.is_zero()) {
          go = visit(part.a);
          break;
        }
        std::vector<BigInt> lo(n, -full), hi(n, full);
        const BigInt lim = full * full;
        go = odometer(lo, hi, [&](const std::vector<BigInt>& z) {
          BigInt s2 = 0;
          for (const auto& zc : z) s2 += zc * zc;
          if (s2 > lim) return true;
          DyPoint p(n);
          for (int c = 0; c < n; ++c) p[c] = part.a[c] + part.radius * Dyadic(z[c], -k);
          return visit(p);
        });
        break;
      }
    }
    if (!go) return;
  }
}

void PrimitiveSet::dense_round_near(long k, const DyPoint& x, const Dyadic& r,
                                    const PointVisitor& visit) const {
  const int n = spec_.dim;
  const BigInt full = BigInt(1) << static_cast<unsigned long>(k);
  const Dyadic scale = Dyadic::pow2(k);
  for (const auto& part : spec_.parts) {
    bool go = true;
    switch (part.kind) {
      case SetPart::Kind::Point:
        if (sup_dist(part.a, x) <= r) go = visit(part.a);
        break;
      case SetPart::Kind::Box: {
        std::vector<BigInt> lo(n), hi(n);
        bool empty = false;
        for (int c = 0; c < n && !empty; ++c) {
          if (part.a[c] == part.b[c]) {
            lo[c] = hi[c] = 0;
            if ((part.a[c] - x[c]).abs() > r) empty = true;
            continue;
          }
          Dyadic w = part.b[c] - part.a[c];
          BigInt l = qceil((x[c] - r - part.a[c]) * scale, w);
          BigInt h = qfloor((x[c] + r - part.a[c]) * scale, w);
          lo[c] = l < 0 ? BigInt(0) : l;
          hi[c] = h > full ? full : h;
          if (lo[c] > hi[c]) empty = true;
        }
        if (empty) break;
        go = odometer(lo, hi, [&](const std::vector<BigInt>& z) {
          DyPoint p(n);
          for (int c = 0; c < n; ++c) p[c] = part.a[c] + (part.b[c] - part.a[c]) * Dyadic(z[c], -k);
          return visit(p);
        });
        break;
      }
      case SetPart::Kind::Ball: {
        if (part.radius.is_zero()) {
          if (sup_dist(part.a, x) <= r) go = visit(part.a);
          break;
        }
        std::vector<BigInt> lo(n), hi(n);
        bool empty = false;
        for (int c = 0; c < n && !empty; ++c) {
          BigInt l = qceil((x[c] - r - part.a[c]) * scale, part.radius);
          BigInt h = qfloor((x[c] + r - part.a[c]) * scale, part.radius);
          lo[c] = l < -full ? BigInt(-full) : l;
          hi[c] = h > full ? full : h;
          if (lo[c] > hi[c]) empty = true;
        }
        if (empty) break;
        const BigInt lim = full * full;
        go = odometer(lo, hi, [&](const std::vector<BigInt>& z) {
          BigInt s2 = 0;
          for (const auto& zc : z) s2 += zc * zc;
          if (s2 > lim) return true;
          DyPoint p(n);
          for (int c = 0; c < n; ++c) p[c] = part.a[c] + part.radius * Dyadic(z[c], -k);
          return visit(p);
        });
        break;
      }
    }
    if (!go) return;
  }
}

DyInterval PrimitiveSet::dist_enclosure(const std::vector<DyInterval>& x, long p) const {
  std::optional<DyInterval> best;
  for (const auto& part : spec_.parts) {
    DyInterval d2(Dyadic(0));
    switch (part.kind) {
      case SetPart::Kind::Point:
        for (size_t c = 0; c < x.size(); ++c) d2 += sqr(x[c] - DyInterval(part.a[c]));
        best = min_iv(best, sqrt(d2, p));
        break;
      case SetPart::Kind::Box:
        for (size_t c = 0; c < x.size(); ++c) d2 += sqr(gap(x[c], part.a[c], part.b[c]));
        best = min_iv(best, sqrt(d2, p));
        break;
      case SetPart::Kind::Ball:
        for (size_t c = 0; c < x.size(); ++c) d2 += sqr(x[c] - DyInterval(part.a[c]));
        best = min_iv(best, clamp_nonneg(sqrt(d2, p) - DyInterval(part.radius)));
        break;
    }
  }
  return *best;
}

Dyadic PrimitiveSet::dist(const CPoint& x, long j) const {
  if (x.dim() != spec_.dim) throw std::invalid_argument("dimension mismatch");
  if (auto e = x.exact()) {
    std::vector<DyInterval> X(e->begin(), e->end());
    DyInterval d = dist_enclosure(X, j + 2);
    return settle(d, j);
  }
  return refine([&](long p) { return dist_enclosure(x.enclose(p), p + 2); }, j);
}

std::optional<DyInterval> PrimitiveSet::distance_to_box(const Box& q, long p) const {
  std::optional<DyInterval> best;
  const size_t n = q.lo.size();
  for (const auto& part : spec_.parts) {
    Dyadic d2;
    switch (part.kind) {
      case SetPart::Kind::Point:
        for (size_t c = 0; c < n; ++c) {
          Dyadic g = gap_exact(q.lo[c], q.hi[c], part.a[c], part.a[c]);
          d2 += g * g;
        }
        best = min_iv(best, sqrt(DyInterval(d2), p));
        break;
      case SetPart::Kind::Box:
        for (size_t c = 0; c < n; ++c) {
          Dyadic g = gap_exact(q.lo[c], q.hi[c], part.a[c], part.b[c]);
          d2 += g * g;
        }
        best = min_iv(best, sqrt(DyInterval(d2), p));
        break;
      case SetPart::Kind::Ball:
        for (size_t c = 0; c < n; ++c) {
          Dyadic g = gap_exact(q.lo[c], q.hi[c], part.a[c], part.a[c]);
          d2 += g * g;
        }
        best = min_iv(best, clamp_nonneg(sqrt(DyInterval(d2), p) - DyInterval(part.radius)));
        break;
    }
  }
  return best;
}

std::optional<Box> PrimitiveSet::bounding_box() const {
  std::optional<Box> out;
  for (const auto& part : spec_.parts) {
    Box b;
    switch (part.kind) {
      case SetPart::Kind::Point: b = {part.a, part.a}; break;
      case SetPart::Kind::Box: b = {part.a, part.b}; break;
      case SetPart::Kind::Ball:
        for (const auto& c : part.a) {
          b.lo.push_back(c - part.radius);
          b.hi.push_back(c + part.radius);
        }
        break;
    }
    if (!out) {
      out = b;
      continue;
    }
    for (size_t c = 0; c < b.lo.size(); ++c) {
      out->lo[c] = min(out->lo[c], b.lo[c]);
      out->hi[c] = max(out->hi[c], b.hi[c]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// StreamOnlySet

DyInterval StreamOnlySet::bracket(const CPoint& x, long s) const {
  const int n = dim();
  const long q = s + 4;
  std::optional<Dyadic> upper;
  DyPoint X = x.approx(q);
  for (long k = 0; k <= s; ++k) {
    auto take = [&](const DyPoint& p) {
      Dyadic u = whitney::dist_enclosure(x, p, q).hi;
      if (!upper || u < *upper) upper = u;
      return true;
    };
    if (!upper) source_->dense_round(k, take);
    else source_->dense_round_near(k, X, *upper + Dyadic::pow2(-q), take);
  }

  // every point of F lies in a closed grid cell of half-width 2^-(s+2) around
  // a non-emitted centre; emitted balls contain their whole cell
  const Dyadic err = x.exact() ? Dyadic() : Dyadic::pow2(-q);
  const Dyadic reach = *upper + err;
  const Dyadic half_cell = Dyadic::pow2(-s - 2);
  std::vector<BigInt> lo(n), hi(n);
  for (int c = 0; c < n; ++c) {
    lo[c] = (X[c] - reach - half_cell).shifted(s + 1).ceil();
    hi[c] = (X[c] + reach + half_cell).shifted(s + 1).floor();
  }
  std::vector<DyInterval> XI = x.enclose(q);
  Dyadic lower = *upper;
  odometer(lo, hi, [&](const std::vector<BigInt>& z) {
    DyPoint p;
    for (const auto& zc : z) p.emplace_back(zc, -s - 1);
    if (source_->complement_emits(s, p)) return true;
    DyInterval d2(Dyadic(0));
    for (int c = 0; c < n; ++c) d2 += sqr(gap(XI[c], p[c] - half_cell, p[c] + half_cell));
    Dyadic l = sqrt(d2, q).lo;
    if (l < lower) lower = l;
    return true;
  });
  return {lower, *upper};
}

Dyadic StreamOnlySet::dist(const CPoint& x, long j) const {
  auto key = std::make_pair(x.key(), j);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  const Dyadic target = Dyadic::pow2(-j - 1);
  Dyadic v;
  for (long s = 0;; ++s) {
    DyInterval b = bracket(x, s);
    if (b.width() <= target) {
      v = settle(b, j);
      break;
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  return memo_.emplace(key, v).first->second;
}

// ---------------------------------------------------------------------------
// InjectedSet

void InjectedSet::dense_round(long k, const PointVisitor& visit) const {
  if (k == 0)
    for (const auto& p : dense_)
      if (!visit(p)) return;
  base_->dense_round(k, visit);
}

std::vector<Ball> InjectedSet::complement_round(long s) const {
  std::vector<Ball> out = base_->complement_round(s);
  if (s == 0) out.insert(out.begin(), complement_.begin(), complement_.end());
  return out;
}

// ---------------------------------------------------------------------------

SetPtr make_set(const SetSpec& spec) {
  if (spec.dim < 1) throw std::invalid_argument("set dimension must be positive");
  if (spec.dim > 8) throw std::invalid_argument("set dimension above 8 is not supported");
  if (spec.parts.empty()) throw std::invalid_argument("set is empty");
  const size_t n = static_cast<size_t>(spec.dim);
  for (const auto& part : spec.parts) {
    if (part.a.size() != n) throw std::invalid_argument("part dimension mismatch");
    if (part.kind == SetPart::Kind::Box) {
      if (part.b.size() != n) throw std::invalid_argument("box dimension mismatch");
      for (size_t c = 0; c < n; ++c)
        if (part.b[c] < part.a[c]) throw std::invalid_argument("box min exceeds max");
    }
    if (part.kind == SetPart::Kind::Ball && part.radius.sign() < 0)
      throw std::invalid_argument("negative ball radius");
  }
  for (const auto& p : spec.inject_dense)
    if (p.size() != n) throw std::invalid_argument("injected point dimension mismatch");
  for (const auto& b : spec.inject_complement)
    if (b.center.size() != n) throw std::invalid_argument("injected ball dimension mismatch");
  SetPtr base = std::make_shared<PrimitiveSet>(spec);
  if (spec.inject_dense.empty() && spec.inject_complement.empty()) return base;
  return std::make_shared<InjectedSet>(base, spec.inject_dense, spec.inject_complement);
}

Dyadic dist_approx(const TotalClosedSet& F, const CPoint& x, long j) { return F.dist(x, j); }

StreamAudit audit_streams(const TotalClosedSet& F, size_t dense_count, long rounds) {
  StreamAudit out;
  std::vector<DyPoint> pts;
  auto cur = F.dense();
  for (size_t t = 0; t < dense_count; ++t) pts.push_back(cur.next());
  for (long s = 0; s <= rounds && out.ok; ++s) {
    for (const auto& ball : F.complement_round(s)) {
      Dyadic r2 = ball.radius * ball.radius;
      for (const auto& p : pts) {
        Dyadic d2;
        for (size_t c = 0; c < p.size(); ++c) {
          Dyadic t = p[c] - ball.center[c];
          d2 += t * t;
        }
        if (d2 < r2) {
          std::ostringstream os;
          os << "dense point (";
          for (size_t c = 0; c < p.size(); ++c) os << (c ? "," : "") << p[c].decimal();
          os << ") lies in complement ball centre (";
          for (size_t c = 0; c < p.size(); ++c) os << (c ? "," : "") << ball.center[c].decimal();
          os << ") radius " << ball.radius.decimal();
          out.ok = false;
          out.detail = os.str();
          return out;
        }
      }
    }
  }
  return out;
}

}  // namespace whitney
