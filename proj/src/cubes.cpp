#include "whitney/cubes.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace whitney {

namespace {

constexpr long long kCornerLimit = 1LL << 60;

bool meets_box(const DyadicCube& q, const Box& box) {
  DyPoint lo = q.lo(), hi = q.hi();
  for (int c = 0; c < q.dim(); ++c) {
    if (box.lo[c] == box.hi[c]) {
      if (box.lo[c] < lo[c] || box.lo[c] > hi[c]) return false;
    } else if (!(lo[c] < box.hi[c] && box.lo[c] < hi[c])) {
      return false;
    }
  }
  return true;
}

long long to_ll(const BigInt& z) {
  if (!z.fits_slong_p() || std::llabs(z.get_si()) >= kCornerLimit) throw std::overflow_error("cube corner out of range");
  return z.get_si();
}

}  // namespace

DyPoint DyadicCube::lo() const {
  DyPoint p;
  for (auto z : corner) p.emplace_back(BigInt(static_cast<long>(z)), -level);
  return p;
}

DyPoint DyadicCube::hi() const {
  DyPoint p;
  for (auto z : corner) p.emplace_back(BigInt(static_cast<long>(z + 1)), -level);
  return p;
}

DyPoint DyadicCube::center() const {
  DyPoint p;
  for (auto z : corner) p.emplace_back(BigInt(static_cast<long>(2 * z + 1)), -level - 1);
  return p;
}

DyadicCube DyadicCube::ancestor(long h) const {
  if (h > level) throw std::invalid_argument("ancestor level above cube level");
  DyadicCube a{h, corner};
  long shift = level - h;
  for (auto& z : a.corner) z = shift >= 63 ? (z < 0 ? -1 : 0) : (z >> shift);
  return a;
}

std::vector<DyadicCube> DyadicCube::children() const {
  const int n = dim();
  std::vector<DyadicCube> out;
  for (long mask = 0; mask < (1L << n); ++mask) {
    DyadicCube c{level + 1, corner};
    for (int d = 0; d < n; ++d) {
      if (std::llabs(c.corner[d]) >= kCornerLimit) throw std::overflow_error("cube corner out of range");
      // first coordinate is the slowest bit so children come out lexicographically
      c.corner[d] = 2 * c.corner[d] + ((mask >> (n - 1 - d)) & 1);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string DyadicCube::key() const {
  std::string s = std::to_string(level);
  for (auto z : corner) {
    s += ':';
    s += std::to_string(z);
  }
  return s;
}

std::string DyadicCube::str() const {
  std::ostringstream os;
  DyPoint l = lo(), h = hi();
  for (int c = 0; c < dim(); ++c) os << (c ? "x" : "") << '[' << l[c].decimal() << ',' << h[c].decimal() << ']';
  return os.str();
}

long roundoff_bits(long k) { return std::max(k + 3, 0L); }
Dyadic roundoff_eta(long k) { return Dyadic::pow2(-roundoff_bits(k)); }

long grid_level(long i, int n) {
  long t = 0;
  long long four = 1;
  while (!(n < four)) {
    four *= 4;
    ++t;
  }
  return i - 1 + t;
}

std::vector<DyPoint> sample_grid(const DyadicCube& q, long i) {
  const int n = q.dim();
  const long h = grid_level(i, n);
  const long m = std::max(0L, h - q.level);
  if (m * n > 24) throw std::length_error("sample grid too large");
  const long steps = 1L << m;
  const long fine = q.level + m;
  DyPoint lo = q.lo();
  std::vector<DyPoint> out;
  std::vector<long> t(n, 0);
  for (;;) {
    DyPoint p(n);
    for (int c = 0; c < n; ++c) p[c] = lo[c] + Dyadic(BigInt(t[c]), -fine);
    out.push_back(std::move(p));
    int c = n - 1;
    while (c >= 0 && t[c] == steps) t[c--] = 0;
    if (c < 0) break;
    ++t[c];
  }
  return out;
}

bool enlarged_contains(const DyadicCube& q, const Dyadic& eps, const DyPoint& x) {
  DyPoint c = q.center();
  Dyadic reach = (Dyadic(1) + eps) * q.edge().shifted(-1);
  for (int d = 0; d < q.dim(); ++d)
    if ((x[d] - c[d]).abs() > reach) return false;
  return true;
}

int sign_with_diam(const Dyadic& a, const Dyadic& b, const DyadicCube& q) {
  return sign_plus_sqrt(a, b * q.edge(), q.dim());
}

// ---------------------------------------------------------------------------

CubeContext::CubeContext(SetPtr F, Dyadic eps) : F_(std::move(F)), eps_(std::move(eps)) {
  if (!F_) throw std::invalid_argument("null set");
  if (eps_.sign() <= 0 || !(eps_.to_rational() < Rational(1, 5)))
    throw std::invalid_argument("eps must lie in (0, 1/5)");
}

Dyadic CubeContext::dist_at(const DyPoint& r, long j) const { return F_->dist(CPoint::exact(r), j); }

bool CubeContext::in_F0_uncached(const DyadicCube& q) const {
  const long k = q.level;
  const long j = std::max(k + 1, 0L);
  const long b = roundoff_bits(k);
  const Dyadic eta = roundoff_eta(k);
  for (const auto& r : sample_grid(q, j)) {
    Dyadic d = dist_at(r, b);
    if (sign_with_diam(d + eta, Dyadic(-2), q) > 0 && sign_with_diam(eta - d, Dyadic(4), q) > 0) return true;
  }
  return false;
}

bool CubeContext::may_be_F0(const DyadicCube& q) const {
  const long k = q.level;
  const long p = roundoff_bits(k) + 2;
  const Dyadic slack = roundoff_eta(k).shifted(1) + Dyadic::pow2(-p);
  Dyadic dc = dist_at(q.center(), p);
  return sign_with_diam(dc + slack, Dyadic(-3, -1), q) > 0 &&
         sign_with_diam(slack - dc, Dyadic(9, -1), q) > 0;
}

bool CubeContext::in_F0(const DyadicCube& q) const {
  if (q.dim() != dim()) throw std::invalid_argument("cube dimension mismatch");
  const std::string key = q.key();
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = f0_memo_.find(key); it != f0_memo_.end()) return it->second;
  }
  bool v = may_be_F0(q) && in_F0_uncached(q);
  std::lock_guard<std::mutex> lock(mu_);
  f0_memo_.emplace(key, v);
  return v;
}

bool CubeContext::in_F(const DyadicCube& q) const {
  const std::string key = q.key();
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = f_memo_.find(key); it != f_memo_.end()) return it->second;
  }
  bool v = in_F0(q);
  if (v) {
    const long k = q.level;
    const int n = q.dim();
    const Dyadic two_eta = roundoff_eta(k).shifted(1);
    long hstar = k - 4;
    while (sign_plus_sqrt(-two_eta, Dyadic::pow2(-hstar - 1) - Dyadic::pow2(2 - k), n) <= 0) --hstar;
    for (long h = k - 1; h > hstar && v; --h)
      if (in_F0(q.ancestor(h))) v = false;
  }
  std::lock_guard<std::mutex> lock(mu_);
  f_memo_.emplace(key, v);
  return v;
}

std::optional<GxResult> CubeContext::enum_Gx(const CPoint& x, long budget) const {
  if (x.dim() != dim()) throw std::invalid_argument("point dimension mismatch");
  const std::string key = x.key();
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = gx_memo_.find(key); it != gx_memo_.end()) return it->second;
  }
  GxResult res;
  bool found = false;
  for (long i = 0; i <= budget; ++i) {
    Dyadic d = F_->dist(x, i);
    if (d >= Dyadic::pow2(1 - i)) {
      res.i = i;
      res.delta = d;
      found = true;
      break;
    }
  }
  if (!found) return std::nullopt;

  const int n = dim();
  const long i = res.i;
  const Dyadic& delta = res.delta;
  const Dyadic bound = Dyadic(3, -1) * delta + Dyadic::pow2(2 - i);
  const Dyadic slack = bound + Dyadic::pow2(1 - i);
  const Dyadic slack2 = slack * slack;
  const DyPoint X = x.approx(i + 4);
  const CPoint* xp = &x;

  long k = -(Dyadic(6) * delta).log2_ceil() - 4;
  // advance to the first level with diam < 6 delta
  while (sign_with_diam(Dyadic(6) * delta, Dyadic(-1), DyadicCube{k, std::vector<long long>(n, 0)}) <= 0) ++k;
  for (;; ++k) {
    DyadicCube probe{k, std::vector<long long>(n, 0)};
    // diam > delta / 14
    if (sign_with_diam(-delta, Dyadic(14), probe) <= 0) break;
    const Dyadic e = Dyadic::pow2(-k);
    std::vector<long long> lo(n), hi(n);
    for (int c = 0; c < n; ++c) {
      lo[c] = to_ll(div_ceil(X[c] - slack, e, 0).ceil() - 1);
      hi[c] = to_ll(div_floor(X[c] + slack, e, 0).floor());
    }
    std::vector<long long> z = lo;
    for (;;) {
      DyadicCube q{k, z};
      DyPoint c = q.center();
      Dyadic s2;
      for (int d = 0; d < n; ++d) {
        Dyadic t = X[d] - c[d];
        s2 += t * t;
      }
      if (s2 <= slack2 && cpoint_dist(*xp, CPoint::exact(c), i) < bound && in_F(q)) res.cubes.push_back(q);
      int d = n - 1;
      while (d >= 0 && z[d] == hi[d]) z[d] = lo[d], --d;
      if (d < 0) break;
      ++z[d];
    }
  }
  std::sort(res.cubes.begin(), res.cubes.end());
  std::lock_guard<std::mutex> lock(mu_);
  return gx_memo_.emplace(key, res).first->second;
}

std::optional<std::vector<DyInterval>> CubeContext::memo_get(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (auto it = derived_memo_.find(key); it != derived_memo_.end()) return it->second;
  return std::nullopt;
}

void CubeContext::memo_put(const std::string& key, std::vector<DyInterval> v) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (derived_memo_.size() >= 4096) derived_memo_.clear();
  derived_memo_.emplace(key, std::move(v));
}

DyPoint CubeContext::approx_projection(const DyadicCube& q) const {
  const std::string key = q.key();
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = proj_memo_.find(key); it != proj_memo_.end()) return it->second;
  }
  const int n = q.dim();
  const DyPoint lo = q.lo(), hi = q.hi(), c = q.center();
  const Dyadic e = q.edge();
  const Dyadic lim = Dyadic(25 * n) * e * e;
  const Dyadic reach = e.shifted(-1) + Dyadic(5) * sqrt_int_upper(n, 4) * e;
  std::optional<DyPoint> found;
  for (long round = 0; round < 4096 && !found; ++round) {
    F_->dense_round_near(round, c, reach, [&](const DyPoint& r) {
      Dyadic g2;
      for (int d = 0; d < n; ++d) {
        Dyadic g = max(Dyadic(), max(lo[d] - r[d], r[d] - hi[d]));
        g2 += g * g;
      }
      if (g2 < lim) {
        found = r;
        return false;
      }
      return true;
    });
  }
  if (!found) throw std::runtime_error("no dense point within 5 diam of cube " + q.str());
  std::lock_guard<std::mutex> lock(mu_);
  return proj_memo_.emplace(key, *found).first->second;
}

void CubeContext::region_walk(const DyadicCube& q, const Box& box, long kmax,
                              std::vector<DyadicCube>& out) const {
  if (!meets_box(q, box)) return;
  const long k = q.level;
  const long p = roundoff_bits(k) + 4;
  const Dyadic err = Dyadic::pow2(-p);
  const Dyadic dc = dist_at(q.center(), p);
  // no sub-cube can satisfy the upper inequality of the F0 test
  if (sign_with_diam(dc - err - roundoff_eta(k).shifted(1), Dyadic(-9, -1), q) >= 0) return;
  // no sub-cube down to level kmax can satisfy the lower inequality
  {
    Dyadic a = dc + err + roundoff_eta(kmax).shifted(1);
    Dyadic b = Dyadic::pow2(-k - 1) - Dyadic::pow2(1 - kmax);
    if (sign_plus_sqrt(a, b, q.dim()) <= 0) return;
  }
  if (in_F(q)) {
    out.push_back(q);
    return;
  }
  if (k >= kmax) return;
  for (const auto& child : q.children()) region_walk(child, box, kmax, out);
}

std::vector<DyadicCube> CubeContext::enum_region(const Box& box, long kmin, long kmax) const {
  std::vector<DyadicCube> out;
  if (kmin > kmax) return out;
  const int n = dim();
  if (box.dim() != n) throw std::invalid_argument("region dimension mismatch");
  const Dyadic e = Dyadic::pow2(-kmin);
  std::vector<long long> lo(n), hi(n);
  for (int c = 0; c < n; ++c) {
    if (box.hi[c] < box.lo[c]) throw std::invalid_argument("region min exceeds max");
    lo[c] = to_ll(div_floor(box.lo[c], e, 0).floor() - 1);
    hi[c] = to_ll(div_ceil(box.hi[c], e, 0).ceil());
  }
  std::vector<long long> z = lo;
  for (;;) {
    region_walk(DyadicCube{kmin, z}, box, kmax, out);
    int d = n - 1;
    while (d >= 0 && z[d] == hi[d]) z[d] = lo[d], --d;
    if (d < 0) break;
    ++z[d];
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<DyadicCube> CubeContext::find_cover(const DyPoint& x) const {
  const int n = dim();
  Dyadic d = dist_at(x, 30);
  if (d <= Dyadic::pow2(-28)) return std::nullopt;
  // levels with d/8 < diam < 4d
  long kfirst = -(Dyadic(4) * d).log2_ceil() - 2;
  long klast = -(d.shifted(-3)).log2_floor() + 3;
  for (long k = kfirst; k <= klast; ++k) {
    DyadicCube probe{k, std::vector<long long>(n, 0)};
    if (sign_with_diam(Dyadic(4) * d, Dyadic(-1), probe) <= 0) continue;
    if (sign_with_diam(-d, Dyadic(8), probe) <= 0) continue;
    const Dyadic e = Dyadic::pow2(-k);
    std::vector<long long> lo(n), hi(n);
    for (int c = 0; c < n; ++c) {
      Dyadic t = div_floor(x[c], e, 0);
      hi[c] = to_ll(t.floor());
      lo[c] = (t * e == x[c]) ? hi[c] - 1 : hi[c];
    }
    std::vector<long long> z = lo;
    for (;;) {
      DyadicCube q{k, z};
      if (in_F(q)) return q;
      int c = n - 1;
      while (c >= 0 && z[c] == hi[c]) z[c] = lo[c], --c;
      if (c < 0) break;
      ++z[c];
    }
  }
  return std::nullopt;
}

DyInterval CubeContext::cube_distance(const DyadicCube& q, long p) const {
  if (auto d = F_->distance_to_box(q.box(), p)) return *d;
  Dyadic dc = dist_at(q.center(), p);
  Dyadic half_diam = sqrt_int_upper(q.dim(), p + 2) * q.edge().shifted(-1);
  Dyadic err = Dyadic::pow2(-p);
  return {max(Dyadic(), (dc - err - half_diam).floor_to(p + 2)), dc + err};
}

bool CubeContext::c3_certified(const DyadicCube& q, const DyInterval& d) {
  return sign_with_diam(d.lo, Dyadic(-1, -1), q) > 0 && sign_with_diam(-d.hi, Dyadic(5), q) > 0;
}

}  // namespace whitney
