#include "whitney/creal.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace whitney {

struct CReal::Impl {
  std::optional<Dyadic> exact;
  Oracle oracle;
  mutable std::mutex mu;
  mutable std::map<long, Dyadic> memo;

  Dyadic query(long i) const {
    if (exact) return *exact;
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = memo.find(i);
      if (it != memo.end()) return it->second;
    }
    Dyadic v = oracle(i);
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(i, v);
    return v;
  }
};

namespace {

std::shared_ptr<CReal::Impl> make_exact(const Dyadic& v) {
  auto impl = std::make_shared<CReal::Impl>();
  impl->exact = v;
  return impl;
}

// smallest k with 2^k >= |x| + 2, from a coarse approximation
long magnitude_bits(const CReal& x) {
  Dyadic a = x.approx(0).abs() + Dyadic(2);
  return a.log2_ceil();
}

long ceil_log2(size_t t) {
  long k = 0;
  while ((size_t{1} << k) < t) ++k;
  return k;
}

}  // namespace

CReal::CReal() : impl_(make_exact(Dyadic())) {}
CReal::CReal(const Dyadic& v) : impl_(make_exact(v)) {}

CReal CReal::rational(const Rational& q) {
  if (auto d = Dyadic::from_rational(q)) return CReal(*d);
  return from_oracle([q](long i) { return rational_floor(q, i + 1); });
}

CReal CReal::from_oracle(Oracle oracle) {
  auto impl = std::make_shared<Impl>();
  impl->oracle = std::move(oracle);
  return CReal(std::shared_ptr<const Impl>(impl));
}

CReal CReal::from_enclosure(Enclosure enc) {
  return from_oracle([enc = std::move(enc)](long i) { return refine(enc, i); });
}

Dyadic CReal::approx(long i) const { return impl_->query(i); }

DyInterval CReal::enclose(long i) const {
  if (impl_->exact) return DyInterval(*impl_->exact);
  return DyInterval::around(approx(i), Dyadic::pow2(-i));
}

const std::optional<Dyadic>& CReal::exact() const { return impl_->exact; }
const void* CReal::identity() const { return impl_.get(); }

CReal lift(const std::vector<CReal>& xs, Lift op, const Dyadic& factor) {
  switch (op) {
    case Lift::Negation: {
      if (xs.size() != 1) throw std::invalid_argument("negation takes one operand");
      const CReal& x = xs[0];
      if (x.exact()) return CReal(-*x.exact());
      return CReal::from_oracle([x](long i) { return -x.approx(i); });
    }
    case Lift::Scale: {
      if (xs.size() != 1) throw std::invalid_argument("scaling takes one operand");
      const CReal& x = xs[0];
      if (x.exact()) return CReal(*x.exact() * factor);
      long kc = factor.is_zero() ? 0 : factor.log2_ceil();
      return CReal::from_oracle(
          [x, factor, kc](long i) { return (factor * x.approx(i + kc + 1)).round_to(i + 1); });
    }
    case Lift::Sum: {
      bool all_exact = true;
      Dyadic s;
      for (const auto& x : xs) {
        if (!x.exact()) {
          all_exact = false;
          break;
        }
        s += *x.exact();
      }
      if (all_exact) return CReal(s);
      long g = ceil_log2(xs.size()) + 2;
      return CReal::from_oracle([xs, g](long i) {
        Dyadic acc;
        for (const auto& x : xs) acc += x.approx(i + g);
        return acc.round_to(i + 1);
      });
    }
    case Lift::Product: {
      if (xs.empty()) return CReal(Dyadic(1));
      CReal acc = xs[0];
      for (size_t j = 1; j < xs.size(); ++j) {
        const CReal& y = xs[j];
        if (acc.exact() && y.exact()) {
          acc = CReal(*acc.exact() * *y.exact());
          continue;
        }
        CReal x = acc;
        acc = CReal::from_oracle([x, y](long i) {
          long kx = magnitude_bits(x), ky = magnitude_bits(y);
          return (x.approx(i + ky + 2) * y.approx(i + kx + 2)).round_to(i + 2);
        });
      }
      return acc;
    }
  }
  throw std::logic_error("unknown lift");
}

CReal operator+(const CReal& a, const CReal& b) { return lift({a, b}, Lift::Sum); }
CReal operator-(const CReal& a) { return lift({a}, Lift::Negation); }
CReal operator-(const CReal& a, const CReal& b) { return a + (-b); }
CReal operator*(const CReal& a, const CReal& b) { return lift({a, b}, Lift::Product); }
CReal scale(const CReal& a, const Dyadic& c) { return lift({a}, Lift::Scale, c); }

Dyadic refine(const CReal::Enclosure& enc, long i) {
  const Dyadic target = Dyadic::pow2(-i - 1);
  long guard = 4;
  for (;;) {
    DyInterval iv = enc(i + guard);
    if (iv.width() <= target) return settle(iv, i);
    if (guard > (1L << 20)) throw std::runtime_error("enclosure does not converge");
    guard *= 2;
  }
}

CPoint CPoint::exact(const std::vector<Dyadic>& coords) {
  std::vector<CReal> cs;
  cs.reserve(coords.size());
  for (const auto& c : coords) cs.emplace_back(c);
  return CPoint(std::move(cs));
}

std::vector<Dyadic> CPoint::approx(long i) const {
  std::vector<Dyadic> out;
  out.reserve(coords_.size());
  for (const auto& c : coords_) out.push_back(c.approx(i));
  return out;
}

std::vector<DyInterval> CPoint::enclose(long i) const {
  std::vector<DyInterval> out;
  out.reserve(coords_.size());
  for (const auto& c : coords_) out.push_back(c.enclose(i));
  return out;
}

std::optional<std::vector<Dyadic>> CPoint::exact() const {
  std::vector<Dyadic> out;
  out.reserve(coords_.size());
  for (const auto& c : coords_) {
    if (!c.exact()) return std::nullopt;
    out.push_back(*c.exact());
  }
  return out;
}

std::string CPoint::key() const {
  std::ostringstream os;
  for (const auto& c : coords_) {
    if (c.exact()) os << c.exact()->str() << ';';
    else os << "@" << c.identity() << ';';
  }
  return os.str();
}

DyInterval dist_enclosure(const CPoint& x, const std::vector<Dyadic>& y, long p) {
  if (x.dim() != static_cast<int>(y.size())) throw std::invalid_argument("dimension mismatch");
  DyInterval d2(Dyadic(0));
  for (int c = 0; c < x.dim(); ++c) d2 += sqr(x[c].enclose(p) - DyInterval(y[c]));
  return sqrt(d2, p + 2);
}

DyInterval dist_enclosure(const CPoint& x, const CPoint& y, long p) {
  if (x.dim() != y.dim()) throw std::invalid_argument("dimension mismatch");
  DyInterval d2(Dyadic(0));
  for (int c = 0; c < x.dim(); ++c) d2 += sqr(x[c].enclose(p) - y[c].enclose(p));
  return sqrt(d2, p + 2);
}

Dyadic cpoint_dist(const CPoint& x, const CPoint& y, long i) {
  if (x.dim() != y.dim()) throw std::invalid_argument("dimension mismatch");
  return refine([&](long p) { return dist_enclosure(x, y, p); }, i);
}

}  // namespace whitney
