#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "whitney/interval.hpp"

namespace whitney {

// A computable real given by a precision oracle: |approx(i) - x| <= 2^-i.
// Oracles are deterministic. Copies share the same oracle.
class CReal {
 public:
  using Oracle = std::function<Dyadic(long)>;
  using Enclosure = std::function<DyInterval(long)>;

  CReal();  // zero
  CReal(const Dyadic& v);  // NOLINT(google-explicit-constructor)
  CReal(long v) : CReal(Dyadic(v)) {}  // NOLINT(google-explicit-constructor)

  static CReal rational(const Rational& q);
  // The oracle must honour the contract; it is trusted, not checked.
  static CReal from_oracle(Oracle oracle);
  // enc(p) must enclose x with width tending to 0 as p grows.
  static CReal from_enclosure(Enclosure enc);

  Dyadic approx(long i) const;
  // [approx(i) - 2^-i, approx(i) + 2^-i], or the exact point
  DyInterval enclose(long i) const;
  const std::optional<Dyadic>& exact() const;
  // stable identity of the underlying oracle
  const void* identity() const;

  struct Impl;

 private:
  explicit CReal(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

CReal operator+(const CReal& a, const CReal& b);
CReal operator-(const CReal& a, const CReal& b);
CReal operator-(const CReal& a);
CReal operator*(const CReal& a, const CReal& b);
CReal scale(const CReal& a, const Dyadic& c);

enum class Lift { Sum, Product, Negation, Scale };
// Generic lift used by the arithmetic above. Scale uses `factor`.
CReal lift(const std::vector<CReal>& xs, Lift op, const Dyadic& factor = Dyadic(1));

// Drives an enclosure functional to a dyadic within 2^-i: tries working
// precisions i+4, i+8, i+16, ... until the enclosure is narrow enough.
Dyadic refine(const CReal::Enclosure& enc, long i);

// A point of R^n as a vector of computable reals.
class CPoint {
 public:
  CPoint() = default;
  explicit CPoint(std::vector<CReal> coords) : coords_(std::move(coords)) {}
  static CPoint exact(const std::vector<Dyadic>& coords);

  int dim() const { return static_cast<int>(coords_.size()); }
  const CReal& operator[](int c) const { return coords_[c]; }
  const std::vector<CReal>& coords() const { return coords_; }
  std::vector<Dyadic> approx(long i) const;
  std::vector<DyInterval> enclose(long i) const;
  // all coordinates exact
  std::optional<std::vector<Dyadic>> exact() const;
  // key identifying the represented point for memo tables
  std::string key() const;

 private:
  std::vector<CReal> coords_;
};

// |result - d(x,y)| <= 2^-i
Dyadic cpoint_dist(const CPoint& x, const CPoint& y, long i);
// enclosure of the Euclidean distance using coordinate enclosures at precision p
DyInterval dist_enclosure(const CPoint& x, const CPoint& y, long p);
DyInterval dist_enclosure(const CPoint& x, const std::vector<Dyadic>& y, long p);

}  // namespace whitney
