#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "whitney/closedset.hpp"

namespace whitney {

// Cube of the level-k grid: edge 2^-k, min-corner corner * 2^-k.
struct DyadicCube {
  long level = 0;
  std::vector<long long> corner;

  int dim() const { return static_cast<int>(corner.size()); }
  Dyadic edge() const { return Dyadic::pow2(-level); }
  DyPoint lo() const;
  DyPoint hi() const;
  DyPoint center() const;
  Box box() const { return {lo(), hi()}; }
  // the level-h cube containing this one, h <= level
  DyadicCube ancestor(long h) const;
  std::vector<DyadicCube> children() const;
  std::string key() const;
  std::string str() const;

  friend auto operator<=>(const DyadicCube&, const DyadicCube&) = default;
};

// b_k = max(k+3, 0) and eta_k = 2^-b_k
long roundoff_bits(long k);
Dyadic roundoff_eta(long k);

// least h with sqrt(n)/2 * 2^-h < 2^-i
long grid_level(long i, int n);
// R(Q, i): vertices of Q and of its sub-cubes of level grid_level(i), lexicographic
std::vector<DyPoint> sample_grid(const DyadicCube& q, long i);

// x in Q* = (1+eps)(Q - c_Q) + c_Q, decided exactly
bool enlarged_contains(const DyadicCube& q, const Dyadic& eps, const DyPoint& x);

// sign of a + b * diam(Q) for dyadic a, b, decided exactly
int sign_with_diam(const Dyadic& a, const Dyadic& b, const DyadicCube& q);

struct GxResult {
  long i = 0;      // first index with delta[i] >= 2^(1-i)
  Dyadic delta;    // delta[i] = d(x, F)[i]
  std::vector<DyadicCube> cubes;
};

// Whitney decomposition of the complement of one set name. All queries are
// memoized; the object is safe for concurrent use.
class CubeContext {
 public:
  explicit CubeContext(SetPtr F, Dyadic eps = Dyadic(1, -3));

  const SetPtr& set() const { return F_; }
  const TotalClosedSet& F() const { return *F_; }
  const Dyadic& eps() const { return eps_; }
  int dim() const { return F_->dim(); }

  bool in_F0(const DyadicCube& q) const;
  bool in_F(const DyadicCube& q) const;
  // nullopt when the delta-search exceeds `budget` indices (x may lie in F)
  std::optional<GxResult> enum_Gx(const CPoint& x, long budget = 200) const;
  // r_Q: first dense point r with d(r, Q) < 5 diam(Q)
  DyPoint approx_projection(const DyadicCube& q) const;
  // all cubes of the decomposition with level in [kmin, kmax] meeting the box
  std::vector<DyadicCube> enum_region(const Box& box, long kmin, long kmax) const;
  // some decomposition cube containing the dyadic point x, searched over the
  // levels with d/7 < diam < 3d
  std::optional<DyadicCube> find_cover(const DyPoint& x) const;
  // certified enclosure of d(Q, F)
  DyInterval cube_distance(const DyadicCube& q, long p) const;
  // 1/2 diam(Q) < d(Q,F) < 5 diam(Q) decided from the enclosure
  static bool c3_certified(const DyadicCube& q, const DyInterval& d);

  // memo for enclosures derived from the decomposition at a point (the
  // normalizer of the partition of unity); bounded, cleared when full
  std::optional<std::vector<DyInterval>> memo_get(const std::string& key) const;
  void memo_put(const std::string& key, std::vector<DyInterval> v) const;

 private:
  Dyadic dist_at(const DyPoint& r, long j) const;
  bool in_F0_uncached(const DyadicCube& q) const;
  // necessary condition for in_F0 from a single distance evaluation at the centre
  bool may_be_F0(const DyadicCube& q) const;
  void region_walk(const DyadicCube& q, const Box& box, long kmax, std::vector<DyadicCube>& out) const;

  SetPtr F_;
  Dyadic eps_;
  mutable std::mutex mu_;
  mutable std::map<std::string, bool> f0_memo_, f_memo_;
  mutable std::map<std::string, DyPoint> proj_memo_;
  mutable std::map<std::string, GxResult> gx_memo_;
  mutable std::map<std::string, std::vector<DyInterval>> derived_memo_;
};

}  // namespace whitney
