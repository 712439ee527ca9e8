#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "whitney/bump.hpp"
#include "whitney/cubes.hpp"
#include "whitney/jet.hpp"

namespace whitney {

// Number of multi-indices in n variables of exact degree d.
BigInt degree_count(int n, int d);

// Constants of the extension for one jet. Rationals are exact values of the
// defining expressions with B'_l replaced by its certified dyadic upper bound.
struct ExtConstants {
  Dyadic eps;
  int n = 0;
  int m = 0;
  Rational M;
  Rational e;  // 2 / (1 - eps)
  Rational c;  // 14 e + 1
  BigInt N;    // bound on the number of cubes whose enlargement holds a point
  Rational A;  // A_m
  std::map<MultiIndex, Rational> Ak;  // A_m^k for |k| <= m

  BigInt p(int d) const { return degree_count(n, d); }
};

ExtConstants ext_constants(const WhitneyJet& jet, const Dyadic& eps = Dyadic(1, -3));

// A_m^k for a compatibility constant M (k = 0 gives A_m).
Rational whitney_A(int n, int m, const Rational& M, const MultiIndex& k, const Dyadic& eps);

// Certified pair for f: f(closed domain ball meet F) lies in the open value ball.
struct FnPair {
  Ball domain;
  Ball value;
  long round = 0;  // dense round of the centre
  long b = 0;      // value radius 2^-b
};

// Pair centred at the dense point y with value radius 2^-b: the domain radius
// is min(2^-b, modulus(R, 2^-b-2)) and the centre value is f(y) to 2^-b-2.
FnPair make_pair(const FnOnF& f, const DyPoint& y, long b);

// Replayable stream: stage t emits, for b = 0..t, the pairs of value radius
// 2^-b centred at the points of dense round t - b.
class PairStream {
 public:
  explicit PairStream(FnOnF f) : f_(std::move(f)) {}
  FnPair next();

 private:
  FnOnF f_;
  long stage_ = 0, b_ = -1;
  size_t pos_ = 0;
  std::vector<DyPoint> buf_;
};

enum class Branch { OutsideF, ViaF };
std::string branch_name(Branch b);

struct EvalResult {
  Dyadic value;
  long precision = 0;
  Branch branch = Branch::ViaF;
  long stage = 0;
};

// Extension operator for one set name. Evaluations are deterministic and
// may run concurrently; memo tables live in the cube context.
class Extender {
 public:
  explicit Extender(std::shared_ptr<const CubeContext> ctx);

  const CubeContext& context() const { return *ctx_; }
  const Dyadic& eps() const { return ctx_->eps(); }

  // value within 2^-i of g(x), g the extension of f
  EvalResult wet0(const FnOnF& f, const CPoint& x, long i) const;
  // value within 2^-i of d_k g(x), g the extension of the jet; |k| <= order
  EvalResult wetm(const WhitneyJet& jet, const CPoint& x, const MultiIndex& k, long i) const;

  // Off-set formula sum_Q sum_{l<=k} C(k,l) P^l_{r_Q}(x) d_{k-l} phi*_Q(x);
  // x must be certified outside F.
  Dyadic outside_value(const WhitneyJet& jet, const CPoint& x, const MultiIndex& k, long i) const;

 private:
  struct Query;
  bool via_f(Query& q, const DyPoint& y, long b) const;

  std::shared_ptr<const CubeContext> ctx_;
};

// Order-0 jet with the single component f and M = 0.
WhitneyJet as_jet(const FnOnF& f);

Dyadic wet0_eval(const Extender& ext, const FnOnF& f, const CPoint& x, long i);
Dyadic wetm_eval(const Extender& ext, const WhitneyJet& jet, const CPoint& x, const MultiIndex& k, long i);

}  // namespace whitney
