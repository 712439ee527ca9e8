#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "whitney/closedset.hpp"

using namespace whitney;
using namespace whitney::test;

namespace {

Dyadic dist2(const DyPoint& a, const DyPoint& b) {
  Dyadic s(0);
  for (size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
  return s;
}

bool within(const Dyadic& q, const Rational& v, long j) { return abs(R(q) - v) <= R(Dyadic::pow2(-j)); }

}  // namespace

TEST(MakeSet, DistanceExamples) {
  EXPECT_TRUE(within(origin()->dist(CPoint::exact({D("3/2")}), 10), Rational(3, 2), 10));
  EXPECT_TRUE(within(unit_ball2()->dist(CPoint::exact({D(2), D(0)}), 12), Rational(1), 12));
  const CPoint x({CReal::rational(Rational(2, 5))});
  EXPECT_TRUE(within(two_points()->dist(x, 14), Rational(2, 5), 14));
  EXPECT_TRUE(within(unit_ball2()->dist(CPoint::exact({D(0), D(0)}), 9), Rational(0), 9));
  const Dyadic q = origin()->dist(CPoint::exact({D(5)}), 3);
  EXPECT_GE(q, D("39/8"));
  EXPECT_LE(q, D("41/8"));
}

TEST(MakeSet, RejectsBadSpecs) {
  EXPECT_THROW(make_set(spec_of(1, {})), std::invalid_argument);
  EXPECT_THROW(make_set(spec_of(2, {point_part({D(0)})})), std::invalid_argument);
  EXPECT_THROW(make_set(spec_of(1, {box_part({D(1)}, {D(0)})})), std::invalid_argument);
  EXPECT_THROW(make_set(spec_of(1, {ball_part({D(0)}, D(-1))})), std::invalid_argument);
}

TEST(StreamOnly, GenericDistanceFromStreams) {
  const StreamOnlySet F(two_points());
  const Dyadic q = F.dist(CPoint::exact({D("1/2")}), 6);
  EXPECT_TRUE(within(q, Rational(1, 2), 6)) << q.decimal();
  const DyInterval b = F.bracket(CPoint::exact({D("1/2")}), 6);
  EXPECT_LE(b.lo, D("1/2"));
  EXPECT_GE(b.hi, D("1/2"));
}

TEST(StreamOnly, AgreesWithClosedForm) {
  std::mt19937_64 rng(5);
  for (const SetPtr& base : {split_interval(), two_points(0, 3), unit_box2()}) {
    const StreamOnlySet F(base);
    const int samples = base->dim() == 1 ? 20 : 3;
    for (int t = 0; t < samples; ++t) {
      DyPoint x;
      for (int c = 0; c < base->dim(); ++c) x.push_back(random_dyadic(rng, -3, 3, 6));
      const Dyadic a = F.dist(CPoint::exact(x), 5), b = base->dist(CPoint::exact(x), 5);
      EXPECT_LE((a - b).abs(), Dyadic::pow2(-4));
    }
  }
}

TEST(OutsideProbe, Examples) {
  const auto ball = origin()->outside_probe(CPoint::exact({D(1)}), 8);
  ASSERT_TRUE(ball.has_value());
  EXPECT_LT(dist2(ball->center, {D(1)}), ball->radius * ball->radius);
  EXPECT_GE(dist2(ball->center, {D(0)}), ball->radius * ball->radius);

  EXPECT_FALSE(origin()->outside_probe(CPoint::exact({D(0)}), 8).has_value());

  const auto b2 = unit_box2()->outside_probe(CPoint::exact({D(2), D(2)}), 6);
  ASSERT_TRUE(b2.has_value());
  EXPECT_LT(dist2(b2->center, {D(2), D(2)}), b2->radius * b2->radius);
}

TEST(DenseStream, Schedules) {
  const SetPtr o = origin();
  auto cur = o->dense();
  for (int t = 0; t < 5; ++t) EXPECT_EQ(cur.next(), DyPoint{D(0)});

  // box [0,1]^2: round k is the 2^-k grid of the box
  std::vector<DyPoint> r1;
  unit_box2()->dense_round(1, [&](const DyPoint& p) {
    r1.push_back(p);
    return true;
  });
  EXPECT_EQ(r1.size(), 9u);
  for (const auto& p : r1)
    for (const auto& c : p) EXPECT_TRUE(c == D(0) || c == D("1/2") || c == D(1));

  // ball in R: -1, 0, 1 among the early emissions
  const SetPtr seg = make_set(spec_of(1, {ball_part({D(0)}, D(1))}));
  std::vector<DyPoint> early;
  auto c2 = seg->dense();
  for (int t = 0; t < 16; ++t) early.push_back(c2.next());
  for (long v : {-1L, 0L, 1L}) EXPECT_NE(std::find(early.begin(), early.end(), DyPoint{D(v)}), early.end()) << v;
}

TEST(DenseStream, PointsLieInSet) {
  for (const SetPtr& F : {unit_ball2(), unit_box2(), split_interval()}) {
    auto cur = F->dense();
    for (int t = 0; t < 300; ++t) {
      const DyPoint p = cur.next();
      EXPECT_TRUE(F->dist(CPoint::exact(p), 20) <= Dyadic::pow2(-20));
    }
  }
}

// d(x,F) is bracketed by the nearest dense point above and by complement
// certificates below
TEST(Invariants, DistanceSandwich) {
  std::mt19937_64 rng(11);
  for (const SetPtr& F : {unit_ball2(), unit_box2()}) {
    std::vector<DyPoint> pts;
    auto cur = F->dense();
    for (int t = 0; t < 400; ++t) pts.push_back(cur.next());
    const auto balls = F->complement_round(2);
    for (int t = 0; t < 100; ++t) {
      const DyPoint x = {random_dyadic(rng, -3, 3, 8), random_dyadic(rng, -3, 3, 8)};
      const long j = 10;
      const Dyadic d = F->dist(CPoint::exact(x), j);
      Dyadic best2 = dist2(x, pts[0]);
      for (const auto& p : pts) best2 = min(best2, dist2(x, p));
      const Dyadic up = d - Dyadic::pow2(-j);
      if (up.sign() > 0) EXPECT_LE(up * up, best2);
      for (const auto& b : balls) {
        // x in B(c, r) and B misses F give d(x,F) >= r - |x - c|
        const DyInterval dx = dist_enclosure(CPoint::exact(x), b.center, 40);
        const Dyadic lower = b.radius - dx.hi;
        EXPECT_GE(d + Dyadic::pow2(-j), lower);
      }
    }
  }
}

TEST(Invariants, ComplementSoundAndConsistent) {
  for (const SetPtr& F : {origin(), two_points(), unit_ball2(), unit_box2(), split_interval()}) {
    std::vector<DyPoint> pts;
    auto cur = F->dense();
    for (int t = 0; t < 300; ++t) pts.push_back(cur.next());
    const long rounds = F->dim() == 1 ? 4 : 2;
    for (long s = 0; s <= rounds; ++s)
      for (const auto& b : F->complement_round(s))
        for (const auto& p : pts) ASSERT_GE(dist2(b.center, p), b.radius * b.radius);
    EXPECT_TRUE(audit_streams(*F, 300, rounds).ok);
  }
}

TEST(Invariants, InjectedFaultDetected) {
  SetSpec spec = spec_of(1, {point_part({D(0)})});
  spec.inject_dense.push_back({D("3/2")});
  const StreamAudit a = audit_streams(*make_set(spec), 64, 3);
  EXPECT_FALSE(a.ok);
  EXPECT_NE(a.detail.find("1.5"), std::string::npos);

  SetSpec spec2 = spec_of(1, {point_part({D(0)})});
  spec2.inject_complement.push_back(Ball{{D("1/8")}, D("1/2")});
  EXPECT_FALSE(audit_streams(*make_set(spec2), 64, 1).ok);
}

TEST(Invariants, Deterministic) {
  const SetPtr F = unit_ball2();
  const CPoint x = CPoint::exact({D("3/4"), D("-5/8")});
  for (long j = 0; j < 40; j += 4) EXPECT_EQ(F->dist(x, j), F->dist(x, j));
}
