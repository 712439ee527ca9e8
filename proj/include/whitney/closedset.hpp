#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "whitney/creal.hpp"

namespace whitney {

using DyPoint = std::vector<Dyadic>;

struct Ball {
  DyPoint center;
  Dyadic radius;
};

struct Box {
  DyPoint lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
};

// Visitor over points; return false to stop the walk.
using PointVisitor = std::function<bool(const DyPoint&)>;

// Total-information name of a nonempty closed set F in R^n.
//
// Positive information is a dense sequence organised in finite rounds of
// increasing resolution. Negative information is organised in rounds too:
// round s consists of the balls B(p, 2^-s) with p on the grid 2^-(s+1) Z^n
// inside [-2^s, 2^s]^n that are certified disjoint from F. Both streams are
// replayable; the flattened order is round by round, lexicographic inside a
// round.
class TotalClosedSet {
 public:
  virtual ~TotalClosedSet() = default;

  virtual int dim() const = 0;

  // Walks the points of dense round k in stream order.
  virtual void dense_round(long k, const PointVisitor& visit) const = 0;
  // Walks, in stream order, the points of round k within sup-distance r of x.
  // Implementations may visit extra points; callers filter.
  virtual void dense_round_near(long k, const DyPoint& x, const Dyadic& r,
                                const PointVisitor& visit) const;

  // Whether the complement stream emits B(p, 2^-s) in round s.
  virtual bool complement_emits(long s, const DyPoint& p) const;

  // |dist(x, j) - d(x, F)| <= 2^-j, deterministic.
  virtual Dyadic dist(const CPoint& x, long j) const = 0;

  // Certified enclosure of d(box, F) when a closed form is available.
  virtual std::optional<DyInterval> distance_to_box(const Box&, long) const { return std::nullopt; }
  virtual std::optional<Box> bounding_box() const { return std::nullopt; }

  // Flattened streams.
  class DenseCursor {
   public:
    explicit DenseCursor(const TotalClosedSet* set) : set_(set) {}
    DyPoint next();
    long round() const { return round_; }

   private:
    const TotalClosedSet* set_;
    long round_ = -1;
    size_t pos_ = 0;
    std::vector<DyPoint> buf_;
  };
  class ComplementCursor {
   public:
    explicit ComplementCursor(const TotalClosedSet* set) : set_(set) {}
    Ball next();
    long round() const { return round_; }

   private:
    const TotalClosedSet* set_;
    long round_ = -1;
    size_t pos_ = 0;
    std::vector<Ball> buf_;
  };
  DenseCursor dense() const { return DenseCursor(this); }
  ComplementCursor complement() const { return ComplementCursor(this); }

  // First ball of complement rounds 0..budget-1 that certifiably contains x.
  // Absence is inconclusive.
  std::optional<Ball> outside_probe(const CPoint& x, long budget) const;
  // Just round s of the probe.
  std::optional<Ball> probe_round(const CPoint& x, long s) const;
  // Emitted balls of complement round s (all of them; only small rounds are practical).
  virtual std::vector<Ball> complement_round(long s) const;
};

using SetPtr = std::shared_ptr<const TotalClosedSet>;

// Finite union of points, closed boxes and closed balls with dyadic data.
struct SetPart {
  enum class Kind { Point, Box, Ball };
  Kind kind = Kind::Point;
  DyPoint a;      // point coordinates, box min, or ball center
  DyPoint b;      // box max
  Dyadic radius;  // ball radius
};

struct SetSpec {
  int dim = 0;
  std::vector<SetPart> parts;
  // Extra stream entries prepended to round 0 (fault injection for the checker).
  std::vector<DyPoint> inject_dense;
  std::vector<Ball> inject_complement;
};

class PrimitiveSet : public TotalClosedSet {
 public:
  explicit PrimitiveSet(SetSpec spec);

  int dim() const override { return spec_.dim; }
  void dense_round(long k, const PointVisitor& visit) const override;
  void dense_round_near(long k, const DyPoint& x, const Dyadic& r,
                        const PointVisitor& visit) const override;
  Dyadic dist(const CPoint& x, long j) const override;
  std::optional<DyInterval> distance_to_box(const Box& q, long p) const override;
  std::optional<Box> bounding_box() const override;

  // enclosure of d(x, F) for coordinate enclosures X, sqrt rounded at precision p
  DyInterval dist_enclosure(const std::vector<DyInterval>& x, long p) const;
  const SetSpec& spec() const { return spec_; }

 private:
  SetSpec spec_;
};

// Name that forgets the closed form: distance is recovered from the dense and
// complement streams of a source name only.
class StreamOnlySet : public TotalClosedSet {
 public:
  explicit StreamOnlySet(SetPtr source) : source_(std::move(source)) {}

  int dim() const override { return source_->dim(); }
  void dense_round(long k, const PointVisitor& visit) const override { source_->dense_round(k, visit); }
  void dense_round_near(long k, const DyPoint& x, const Dyadic& r,
                        const PointVisitor& visit) const override {
    source_->dense_round_near(k, x, r, visit);
  }
  bool complement_emits(long s, const DyPoint& p) const override {
    return source_->complement_emits(s, p);
  }
  Dyadic dist(const CPoint& x, long j) const override;
  // certified bracket [lower, upper] of d(x, F) after examining rounds <= s
  DyInterval bracket(const CPoint& x, long s) const;

 private:
  SetPtr source_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<std::string, long>, Dyadic> memo_;
};

// Source name with extra entries spliced into round 0 of both streams.
class InjectedSet : public TotalClosedSet {
 public:
  InjectedSet(SetPtr base, std::vector<DyPoint> dense, std::vector<Ball> complement)
      : base_(std::move(base)), dense_(std::move(dense)), complement_(std::move(complement)) {}

  int dim() const override { return base_->dim(); }
  void dense_round(long k, const PointVisitor& visit) const override;
  bool complement_emits(long s, const DyPoint& p) const override {
    return base_->complement_emits(s, p);
  }
  std::vector<Ball> complement_round(long s) const override;
  Dyadic dist(const CPoint& x, long j) const override { return base_->dist(x, j); }
  std::optional<DyInterval> distance_to_box(const Box& q, long p) const override {
    return base_->distance_to_box(q, p);
  }
  std::optional<Box> bounding_box() const override { return base_->bounding_box(); }

 private:
  SetPtr base_;
  std::vector<DyPoint> dense_;
  std::vector<Ball> complement_;
};

// Validates the spec (nonempty, consistent dimensions, lo <= hi, radius >= 0)
// and builds the name. Throws std::invalid_argument on a bad spec.
SetPtr make_set(const SetSpec& spec);

Dyadic dist_approx(const TotalClosedSet& F, const CPoint& x, long j);

// Report of the stream consistency checks used by the CLI checker.
struct StreamAudit {
  bool ok = true;
  std::string detail;
};
// No dense point inside a complement ball, and every complement ball keeps
// its radius from the dense points, over the first `dense_count` points and
// the balls of complement rounds <= `rounds`.
StreamAudit audit_streams(const TotalClosedSet& F, size_t dense_count, long rounds);

}  // namespace whitney
