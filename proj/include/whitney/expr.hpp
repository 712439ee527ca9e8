#pragma once

#include <memory>
#include <vector>

#include "whitney/interval.hpp"

namespace whitney {

// Arithmetic DAG over dyadic constants and numbered inputs. Shared
// subexpressions are evaluated once per interval_eval call.
class Expr {
 public:
  enum class Op { Input, Const, Add, Sub, Mul, Div, Neg, Exp, Sqrt };

  static Expr input(size_t index);
  static Expr constant(const Dyadic& v);

  Expr operator+(const Expr& o) const { return make(Op::Add, {*this, o}); }
  Expr operator-(const Expr& o) const { return make(Op::Sub, {*this, o}); }
  Expr operator*(const Expr& o) const { return make(Op::Mul, {*this, o}); }
  Expr operator/(const Expr& o) const { return make(Op::Div, {*this, o}); }
  Expr operator-() const { return make(Op::Neg, {*this}); }
  friend Expr exp(const Expr& a) { return make(Op::Exp, {a}); }
  friend Expr sqrt(const Expr& a) { return make(Op::Sqrt, {a}); }

  struct Node {
    Op op;
    size_t index = 0;
    Dyadic value;
    std::vector<std::shared_ptr<const Node>> args;
  };
  const std::shared_ptr<const Node>& node() const { return node_; }

 private:
  static Expr make(Op op, const std::vector<Expr>& args);
  std::shared_ptr<const Node> node_;
};

// Enclosure of the expression over the input boxes; inexact operations round
// outward at absolute precision p. Throws RefinementRequired when a divisor
// or a square-root argument is not decided by the inputs.
DyInterval interval_eval(const Expr& e, const std::vector<DyInterval>& inputs, long p);

}  // namespace whitney
