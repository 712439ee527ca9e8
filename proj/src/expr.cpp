#include "whitney/expr.hpp"

#include <unordered_map>

namespace whitney {

Expr Expr::input(size_t index) {
  auto n = std::make_shared<Node>();
  n->op = Op::Input;
  n->index = index;
  Expr e;
  e.node_ = n;
  return e;
}

Expr Expr::constant(const Dyadic& v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  Expr e;
  e.node_ = n;
  return e;
}

Expr Expr::make(Op op, const std::vector<Expr>& args) {
  auto n = std::make_shared<Node>();
  n->op = op;
  for (const auto& a : args) n->args.push_back(a.node_);
  Expr e;
  e.node_ = n;
  return e;
}

namespace {

using Memo = std::unordered_map<const Expr::Node*, DyInterval>;

DyInterval eval(const Expr::Node* n, const std::vector<DyInterval>& in, long p, Memo& memo) {
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  auto arg = [&](size_t k) { return eval(n->args[k].get(), in, p, memo); };
  DyInterval r;
  switch (n->op) {
    case Expr::Op::Input:
      if (n->index >= in.size()) throw std::out_of_range("expression input index");
      r = in[n->index];
      break;
    case Expr::Op::Const: r = DyInterval(n->value); break;
    case Expr::Op::Add: r = arg(0) + arg(1); break;
    case Expr::Op::Sub: r = arg(0) - arg(1); break;
    case Expr::Op::Mul: r = (arg(0) * arg(1)).round_out(p + 8); break;
    case Expr::Op::Div: r = div(arg(0), arg(1), p + 8); break;
    case Expr::Op::Neg: r = -arg(0); break;
    case Expr::Op::Exp: r = exp(arg(0), p + 8); break;
    case Expr::Op::Sqrt: {
      DyInterval a = arg(0);
      if (a.lo.sign() < 0) throw RefinementRequired("sqrt argument not certified nonnegative");
      r = sqrt(a, p + 8);
      break;
    }
  }
  memo.emplace(n, r);
  return r;
}

}  // namespace

DyInterval interval_eval(const Expr& e, const std::vector<DyInterval>& inputs, long p) {
  Memo memo;
  return eval(e.node().get(), inputs, p, memo);
}

}  // namespace whitney
