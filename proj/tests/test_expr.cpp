#include <gtest/gtest.h>

#include "innerbox/expr.hpp"
#include "innerbox/parser.hpp"
#include "support.hpp"

using namespace innerbox;
using innerbox::fuzz::Gen;

namespace {

const VarNames kXyz = {"x", "y", "z"};

Expr x() { return Expr::variable(0, "x"); }
Expr y() { return Expr::variable(1, "y"); }
Expr z() { return Expr::variable(2, "z"); }

}  // namespace

TEST(EvalNatural, ParabolaAtUnitCoefficients) {
  Problem p = parse_problem(
      "var a in [0, 1]; var b in [0, 1]; var c in [0, 1];\n"
      "forall t in [0, 2]:\n"
      "a*t^2 + b*t + c >= 2*t - 1\n");
  Box b({"a", "b", "c", "t"}, {Interval(1), Interval(1), Interval(1), Interval(0, 2)});
  EXPECT_EQ(eval_natural(p.constraints[0].lhs, b), Interval(-2, 8));
}

TEST(EvalNatural, Dependency) {
  Box b({"x"}, {Interval(0, 1)});
  EXPECT_EQ(eval_natural(x() - x(), b), Interval(-1, 1));
}

TEST(EvalNatural, Constants) {
  Box b({"x"}, {Interval(0, 1)});
  EXPECT_EQ(eval_natural(Expr::constant(0.5), b), Interval(0.5));
  Interval tenth = eval_natural(Expr::constant(0.1), b);
  EXPECT_LT(tenth.lo(), tenth.hi());
  EXPECT_TRUE(tenth.contains(0.1));
  EXPECT_EQ(next_float(tenth.lo()), tenth.hi());
}

TEST(EvalNatural, ContainmentProperty) {
  Gen g(21);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    Expr e = g.expr(kXyz, 4);
    Box b = g.box(kXyz, 3.0);
    Interval r = eval_natural(e, b);
    for (int k = 0; k < 3; ++k) {
      auto pt = g.point_in(b);
      long double v = fuzz::eval_ref(e, pt);
      if (std::isnan(static_cast<double>(v))) continue;
      ++checked;
      ASSERT_TRUE(fuzz::encloses(r, v)) << print(e) << " over " << to_string(b) << " gives " << r;
    }
  }
  EXPECT_GT(checked, 10000);
}

TEST(Negate, RelaxedAndInvolutive) {
  Constraint c = make_leq(x() * y(), Expr::constant(0.0));
  Constraint n = negate(c);
  EXPECT_EQ(n.rel, Relation::geq0);
  EXPECT_EQ(n.lhs, c.lhs);
  EXPECT_EQ(negate(n), c);
  Constraint half = make_geq(x() - 0.5, Expr::constant(0.0));
  std::vector<double> pt = {0.5};
  EXPECT_TRUE(holds_at(half, pt));
  EXPECT_TRUE(holds_at(negate(half), pt));
}

TEST(Decompose, Flattening) {
  PrimitiveSystem s = decompose(make_leq(x() * y() + z(), Expr::constant(0.0)), 3);
  ASSERT_EQ(s.primitives.size(), 2u);
  EXPECT_EQ(s.primitives[0].op, Op::mul);
  EXPECT_EQ(s.primitives[0].a.slot, 0);
  EXPECT_EQ(s.primitives[0].b.slot, 1);
  EXPECT_EQ(s.primitives[1].op, Op::add);
  EXPECT_EQ(s.primitives[1].a.slot, s.primitives[0].out);
  EXPECT_EQ(s.primitives[1].b.slot, 2);
  EXPECT_EQ(s.root.slot, s.primitives[1].out);
  EXPECT_EQ(s.rel, Relation::leq0);

  PrimitiveSystem atom = decompose(make_leq(x(), Expr::constant(0.0)), 3);
  EXPECT_TRUE(atom.primitives.empty());
  EXPECT_EQ(atom.root.slot, 0);

  PrimitiveSystem t = decompose(make_geq(sin(x()) * x(), Expr::constant(0.0)), 3);
  ASSERT_EQ(t.primitives.size(), 2u);
  EXPECT_EQ(t.primitives[0].op, Op::sin);
  EXPECT_EQ(t.primitives[1].op, Op::mul);
  EXPECT_EQ(t.rel, Relation::geq0);
}

TEST(Decompose, SharedSubtermsGetOneSlot) {
  Expr s = x() + y();
  PrimitiveSystem sys = decompose(make_leq(s * s, Expr::constant(1.0)), 3);
  // s, s*s and the subtraction of the right-hand side.
  EXPECT_EQ(sys.primitives.size(), 3u);
}

// Auxiliaries set to subterm values satisfy every primitive, and the root
// carries the constraint's value.
TEST(Decompose, SoundnessProperty) {
  Gen g(22);
  for (int i = 0; i < 3000; ++i) {
    Expr e = g.expr(kXyz, 4);
    Constraint c{e, g.coin() ? Relation::leq0 : Relation::geq0};
    PrimitiveSystem sys = decompose(c, 3);
    Box b = g.box(kXyz, 3.0);
    auto pt = g.point_in(b);
    long double v = fuzz::eval_ref(e, pt);
    if (std::isnan(static_cast<double>(v)) || std::isinf(static_cast<double>(v))) continue;
    // Evaluate the flat system at the point.
    std::vector<Interval> slots(sys.n_slots, Interval::entire());
    for (std::size_t k = 0; k < 3; ++k) slots[k] = Interval(pt[k]);
    auto operand = [&](const Operand& o) { return o.is_constant() ? o.value : slots[static_cast<std::size_t>(o.slot)]; };
    for (const auto& p : sys.primitives) {
      Interval a = operand(p.a), r;
      switch (p.op) {
        case Op::add: r = add(a, operand(p.b)); break;
        case Op::sub: r = sub(a, operand(p.b)); break;
        case Op::mul: r = mul(a, operand(p.b)); break;
        case Op::div: r = div(a, operand(p.b)); break;
        case Op::neg: r = neg(a); break;
        case Op::sqr: r = sqr(a); break;
        case Op::pow: r = pow_int(a, p.exponent); break;
        case Op::sqrt: r = sqrt(a); break;
        case Op::exp: r = exp(a); break;
        case Op::log: r = log(a); break;
        case Op::sin: r = sin(a); break;
        case Op::cos: r = cos(a); break;
        default: FAIL() << "unexpected primitive " << op_name(p.op);
      }
      slots[static_cast<std::size_t>(p.out)] = r;
    }
    Interval root = operand(sys.root);
    ASSERT_TRUE(fuzz::encloses(root, v)) << print(e);
    EXPECT_EQ(sys.rel, c.rel);
    EXPECT_EQ(root, eval_natural(e, Box(kXyz, {Interval(pt[0]), Interval(pt[1]), Interval(pt[2])})));
  }
}

TEST(Print, RoundTripProperty) {
  Gen g(23);
  for (int i = 0; i < 3000; ++i) {
    Expr e = g.expr(kXyz, 4);
    std::string text = print(e);
    Expr back = parse_expr(text, kXyz);
    ASSERT_EQ(back, e) << text << " reparsed as " << print(back);
  }
}
