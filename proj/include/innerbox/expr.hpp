// Expression trees for real functions, inequality constraints over them,
// and problems (variables, initial box, constraints, optional universally
// quantified variable).

#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "innerbox/box.hpp"
#include "innerbox/config.hpp"
#include "innerbox/interval.hpp"

namespace innerbox {

enum class Op { constant, variable, add, sub, mul, div, neg, sqr, pow, sqrt, exp, log, sin, cos };

bool is_binary(Op op);
const char* op_name(Op op);

/// Tightest interval with double bounds containing the decimal literal
/// `text` (an unsigned decimal with optional fraction and exponent).
/// Throws std::invalid_argument on malformed or non-finite input.
Interval decimal_enclosure(const std::string& text);
/// Shortest decimal string that reads back as x.
std::string shortest_repr(double x);

struct ExprNode;

/// Immutable, shareable expression handle. Sub-expressions may be shared
/// (the tree is then a DAG); evaluation and printing treat it as a tree.
class Expr {
 public:
  /// A decimal literal. `text` is kept for printing; `enclosure` is the
  /// tightest interval with double bounds containing the literal.
  static Expr constant(double value);
  static Expr constant(Interval enclosure, std::string text);
  static Expr pi();
  static Expr variable(std::size_t index, std::string name);
  static Expr unary(Op op, Expr arg, int exponent = 0);
  static Expr binary(Op op, Expr lhs, Expr rhs);

  Op op() const;
  const ExprNode& node() const { return *node_; }
  const ExprNode* id() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  Op op = Op::constant;
  Interval value;        // constant enclosure
  std::string text;      // constant literal as written
  std::size_t var = 0;   // variable index
  std::string name;      // variable name
  int exponent = 0;      // pow
  std::optional<Expr> lhs, rhs;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator+(const Expr& a, double b);
Expr operator-(const Expr& a, double b);
Expr operator*(const Expr& a, double b);
Expr operator/(const Expr& a, double b);
Expr operator+(double a, const Expr& b);
Expr operator-(double a, const Expr& b);
Expr operator*(double a, const Expr& b);
Expr operator/(double a, const Expr& b);
Expr sqr(const Expr& a);
Expr pow(const Expr& a, int n);
Expr sqrt(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);

/// Infix rendering in the problem-file grammar; parse(print(e)) == e.
std::string print(const Expr& e);

/// Natural interval extension of `e` over `box`.
Interval eval_natural(const Expr& e, const Box& box);
Interval eval_natural(const Expr& e, std::span<const Interval> domains);
/// Floating-point evaluation at a point (no rounding control).
double eval_point(const Expr& e, std::span<const double> point);

/// Variable indices occurring in e, sorted and unique.
std::vector<std::size_t> variables_of(const Expr& e);

enum class Relation { leq0, geq0 };

/// lhs(x) <= 0 or lhs(x) >= 0.
struct Constraint {
  Expr lhs;
  Relation rel = Relation::leq0;

  friend bool operator==(const Constraint& a, const Constraint& b) {
    return a.rel == b.rel && a.lhs == b.lhs;
  }
};

/// Normalizes g <= h into (g - h) <= 0 (and likewise >=); h equal to the
/// literal 0 is dropped.
Constraint make_leq(const Expr& g, const Expr& h);
Constraint make_geq(const Expr& g, const Expr& h);

/// Relaxed negation: flips the relation and keeps the function.
Constraint negate(const Constraint& c);

std::string print(const Constraint& c);
/// True when the constraint holds at the point in floating-point arithmetic.
bool holds_at(const Constraint& c, std::span<const double> point);

struct Quantifier {
  std::string var;
  std::size_t index = 0;
  Interval domain;

  friend bool operator==(const Quantifier& a, const Quantifier& b) {
    return a.var == b.var && a.index == b.index && a.domain == b.domain;
  }
};

/// Variables are ordered free variables first, then the quantified one (if
/// any). The initial box carries the quantifier domain in its slot.
struct Problem {
  std::shared_ptr<const VarNames> variables = std::make_shared<const VarNames>();
  Box initial_box;
  std::vector<Constraint> constraints;
  std::optional<Quantifier> quantifier;
  SolverConfig config;

  std::size_t dimension() const { return variables->size(); }
  std::optional<std::size_t> quantified_index() const {
    return quantifier ? std::optional<std::size_t>(quantifier->index) : std::nullopt;
  }
  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;

  friend bool operator==(const Problem& a, const Problem& b);
};

/// Builder used by the benchmark suite and tests: declare variables in
/// order, then constraints.
class ProblemBuilder {
 public:
  Expr var(const std::string& name, Interval domain);
  Expr forall(const std::string& name, Interval domain);
  void add(Constraint c) { constraints_.push_back(std::move(c)); }
  Problem build() const;

 private:
  std::vector<std::string> names_;
  std::vector<Interval> domains_;
  std::optional<Quantifier> quantifier_;
  std::vector<Constraint> constraints_;
};

/// Problem-file rendering; parse(print(p)) == p.
std::string print(const Problem& p);

// ---------------------------------------------------------------------------
// Decomposition into primitive constraints.

/// Either a slot of the primitive system (original variable or auxiliary)
/// or a constant enclosure.
struct Operand {
  int slot = -1;
  Interval value;
  bool is_constant() const { return slot < 0; }
};

/// out = op(a [, b]); exactly one operator.
struct Primitive {
  Op op = Op::add;
  int out = 0;
  Operand a, b;
  int exponent = 0;
};

/// Slots [0, n_vars) are the original variables; slots from n_vars on are
/// auxiliaries, one per distinct operator node, listed in evaluation order.
struct PrimitiveSystem {
  std::size_t n_vars = 0;
  std::size_t n_slots = 0;
  std::vector<Primitive> primitives;
  Operand root;
  Relation rel = Relation::leq0;
  std::vector<std::string> slot_names;
};

PrimitiveSystem decompose(const Constraint& c, std::size_t n_vars, const VarNames* names = nullptr);
std::string print(const PrimitiveSystem& s);

}  // namespace innerbox
