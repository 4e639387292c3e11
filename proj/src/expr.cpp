#include "innerbox/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace innerbox {

bool is_binary(Op op) { return op == Op::add || op == Op::sub || op == Op::mul || op == Op::div; }

const char* op_name(Op op) {
  switch (op) {
    case Op::constant: return "const";
    case Op::variable: return "var";
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    case Op::neg: return "neg";
    case Op::sqr: return "sqr";
    case Op::pow: return "pow";
    case Op::sqrt: return "sqrt";
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Decimal literals

namespace {

// Decimal value as 0.DIGITS x 10^exp10 with no leading or trailing zeros in
// DIGITS; zero is the empty digit string.
struct Decimal {
  std::string digits;
  long exp10 = 0;
};

Decimal normalize(const std::string& mantissa_digits, long point_pos) {
  // mantissa_digits are all digits, point_pos = number of digits before the
  // decimal point.
  std::size_t first = mantissa_digits.find_first_not_of('0');
  if (first == std::string::npos) return {};
  std::size_t last = mantissa_digits.find_last_not_of('0');
  Decimal d;
  d.digits = mantissa_digits.substr(first, last - first + 1);
  d.exp10 = point_pos - static_cast<long>(first);
  return d;
}

Decimal parse_decimal(const std::string& text) {
  std::string digits;
  long point = -1;
  std::size_t i = 0;
  for (; i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.'); ++i) {
    if (text[i] == '.') {
      if (point >= 0) throw std::invalid_argument("malformed number '" + text + "'");
      point = static_cast<long>(digits.size());
    } else {
      digits += text[i];
    }
  }
  if (digits.empty()) throw std::invalid_argument("malformed number '" + text + "'");
  if (point < 0) point = static_cast<long>(digits.size());
  long exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw std::invalid_argument("malformed number '" + text + "'");
    ++i;
    std::string e = text.substr(i);
    if (e.empty()) throw std::invalid_argument("malformed number '" + text + "'");
    std::size_t used = 0;
    try {
      exponent = std::stol(e, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed number '" + text + "'");
    }
    if (used != e.size()) throw std::invalid_argument("malformed number '" + text + "'");
  }
  return normalize(digits, point + exponent);
}

// Exact decimal expansion of a non-negative finite double (glibc prints
// every significant digit when asked for enough precision).
Decimal exact_decimal(double x) {
  char buf[1100];
  std::snprintf(buf, sizeof buf, "%.800e", x);
  std::string s(buf);
  std::size_t e = s.find('e');
  std::string mant = s.substr(0, e);
  long exponent = std::stol(s.substr(e + 1));
  std::string digits;
  for (char c : mant)
    if (c != '.') digits += c;
  return normalize(digits, 1 + exponent);
}

// -1, 0, 1 as a <, =, > b.
int compare(const Decimal& a, const Decimal& b) {
  if (a.digits.empty() || b.digits.empty()) {
    if (a.digits.empty() && b.digits.empty()) return 0;
    return a.digits.empty() ? -1 : 1;
  }
  if (a.exp10 != b.exp10) return a.exp10 < b.exp10 ? -1 : 1;
  int c = a.digits.compare(b.digits);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace

Interval decimal_enclosure(const std::string& text) {
  Decimal lit = parse_decimal(text);
  double d = std::strtod(text.c_str(), nullptr);
  if (!std::isfinite(d)) throw std::invalid_argument("number out of range '" + text + "'");
  int c = compare(exact_decimal(d), lit);
  if (c == 0) return Interval(d);
  if (c < 0) return Interval(d, std::nextafter(d, std::numeric_limits<double>::infinity()));
  return Interval(std::nextafter(d, -std::numeric_limits<double>::infinity()), d);
}

std::string shortest_repr(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Expr

Expr Expr::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("constant must be finite");
  std::string text = shortest_repr(std::fabs(value));
  Interval enc = decimal_enclosure(text);
  if (value < 0 || std::signbit(value)) {
    enc = neg(enc);
    text = "-" + text;
  }
  return constant(enc, text);
}

Expr Expr::constant(Interval enclosure, std::string text) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::constant;
  n->value = enclosure;
  n->text = std::move(text);
  return Expr(std::move(n));
}

Expr Expr::pi() { return constant(Interval::pi(), "pi"); }

Expr Expr::variable(std::size_t index, std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::variable;
  n->var = index;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr arg, int exponent) {
  if (op == Op::pow) {
    if (exponent < 0) throw std::invalid_argument("negative exponent");
    if (exponent == 2) op = Op::sqr;
  }
  if (is_binary(op) || op == Op::constant || op == Op::variable) throw std::invalid_argument("not a unary operator");
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->exponent = op == Op::pow ? exponent : (op == Op::sqr ? 2 : 0);
  n->lhs = std::move(arg);
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (!is_binary(op)) throw std::invalid_argument("not a binary operator");
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const ExprNode& x = *a.node_;
  const ExprNode& y = *b.node_;
  if (x.op != y.op) return false;
  switch (x.op) {
    case Op::constant: return x.value == y.value;
    case Op::variable: return x.var == y.var && x.name == y.name;
    case Op::pow:
      if (x.exponent != y.exponent) return false;
      break;
    default: break;
  }
  if (*x.lhs != *y.lhs) return false;
  if (is_binary(x.op)) return *x.rhs == *y.rhs;
  return true;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Op::add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Op::sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Op::mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Op::div, a, b); }
Expr operator-(const Expr& a) { return Expr::unary(Op::neg, a); }
Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
Expr operator/(const Expr& a, double b) { return a / Expr::constant(b); }
Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
Expr operator/(double a, const Expr& b) { return Expr::constant(a) / b; }
Expr sqr(const Expr& a) { return Expr::unary(Op::sqr, a); }
Expr pow(const Expr& a, int n) { return Expr::unary(Op::pow, a, n); }
Expr sqrt(const Expr& a) { return Expr::unary(Op::sqrt, a); }
Expr exp(const Expr& a) { return Expr::unary(Op::exp, a); }
Expr log(const Expr& a) { return Expr::unary(Op::log, a); }
Expr sin(const Expr& a) { return Expr::unary(Op::sin, a); }
Expr cos(const Expr& a) { return Expr::unary(Op::cos, a); }

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength: sums < products < unary minus < powers < atoms.
int precedence(const ExprNode& n) {
  switch (n.op) {
    case Op::add:
    case Op::sub: return 1;
    case Op::mul:
    case Op::div: return 2;
    case Op::neg: return 3;
    case Op::sqr:
    case Op::pow: return 4;
    case Op::constant: return n.text.starts_with('-') ? 0 : 5;
    default: return 5;
  }
}

void print_into(std::string& out, const Expr& e);

void print_child(std::string& out, const Expr& child, bool parens) {
  if (parens) out += '(';
  print_into(out, child);
  if (parens) out += ')';
}

void print_into(std::string& out, const Expr& e) {
  const ExprNode& n = e.node();
  switch (n.op) {
    case Op::constant: out += n.text; return;
    case Op::variable: out += n.name; return;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: {
      int p = precedence(n);
      print_child(out, *n.lhs, precedence(n.lhs->node()) < p);
      out += ' ';
      out += op_name(n.op);
      out += ' ';
      print_child(out, *n.rhs, precedence(n.rhs->node()) <= p);
      return;
    }
    case Op::neg: {
      const ExprNode& c = n.lhs->node();
      out += '-';
      // A bare "-3" would read back as a negative literal.
      bool parens = precedence(c) < 3 || (c.op == Op::constant);
      print_child(out, *n.lhs, parens);
      return;
    }
    case Op::sqr:
    case Op::pow:
      print_child(out, *n.lhs, precedence(n.lhs->node()) < 5);
      out += '^';
      out += std::to_string(n.exponent);
      return;
    default:
      out += op_name(n.op);
      out += '(';
      print_into(out, *n.lhs);
      out += ')';
      return;
  }
}

}  // namespace

std::string print(const Expr& e) {
  std::string s;
  print_into(s, e);
  return s;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Interval apply_unary(const ExprNode& n, const Interval& a) {
  switch (n.op) {
    case Op::neg: return neg(a);
    case Op::sqr: return sqr(a);
    case Op::pow: return pow_int(a, n.exponent);
    case Op::sqrt: return sqrt(a);
    case Op::exp: return exp(a);
    case Op::log: return log(a);
    case Op::sin: return sin(a);
    case Op::cos: return cos(a);
    default: throw std::logic_error("apply_unary: not unary");
  }
}

Interval apply_binary(Op op, const Interval& a, const Interval& b) {
  switch (op) {
    case Op::add: return add(a, b);
    case Op::sub: return sub(a, b);
    case Op::mul: return mul(a, b);
    case Op::div: return div(a, b);
    default: throw std::logic_error("apply_binary: not binary");
  }
}

}  // namespace

Interval eval_natural(const Expr& e, std::span<const Interval> domains) {
  const ExprNode& n = e.node();
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable:
      if (n.var >= domains.size()) throw std::out_of_range("eval_natural: variable '" + n.name + "' has no domain");
      return domains[n.var];
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: {
      Interval a = eval_natural(*n.lhs, domains);
      if (a.is_empty()) return a;
      return apply_binary(n.op, a, eval_natural(*n.rhs, domains));
    }
    default: return apply_unary(n, eval_natural(*n.lhs, domains));
  }
}

Interval eval_natural(const Expr& e, const Box& box) { return eval_natural(e, std::span(box.domains())); }

double eval_point(const Expr& e, std::span<const double> point) {
  const ExprNode& n = e.node();
  switch (n.op) {
    case Op::constant: return n.text == "pi" ? std::numbers::pi : n.value.mid();
    case Op::variable: return point[n.var];
    case Op::add: return eval_point(*n.lhs, point) + eval_point(*n.rhs, point);
    case Op::sub: return eval_point(*n.lhs, point) - eval_point(*n.rhs, point);
    case Op::mul: return eval_point(*n.lhs, point) * eval_point(*n.rhs, point);
    case Op::div: return eval_point(*n.lhs, point) / eval_point(*n.rhs, point);
    case Op::neg: return -eval_point(*n.lhs, point);
    case Op::sqr: {
      double v = eval_point(*n.lhs, point);
      return v * v;
    }
    case Op::pow: return std::pow(eval_point(*n.lhs, point), n.exponent);
    case Op::sqrt: return std::sqrt(eval_point(*n.lhs, point));
    case Op::exp: return std::exp(eval_point(*n.lhs, point));
    case Op::log: return std::log(eval_point(*n.lhs, point));
    case Op::sin: return std::sin(eval_point(*n.lhs, point));
    case Op::cos: return std::cos(eval_point(*n.lhs, point));
  }
  return std::nan("");
}

namespace {
void collect_vars(const Expr& e, std::vector<std::size_t>& out) {
  const ExprNode& n = e.node();
  if (n.op == Op::variable) out.push_back(n.var);
  if (n.lhs) collect_vars(*n.lhs, out);
  if (n.rhs) collect_vars(*n.rhs, out);
}
}  // namespace

std::vector<std::size_t> variables_of(const Expr& e) {
  std::vector<std::size_t> v;
  collect_vars(e, v);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// ---------------------------------------------------------------------------
// Constraints

namespace {
bool is_literal_zero(const Expr& e) {
  return e.op() == Op::constant && e.node().value == Interval(0.0) && e.node().text != "pi";
}
}  // namespace

Constraint make_leq(const Expr& g, const Expr& h) {
  return Constraint{is_literal_zero(h) ? g : g - h, Relation::leq0};
}

Constraint make_geq(const Expr& g, const Expr& h) {
  return Constraint{is_literal_zero(h) ? g : g - h, Relation::geq0};
}

Constraint negate(const Constraint& c) {
  return Constraint{c.lhs, c.rel == Relation::leq0 ? Relation::geq0 : Relation::leq0};
}

std::string print(const Constraint& c) {
  return print(c.lhs) + (c.rel == Relation::leq0 ? " <= 0" : " >= 0");
}

bool holds_at(const Constraint& c, std::span<const double> point) {
  double v = eval_point(c.lhs, point);
  return c.rel == Relation::leq0 ? v <= 0.0 : v >= 0.0;
}

// ---------------------------------------------------------------------------
// Problems

namespace {
void check_vars(const Expr& e, const VarNames& names) {
  const ExprNode& n = e.node();
  if (n.op == Op::variable) {
    if (n.var >= names.size() || names[n.var] != n.name)
      throw std::invalid_argument("expression refers to undeclared variable '" + n.name + "'");
  }
  if (n.op == Op::constant && !n.value.is_bounded()) throw std::invalid_argument("constants must be finite");
  if (n.lhs) check_vars(*n.lhs, names);
  if (n.rhs) check_vars(*n.rhs, names);
}
}  // namespace

void Problem::validate() const {
  if (initial_box.names() != *variables) throw std::invalid_argument("initial box does not match the variable list");
  for (std::size_t i = 0; i < initial_box.size(); ++i) {
    const Interval& d = initial_box[i];
    if (d.is_empty() || !d.is_bounded())
      throw std::invalid_argument("initial domain of '" + (*variables)[i] + "' must be bounded and non-empty");
  }
  if (quantifier) {
    if (quantifier->index >= variables->size() || (*variables)[quantifier->index] != quantifier->var)
      throw std::invalid_argument("quantified variable is not declared");
    if (!quantifier->domain.is_bounded() || quantifier->domain.is_empty())
      throw std::invalid_argument("quantifier domain must be bounded");
    for (std::size_t i = 0; i < variables->size(); ++i)
      if (i != quantifier->index && (*variables)[i] == quantifier->var)
        throw std::invalid_argument("quantified variable clashes with a free variable");
  }
  for (const auto& c : constraints) check_vars(c.lhs, *variables);
}

bool operator==(const Problem& a, const Problem& b) {
  return *a.variables == *b.variables && a.initial_box == b.initial_box && a.constraints == b.constraints &&
         a.quantifier == b.quantifier;
}

Expr ProblemBuilder::var(const std::string& name, Interval domain) {
  if (quantifier_) throw std::logic_error("ProblemBuilder: free variables must precede the quantified one");
  if (std::find(names_.begin(), names_.end(), name) != names_.end())
    throw std::invalid_argument("duplicate variable '" + name + "'");
  names_.push_back(name);
  domains_.push_back(domain);
  return Expr::variable(names_.size() - 1, name);
}

Expr ProblemBuilder::forall(const std::string& name, Interval domain) {
  if (quantifier_) throw std::logic_error("ProblemBuilder: only one quantified variable is supported");
  if (std::find(names_.begin(), names_.end(), name) != names_.end())
    throw std::invalid_argument("duplicate variable '" + name + "'");
  quantifier_ = Quantifier{name, names_.size(), domain};
  return Expr::variable(names_.size(), name);
}

Problem ProblemBuilder::build() const {
  Problem p;
  VarNames names = names_;
  std::vector<Interval> doms = domains_;
  if (quantifier_) {
    names.push_back(quantifier_->var);
    doms.push_back(quantifier_->domain);
  }
  p.variables = std::make_shared<const VarNames>(std::move(names));
  p.initial_box = Box(p.variables, std::move(doms));
  p.constraints = constraints_;
  p.quantifier = quantifier_;
  p.validate();
  return p;
}

namespace {
std::string bound_text(double x) { return shortest_repr(x); }
}  // namespace

std::string print(const Problem& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    if (p.quantifier && p.quantifier->index == i) continue;
    const Interval& d = p.initial_box[i];
    os << "var " << (*p.variables)[i] << " in [" << bound_text(d.lo()) << ", " << bound_text(d.hi()) << "];\n";
  }
  if (p.quantifier) {
    const Interval& d = p.quantifier->domain;
    os << "forall " << p.quantifier->var << " in [" << bound_text(d.lo()) << ", " << bound_text(d.hi()) << "]:\n";
  }
  for (const auto& c : p.constraints) os << print(c) << ";\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Decomposition

namespace {

struct Decomposer {
  PrimitiveSystem sys;
  std::unordered_map<const ExprNode*, Operand> memo;

  Operand visit(const Expr& e) {
    const ExprNode& n = e.node();
    if (n.op == Op::constant) return Operand{-1, n.value};
    if (n.op == Op::variable) {
      if (n.var >= sys.n_vars) throw std::out_of_range("decompose: variable index out of range");
      return Operand{static_cast<int>(n.var), Interval::entire()};
    }
    if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
    Primitive p;
    p.op = n.op;
    p.exponent = n.exponent;
    p.a = visit(*n.lhs);
    if (n.rhs) p.b = visit(*n.rhs);
    p.out = static_cast<int>(sys.n_slots++);
    sys.slot_names.push_back("u" + std::to_string(p.out - static_cast<int>(sys.n_vars) + 1));
    sys.primitives.push_back(p);
    Operand result{p.out, Interval::entire()};
    memo.emplace(e.id(), result);
    return result;
  }
};

std::string operand_text(const PrimitiveSystem& s, const Operand& o) {
  if (o.is_constant()) return o.value.is_thin() ? shortest_repr(o.value.lo()) : to_string(o.value);
  return s.slot_names[static_cast<std::size_t>(o.slot)];
}

}  // namespace

PrimitiveSystem decompose(const Constraint& c, std::size_t n_vars, const VarNames* names) {
  Decomposer d;
  d.sys.n_vars = n_vars;
  d.sys.n_slots = n_vars;
  for (std::size_t i = 0; i < n_vars; ++i)
    d.sys.slot_names.push_back(names && i < names->size() ? (*names)[i] : "x" + std::to_string(i + 1));
  d.sys.rel = c.rel;
  d.sys.root = d.visit(c.lhs);
  return std::move(d.sys);
}

std::string print(const PrimitiveSystem& s) {
  std::ostringstream os;
  for (const auto& p : s.primitives) {
    os << s.slot_names[static_cast<std::size_t>(p.out)] << " = ";
    if (is_binary(p.op)) {
      os << operand_text(s, p.a) << ' ' << op_name(p.op) << ' ' << operand_text(s, p.b);
    } else if (p.op == Op::neg) {
      os << '-' << operand_text(s, p.a);
    } else if (p.op == Op::sqr || p.op == Op::pow) {
      os << operand_text(s, p.a) << '^' << p.exponent;
    } else {
      os << op_name(p.op) << '(' << operand_text(s, p.a) << ')';
    }
    os << '\n';
  }
  os << operand_text(s, s.root) << (s.rel == Relation::leq0 ? " <= 0" : " >= 0") << '\n';
  return os.str();
}

}  // namespace innerbox
