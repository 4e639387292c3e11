// Random generators and a long double reference evaluator shared by the
// unit, property and acceptance tests.

#pragma once

#include <cmath>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "innerbox/benchmarks.hpp"
#include "innerbox/expr.hpp"
#include "innerbox/interval.hpp"

namespace innerbox::fuzz {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  /// Mostly moderate values, with integers, zero and small magnitudes mixed
  /// in so exact and inexact paths are both exercised.
  double scalar(double range = 10.0) {
    switch (integer(0, 9)) {
      case 0: return 0.0;
      case 1: return static_cast<double>(integer(-5, 5));
      case 2: return uniform(-1e-3, 1e-3);
      case 3: return uniform(-1e3, 1e3);
      default: return uniform(-range, range);
    }
  }

  Interval interval(double range = 10.0) {
    double a = scalar(range), b = coin(0.15) ? a : scalar(range);
    if (a > b) std::swap(a, b);
    return Interval(a, b);
  }

  /// Bounds on the grid k / 1024 with |k| <= 2^20: sums and products of up
  /// to three such values are exact in double precision.
  Interval dyadic_interval() {
    double a = integer(-(1 << 20), 1 << 20) / 1024.0, b = coin(0.15) ? a : integer(-(1 << 20), 1 << 20) / 1024.0;
    if (a > b) std::swap(a, b);
    return Interval(a, b);
  }

  /// A point of x, endpoints included with some probability.
  double point_in(const Interval& x) {
    if (x.is_thin()) return x.lo();
    switch (integer(0, 5)) {
      case 0: return x.lo();
      case 1: return x.hi();
      default: {
        double p = uniform(x.lo(), x.hi());
        return std::clamp(p, x.lo(), x.hi());
      }
    }
  }

  Box box(const VarNames& names, double range = 5.0) {
    std::vector<Interval> d;
    for (std::size_t i = 0; i < names.size(); ++i) d.push_back(interval(range));
    return Box(names, d);
  }

  std::vector<double> point_in(const Box& b) {
    std::vector<double> p;
    for (const auto& d : b.domains()) p.push_back(point_in(d));
    return p;
  }

  Expr expr(const VarNames& names, int depth) {
    if (depth <= 0 || coin(0.2)) {
      if (coin(0.7)) {
        auto i = static_cast<std::size_t>(integer(0, static_cast<int>(names.size()) - 1));
        return Expr::variable(i, names[i]);
      }
      if (coin(0.2)) return Expr::pi();
      return Expr::constant(static_cast<double>(integer(-20, 20)) / 4.0);
    }
    switch (integer(0, 12)) {
      case 0: return expr(names, depth - 1) + expr(names, depth - 1);
      case 1: return expr(names, depth - 1) - expr(names, depth - 1);
      case 2:
      case 3: return expr(names, depth - 1) * expr(names, depth - 1);
      case 4: return expr(names, depth - 1) / expr(names, depth - 1);
      case 5: return -expr(names, depth - 1);
      case 6: return sqr(expr(names, depth - 1));
      case 7: return pow(expr(names, depth - 1), integer(0, 5));
      case 8: return sqrt(expr(names, depth - 1));
      case 9: return exp(expr(names, depth - 1) / 4.0);
      case 10: return log(expr(names, depth - 1));
      case 11: return sin(expr(names, depth - 1));
      default: return cos(expr(names, depth - 1));
    }
  }

 private:
  std::mt19937_64 rng_;
};

/// Reference value in extended precision; NaN outside the domain.
inline long double eval_ref(const Expr& e, std::span<const double> point) {
  const ExprNode& n = e.node();
  auto arg = [&](const std::optional<Expr>& x) { return eval_ref(*x, point); };
  switch (n.op) {
    case Op::constant:
      if (n.text == "pi") return 3.141592653589793238462643383279502884L;
      if (!n.text.empty()) return std::strtold(n.text.c_str(), nullptr);
      return static_cast<long double>(n.value.lo());
    case Op::variable: return point[n.var];
    case Op::add: return arg(n.lhs) + arg(n.rhs);
    case Op::sub: return arg(n.lhs) - arg(n.rhs);
    case Op::mul: return arg(n.lhs) * arg(n.rhs);
    case Op::div: {
      long double d = arg(n.rhs);
      if (d == 0) return NAN;
      return arg(n.lhs) / d;
    }
    case Op::neg: return -arg(n.lhs);
    case Op::sqr: {
      long double a = arg(n.lhs);
      return a * a;
    }
    case Op::pow: {
      long double a = arg(n.lhs), r = 1;
      if (std::isnan(static_cast<double>(a))) return a;
      for (int i = 0; i < n.exponent; ++i) r *= a;
      return r;
    }
    case Op::sqrt: {
      long double a = arg(n.lhs);
      return a < 0 ? NAN : sqrtl(a);
    }
    case Op::exp: return expl(arg(n.lhs));
    case Op::log: {
      long double a = arg(n.lhs);
      return a <= 0 ? NAN : logl(a);
    }
    case Op::sin: return sinl(arg(n.lhs));
    case Op::cos: return cosl(arg(n.lhs));
  }
  return NAN;
}

/// Containment of an extended precision reference value, allowing for the
/// reference's own rounding error relative to its magnitude.
inline bool encloses(const Interval& x, long double v) {
  if (std::isnan(static_cast<double>(v)) || std::isinf(static_cast<double>(v))) return true;
  if (x.is_empty()) return false;
  long double slack = 1e-17L * (1.0L + fabsl(v));
  return x.lo() <= v + slack && v - slack <= x.hi();
}

/// Free-variable coordinates of a full-dimension point.
inline std::vector<double> drop_slot(std::span<const double> full, std::optional<std::size_t> slot) {
  std::vector<double> out;
  for (std::size_t i = 0; i < full.size(); ++i)
    if (i != slot) out.push_back(full[i]);
  return out;
}

struct BoxCheck {
  bool ok = true;
  bool certified_whole = false;
  std::size_t points = 0;
  std::string failure;
};

/// Checks an inner box against the benchmark oracle: certified as a whole
/// when possible, otherwise at every corner and `samples` random points.
inline BoxCheck check_inner_box(const std::string& name, const Box& b, std::optional<std::size_t> slot, Gen& g,
                                int samples) {
  BoxCheck r;
  if (oracle_box(name, b) == Verdict::solution) {
    r.certified_whole = true;
    return r;
  }
  auto test = [&](std::span<const double> full) {
    auto p = drop_slot(full, slot);
    ++r.points;
    Verdict v = oracle_eval(name, p);
    if (v != Verdict::solution && r.ok) {
      r.ok = false;
      r.failure = to_string(v) + " at";
      for (double x : p) r.failure += " " + std::to_string(x);
    }
  };
  const std::size_t n = b.size();
  std::vector<double> c(n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    if (slot && ((mask >> *slot) & 1)) continue;
    for (std::size_t i = 0; i < n; ++i) c[i] = (mask >> i) & 1 ? b[i].hi() : b[i].lo();
    test(c);
  }
  for (int s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < n; ++i) c[i] = b[i].is_thin() ? b[i].lo() : std::clamp(g.uniform(b[i].lo(), b[i].hi()), b[i].lo(), b[i].hi());
    test(c);
  }
  return r;
}

}  // namespace innerbox::fuzz
