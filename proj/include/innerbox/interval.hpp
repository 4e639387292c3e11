// Closed floating-point intervals with outward rounding.
//
// Every operation returns an enclosure of the exact real image of its
// arguments. Native IEEE-754 results are widened by one ulp in the outward
// direction unless the result is provably exact (error-free transformations
// for +, -, *, /, sqrt). Transcendental functions are always widened by one
// ulp, which assumes the platform libm is accurate to within one ulp.

#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <string>

namespace innerbox {

/// Smallest double greater than x. +inf maps to itself; NaN throws.
double next_float(double x);
/// Greatest double smaller than x. -inf maps to itself; NaN throws.
double prev_float(double x);

class Interval {
 public:
  /// The degenerate interval [0, 0].
  constexpr Interval() = default;
  /// Thin interval [x, x].
  explicit Interval(double x);
  /// [lo, hi]; throws std::invalid_argument when lo > hi or a bound is NaN.
  Interval(double lo, double hi);

  static Interval empty();
  static Interval entire();
  /// Tight enclosure of pi.
  static Interval pi();

  double lo() const { return lo_; }
  double hi() const { return hi_; }

  bool is_empty() const { return std::isnan(lo_); }
  bool is_bounded() const { return std::isfinite(lo_) && std::isfinite(hi_); }
  /// Non-empty and hi <= next_float(lo).
  bool is_canonical() const;
  bool is_thin() const { return lo_ == hi_; }

  /// hi - lo rounded upward; 0 for EMPTY.
  double width() const;
  /// A representable point inside the interval (requires non-EMPTY).
  double mid() const;
  double mag() const;

  bool contains(double x) const { return !is_empty() && lo_ <= x && x <= hi_; }
  bool contains_zero() const { return contains(0.0); }
  bool subset_of(const Interval& other) const;
  bool interior_overlaps(const Interval& other) const;

  friend bool operator==(const Interval& a, const Interval& b);
  friend bool operator!=(const Interval& a, const Interval& b) { return !(a == b); }

 private:
  struct Unchecked {};
  constexpr Interval(double lo, double hi, Unchecked) : lo_(lo), hi_(hi) {}

  double lo_ = 0.0;
  double hi_ = 0.0;

  friend Interval make_unchecked(double lo, double hi);
};

std::ostream& operator<<(std::ostream& os, const Interval& x);
std::string to_string(const Interval& x);

Interval intersect(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);

Interval add(const Interval& a, const Interval& b);
Interval sub(const Interval& a, const Interval& b);
Interval mul(const Interval& a, const Interval& b);
/// Extended division: a divisor spanning zero yields the hull of the
/// two-piece result, possibly [-inf, +inf]. A divisor equal to [0, 0] is
/// outside the domain and yields EMPTY.
Interval div(const Interval& a, const Interval& b);

Interval neg(const Interval& a);
/// Range of x^2; always non-negative.
Interval sqr(const Interval& a);
/// Range of x^n for n >= 0.
Interval pow_int(const Interval& a, int n);
Interval sqrt(const Interval& a);
Interval exp(const Interval& a);
Interval log(const Interval& a);
Interval sin(const Interval& a);
Interval cos(const Interval& a);
/// Enclosure of asin over a ∩ [-1, 1].
Interval asin(const Interval& a);
/// Enclosure of acos over a ∩ [-1, 1].
Interval acos(const Interval& a);
/// Enclosure of the real n-th root of a (n >= 1). For even n the domain is
/// clipped to [0, +inf) and the non-negative root is returned.
Interval nth_root(const Interval& a, int n);

inline Interval operator+(const Interval& a, const Interval& b) { return add(a, b); }
inline Interval operator-(const Interval& a, const Interval& b) { return sub(a, b); }
inline Interval operator*(const Interval& a, const Interval& b) { return mul(a, b); }
inline Interval operator/(const Interval& a, const Interval& b) { return div(a, b); }
inline Interval operator-(const Interval& a) { return neg(a); }
inline Interval operator+(const Interval& a, double b) { return add(a, Interval(b)); }
inline Interval operator-(const Interval& a, double b) { return sub(a, Interval(b)); }
inline Interval operator*(const Interval& a, double b) { return mul(a, Interval(b)); }
inline Interval operator/(const Interval& a, double b) { return div(a, Interval(b)); }
inline Interval operator+(double a, const Interval& b) { return add(Interval(a), b); }
inline Interval operator-(double a, const Interval& b) { return sub(Interval(a), b); }
inline Interval operator*(double a, const Interval& b) { return mul(Interval(a), b); }
inline Interval operator/(double a, const Interval& b) { return div(Interval(a), b); }

// Directed-rounding primitives on doubles. The *_down variants return a
// value <= the exact result and *_up a value >= it.
namespace rounding {
double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
double sqrt_down(double a);
double sqrt_up(double a);
}  // namespace rounding

}  // namespace innerbox
