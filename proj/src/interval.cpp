#include "innerbox/interval.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <charconv>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace innerbox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMax = std::numeric_limits<double>::max();
// Below this magnitude the error terms of fma-based checks may underflow,
// so results are nudged unconditionally.
constexpr double kTiny = 0x1p-969;

// Neighbouring floats by ordinal step; r is never NaN here.
inline double step_up(double r) {
  if (r == kInf) return r;
  if (r == 0.0) return std::numeric_limits<double>::denorm_min();
  auto bits = std::bit_cast<std::uint64_t>(r);
  bits += r > 0 ? 1 : -1;
  return std::bit_cast<double>(bits);
}
inline double step_down(double r) { return -step_up(-r); }

double nudge_down(double r) { return std::isinf(r) && r > 0 ? kMax : step_down(r); }
double nudge_up(double r) { return std::isinf(r) && r < 0 ? -kMax : step_up(r); }

// Result r of a native operation overflowed to +/-inf although the operands
// were finite; the exact value is finite and of the same sign.
double overflow_down(double r) { return r > 0 ? kMax : r; }
double overflow_up(double r) { return r < 0 ? -kMax : r; }

}  // namespace

Interval make_unchecked(double lo, double hi) { return Interval(lo, hi, Interval::Unchecked{}); }

double next_float(double x) {
  if (std::isnan(x)) throw std::domain_error("next_float: NaN argument");
  return step_up(x);
}

double prev_float(double x) {
  if (std::isnan(x)) throw std::domain_error("prev_float: NaN argument");
  return step_down(x);
}

namespace rounding {

namespace {
// Sign of the rounding error of a + b: (exact - rounded).
double two_sum_error(double a, double b, double s) {
  double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}
}  // namespace

double add_down(double a, double b) {
  double s = a + b;
  if (std::isinf(s)) return (std::isinf(a) || std::isinf(b)) ? s : overflow_down(s);
  return two_sum_error(a, b, s) < 0 ? step_down(s) : s;
}

double add_up(double a, double b) {
  double s = a + b;
  if (std::isinf(s)) return (std::isinf(a) || std::isinf(b)) ? s : overflow_up(s);
  return two_sum_error(a, b, s) > 0 ? step_up(s) : s;
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = a * b;
  if (std::isinf(p)) return (std::isinf(a) || std::isinf(b)) ? p : overflow_down(p);
  if (std::fabs(p) < kTiny) return step_down(p);
  return std::fma(a, b, -p) < 0 ? step_down(p) : p;
}

double mul_up(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = a * b;
  if (std::isinf(p)) return (std::isinf(a) || std::isinf(b)) ? p : overflow_up(p);
  if (std::fabs(p) < kTiny) return step_up(p);
  return std::fma(a, b, -p) > 0 ? step_up(p) : p;
}

namespace {
// Sign of (a / b - q) for q the rounded quotient, or 0 when the remainder
// test is not reliable (caller nudges unconditionally then).
int quotient_error_sign(double a, double b, double q, bool& reliable) {
  reliable = std::fabs(q) >= kTiny && std::fabs(a) >= kTiny;
  if (!reliable) return 0;
  double rem = std::fma(-q, b, a);
  if (rem == 0.0) return 0;
  return ((rem > 0) == (b > 0)) ? 1 : -1;
}
}  // namespace

double div_down(double a, double b) {
  if (a == 0.0) return 0.0;
  if (std::isinf(b)) return std::isinf(a) ? std::nan("") : ((a > 0) == (b > 0) ? 0.0 : -0.0);
  double q = a / b;
  if (std::isinf(q)) return std::isinf(a) ? q : overflow_down(q);
  bool reliable = true;
  int s = quotient_error_sign(a, b, q, reliable);
  if (!reliable || s < 0) return step_down(q);
  return q;
}

double div_up(double a, double b) {
  if (a == 0.0) return 0.0;
  if (std::isinf(b)) return std::isinf(a) ? std::nan("") : ((a > 0) == (b > 0) ? 0.0 : -0.0);
  double q = a / b;
  if (std::isinf(q)) return std::isinf(a) ? q : overflow_up(q);
  bool reliable = true;
  int s = quotient_error_sign(a, b, q, reliable);
  if (!reliable || s > 0) return step_up(q);
  return q;
}

double sqrt_down(double a) {
  double s = std::sqrt(a);
  if (a == 0.0 || std::isinf(a)) return s;
  if (a < kTiny) return std::max(0.0, step_down(s));
  return std::fma(-s, s, a) < 0 ? step_down(s) : s;
}

double sqrt_up(double a) {
  double s = std::sqrt(a);
  if (a == 0.0 || std::isinf(a)) return s;
  if (a < kTiny) return step_up(s);
  return std::fma(-s, s, a) > 0 ? step_up(s) : s;
}

}  // namespace rounding

using namespace rounding;

Interval::Interval(double x) : lo_(x), hi_(x) {
  if (std::isnan(x) || std::isinf(x)) throw std::invalid_argument("Interval: thin interval needs a finite value");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw std::invalid_argument("Interval: NaN bound");
  if (lo > hi) throw std::invalid_argument("Interval: lo > hi");
  if (lo == kInf || hi == -kInf) throw std::invalid_argument("Interval: bound at infinity on the wrong side");
}

Interval Interval::empty() {
  double nan = std::numeric_limits<double>::quiet_NaN();
  return Interval(nan, nan, Unchecked{});
}

Interval Interval::entire() { return Interval(-kInf, kInf, Unchecked{}); }

Interval Interval::pi() {
  // std::numbers::pi rounds down; the true value lies in the next ulp.
  return Interval(std::numbers::pi, std::nextafter(std::numbers::pi, kInf), Unchecked{});
}

bool Interval::is_canonical() const { return !is_empty() && hi_ <= step_up(lo_); }

double Interval::width() const {
  if (is_empty()) return 0.0;
  return sub_up(hi_, lo_);
}

double Interval::mid() const {
  if (is_empty()) throw std::domain_error("mid of EMPTY interval");
  if (lo_ == -kInf && hi_ == kInf) return 0.0;
  if (lo_ == -kInf) return -kMax;
  if (hi_ == kInf) return kMax;
  double m = 0.5 * lo_ + 0.5 * hi_;
  return std::clamp(m, lo_, hi_);
}

double Interval::mag() const {
  if (is_empty()) return 0.0;
  return std::max(std::fabs(lo_), std::fabs(hi_));
}

bool Interval::subset_of(const Interval& other) const {
  if (is_empty()) return true;
  if (other.is_empty()) return false;
  return other.lo_ <= lo_ && hi_ <= other.hi_;
}

bool Interval::interior_overlaps(const Interval& other) const {
  if (is_empty() || other.is_empty()) return false;
  return std::max(lo_, other.lo_) < std::min(hi_, other.hi_);
}

bool operator==(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return a.is_empty() && b.is_empty();
  return a.lo_ == b.lo_ && a.hi_ == b.hi_;
}

namespace {
void append_double(std::string& out, double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, res.ptr);
}
}  // namespace

std::string to_string(const Interval& x) {
  if (x.is_empty()) return "EMPTY";
  std::string s = "[";
  append_double(s, x.lo());
  s += ", ";
  append_double(s, x.hi());
  s += "]";
  return s;
}

std::ostream& operator<<(std::ostream& os, const Interval& x) { return os << to_string(x); }

Interval intersect(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  double lo = std::max(a.lo(), b.lo());
  double hi = std::min(a.hi(), b.hi());
  if (lo > hi) return Interval::empty();
  return make_unchecked(lo, hi);
}

Interval hull(const Interval& a, const Interval& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  return make_unchecked(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval add(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  return make_unchecked(add_down(a.lo(), b.lo()), add_up(a.hi(), b.hi()));
}

Interval sub(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  return make_unchecked(sub_down(a.lo(), b.hi()), sub_up(a.hi(), b.lo()));
}

Interval mul(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  const double al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
  double lo = std::min({mul_down(al, bl), mul_down(al, bh), mul_down(ah, bl), mul_down(ah, bh)});
  double hi = std::max({mul_up(al, bl), mul_up(al, bh), mul_up(ah, bl), mul_up(ah, bh)});
  return make_unchecked(lo, hi);
}

Interval div(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  const double al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
  if (bl == 0.0 && bh == 0.0) return Interval::empty();
  if (al == 0.0 && ah == 0.0) return make_unchecked(0.0, 0.0);

  if (bl > 0.0) {
    if (al >= 0.0) return make_unchecked(div_down(al, bh), div_up(ah, bl));
    if (ah <= 0.0) return make_unchecked(div_down(al, bl), div_up(ah, bh));
    return make_unchecked(div_down(al, bl), div_up(ah, bl));
  }
  if (bh < 0.0) {
    if (al >= 0.0) return make_unchecked(div_down(ah, bh), div_up(al, bl));
    if (ah <= 0.0) return make_unchecked(div_down(ah, bl), div_up(al, bh));
    return make_unchecked(div_down(ah, bh), div_up(al, bh));
  }
  // 0 lies in the divisor.
  if (bl < 0.0 && bh > 0.0) return Interval::entire();
  if (bl == 0.0) {  // [0, d]
    if (al >= 0.0) return make_unchecked(div_down(al, bh), kInf);
    if (ah <= 0.0) return make_unchecked(-kInf, div_up(ah, bh));
    return Interval::entire();
  }
  // [c, 0]
  if (al >= 0.0) return make_unchecked(-kInf, div_up(al, bl));
  if (ah <= 0.0) return make_unchecked(div_down(ah, bl), kInf);
  return Interval::entire();
}

Interval neg(const Interval& a) {
  if (a.is_empty()) return a;
  return make_unchecked(-a.hi(), -a.lo());
}

Interval sqr(const Interval& a) {
  if (a.is_empty()) return a;
  const double l = a.lo(), h = a.hi();
  if (l >= 0.0) return make_unchecked(mul_down(l, l), mul_up(h, h));
  if (h <= 0.0) return make_unchecked(mul_down(h, h), mul_up(l, l));
  double m = std::max(-l, h);
  return make_unchecked(0.0, mul_up(m, m));
}

namespace {

// Bounds on x^n for x >= 0 by binary exponentiation; every partial product
// is non-negative so the directed products chain monotonically.
double pow_down_nonneg(double x, int n) {
  double result = 1.0, base = x;
  while (n > 0) {
    if (n & 1) result = mul_down(result, base);
    n >>= 1;
    if (n > 0) base = mul_down(base, base);
  }
  return result;
}

double pow_up_nonneg(double x, int n) {
  double result = 1.0, base = x;
  while (n > 0) {
    if (n & 1) result = mul_up(result, base);
    n >>= 1;
    if (n > 0) base = mul_up(base, base);
  }
  return result;
}

}  // namespace

Interval pow_int(const Interval& a, int n) {
  if (n < 0) throw std::invalid_argument("pow_int: negative exponent");
  if (a.is_empty()) return a;
  if (n == 0) return Interval(1.0);
  if (n == 1) return a;
  if (n == 2) return sqr(a);
  const double l = a.lo(), h = a.hi();
  if (n % 2 == 0) {
    if (l >= 0.0) return make_unchecked(pow_down_nonneg(l, n), pow_up_nonneg(h, n));
    if (h <= 0.0) return make_unchecked(pow_down_nonneg(-h, n), pow_up_nonneg(-l, n));
    return make_unchecked(0.0, pow_up_nonneg(std::max(-l, h), n));
  }
  double lo = l >= 0.0 ? pow_down_nonneg(l, n) : -pow_up_nonneg(-l, n);
  double hi = h >= 0.0 ? pow_up_nonneg(h, n) : -pow_down_nonneg(-h, n);
  return make_unchecked(lo, hi);
}

Interval sqrt(const Interval& a) {
  if (a.is_empty() || a.hi() < 0.0) return Interval::empty();
  double l = std::max(a.lo(), 0.0);
  return make_unchecked(sqrt_down(l), sqrt_up(a.hi()));
}

Interval exp(const Interval& a) {
  if (a.is_empty()) return a;
  double lo = std::max(0.0, nudge_down(std::exp(a.lo())));
  double hi = nudge_up(std::exp(a.hi()));
  return make_unchecked(lo, hi);
}

Interval log(const Interval& a) {
  if (a.is_empty() || a.hi() <= 0.0) return Interval::empty();
  double lo = a.lo() <= 0.0 ? -kInf : nudge_down(std::log(a.lo()));
  double hi = nudge_up(std::log(a.hi()));
  return make_unchecked(lo, hi);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// True when some point phase + 2*k*pi lies in [lo, hi], with a tolerance
// that only ever errs towards reporting a hit.
bool contains_phase(double lo, double hi, double phase) {
  double tol = 1e-12 * std::max({1.0, std::fabs(lo), std::fabs(hi)});
  double k = std::ceil((lo - tol - phase) / kTwoPi);
  double point = phase + k * kTwoPi;
  return point <= hi + tol;
}

template <class F>
Interval periodic_range(const Interval& a, F f, double max_phase, double min_phase) {
  if (a.is_empty()) return a;
  if (!a.is_bounded() || a.hi() - a.lo() >= kTwoPi) return make_unchecked(-1.0, 1.0);
  double v1 = f(a.lo()), v2 = f(a.hi());
  double lo = nudge_down(std::min(v1, v2));
  double hi = nudge_up(std::max(v1, v2));
  if (contains_phase(a.lo(), a.hi(), max_phase)) hi = 1.0;
  if (contains_phase(a.lo(), a.hi(), min_phase)) lo = -1.0;
  return make_unchecked(std::max(lo, -1.0), std::min(hi, 1.0));
}

}  // namespace

Interval sin(const Interval& a) {
  return periodic_range(a, [](double x) { return std::sin(x); }, std::numbers::pi / 2, -std::numbers::pi / 2);
}

Interval cos(const Interval& a) {
  return periodic_range(a, [](double x) { return std::cos(x); }, 0.0, std::numbers::pi);
}

Interval asin(const Interval& a) {
  Interval c = intersect(a, make_unchecked(-1.0, 1.0));
  if (c.is_empty()) return c;
  double half_pi_up = std::nextafter(std::numbers::pi / 2, kInf);
  double lo = std::max(-half_pi_up, nudge_down(std::asin(c.lo())));
  double hi = std::min(half_pi_up, nudge_up(std::asin(c.hi())));
  return make_unchecked(lo, hi);
}

Interval acos(const Interval& a) {
  Interval c = intersect(a, make_unchecked(-1.0, 1.0));
  if (c.is_empty()) return c;
  double pi_up = std::nextafter(std::numbers::pi, kInf);
  double lo = std::max(0.0, nudge_down(std::acos(c.hi())));
  double hi = std::min(pi_up, nudge_up(std::acos(c.lo())));
  return make_unchecked(lo, hi);
}

namespace {

// r with r^n <= v for v >= 0, verified with the directed power bound.
double root_down_nonneg(double v, int n) {
  if (v == 0.0 || std::isinf(v)) return v;
  double r = std::pow(v, 1.0 / n);
  r = std::nextafter(r, -kInf);
  for (int i = 0; i < 64 && pow_up_nonneg(r, n) > v; ++i) r = std::nextafter(r, -kInf);
  while (pow_up_nonneg(r, n) > v) r *= 0.999;
  return std::max(r, 0.0);
}

// r with r^n >= v for v >= 0.
double root_up_nonneg(double v, int n) {
  if (v == 0.0 || std::isinf(v)) return v;
  double r = std::pow(v, 1.0 / n);
  r = std::nextafter(r, kInf);
  for (int i = 0; i < 64 && pow_down_nonneg(r, n) < v; ++i) r = std::nextafter(r, kInf);
  while (pow_down_nonneg(r, n) < v) r *= 1.001;
  return r;
}

}  // namespace

Interval nth_root(const Interval& a, int n) {
  if (n < 1) throw std::invalid_argument("nth_root: n must be >= 1");
  if (a.is_empty()) return a;
  if (n == 1) return a;
  if (n == 2) return sqrt(a);
  if (n % 2 == 0) {
    if (a.hi() < 0.0) return Interval::empty();
    double l = std::max(a.lo(), 0.0);
    return make_unchecked(root_down_nonneg(l, n), root_up_nonneg(a.hi(), n));
  }
  double l = a.lo(), h = a.hi();
  double lo = l >= 0.0 ? root_down_nonneg(l, n) : -root_up_nonneg(-l, n);
  double hi = h >= 0.0 ? root_up_nonneg(h, n) : -root_down_nonneg(-h, n);
  return make_unchecked(lo, hi);
}

}  // namespace innerbox
