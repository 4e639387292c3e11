// Intervals over MPFR floats with directed rounding. Only the operations the
// oracle residual formulas need; used where double intervals cannot resolve
// a residual a few ulps away from zero.

#pragma once

#include <mpfr.h>

#include <charconv>
#include <string>
#include <utility>

namespace innerbox::detail {

class MpInterval {
 public:
  static constexpr mpfr_prec_t kPrecision = 256;

  MpInterval() { init(); }
  explicit MpInterval(double x) {
    init();
    mpfr_set_d(lo_, x, MPFR_RNDN);
    mpfr_set_d(hi_, x, MPFR_RNDN);
  }
  MpInterval(const MpInterval& o) {
    init();
    mpfr_set(lo_, o.lo_, MPFR_RNDN);
    mpfr_set(hi_, o.hi_, MPFR_RNDN);
  }
  MpInterval(MpInterval&& o) noexcept : MpInterval() { swap(o); }
  MpInterval& operator=(MpInterval o) noexcept {
    swap(o);
    return *this;
  }
  ~MpInterval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  void swap(MpInterval& o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
  }

  /// Encloses the shortest decimal that reads back as x.
  static MpInterval decimal(double x) {
    char buf[64];
    auto end = std::to_chars(buf, buf + sizeof buf - 1, x).ptr;
    *end = '\0';
    MpInterval r;
    mpfr_set_str(r.lo_, buf, 10, MPFR_RNDD);
    mpfr_set_str(r.hi_, buf, 10, MPFR_RNDU);
    return r;
  }

  static MpInterval pi() {
    MpInterval r;
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
  }

  static MpInterval entire() {
    MpInterval r;
    mpfr_set_inf(r.lo_, -1);
    mpfr_set_inf(r.hi_, 1);
    return r;
  }

  /// [lo, hi] of two doubles.
  static MpInterval hull(double lo, double hi) {
    MpInterval r;
    mpfr_set_d(r.lo_, lo, MPFR_RNDN);
    mpfr_set_d(r.hi_, hi, MPFR_RNDN);
    return r;
  }

  int sign_lo() const { return mpfr_sgn(lo_); }
  int sign_hi() const { return mpfr_sgn(hi_); }

  /// Halves at the exact midpoint.
  std::pair<MpInterval, MpInterval> bisect() const {
    MpInterval m;
    mpfr_add(m.lo_, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m.lo_, m.lo_, 1, MPFR_RNDN);
    MpInterval left(*this), right(*this);
    mpfr_set(left.hi_, m.lo_, MPFR_RNDN);
    mpfr_set(right.lo_, m.lo_, MPFR_RNDN);
    return {std::move(left), std::move(right)};
  }

  friend MpInterval operator+(const MpInterval& a, const MpInterval& b) {
    MpInterval r;
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }
  friend MpInterval operator-(const MpInterval& a, const MpInterval& b) {
    MpInterval r;
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }
  friend MpInterval operator-(const MpInterval& a) {
    MpInterval r;
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
  }
  friend MpInterval operator*(const MpInterval& a, const MpInterval& b) {
    MpInterval r, t;
    mpfr_set_inf(r.lo_, 1);
    mpfr_set_inf(r.hi_, -1);
    for (auto x : {a.lo_, a.hi_})
      for (auto y : {b.lo_, b.hi_}) {
        mpfr_mul(t.lo_, x, y, MPFR_RNDD);
        mpfr_mul(t.hi_, x, y, MPFR_RNDU);
        mpfr_min(r.lo_, r.lo_, t.lo_, MPFR_RNDD);
        mpfr_max(r.hi_, r.hi_, t.hi_, MPFR_RNDU);
      }
    return r;
  }
  friend MpInterval operator/(const MpInterval& a, const MpInterval& b) {
    if (b.sign_lo() <= 0 && b.sign_hi() >= 0) return entire();
    MpInterval inv;
    mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
    mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
    return a * inv;
  }

  friend MpInterval sq(const MpInterval& a) {
    if (a.sign_lo() >= 0) return a * a;
    if (a.sign_hi() <= 0) return (-a) * (-a);
    MpInterval r;
    mpfr_set_zero(r.lo_, 1);
    mpfr_sqr(r.hi_, mpfr_cmpabs(a.lo_, a.hi_) > 0 ? a.lo_ : a.hi_, MPFR_RNDU);
    return r;
  }

  friend MpInterval sqrt(const MpInterval& a) {
    MpInterval r;
    if (a.sign_lo() <= 0) mpfr_set_zero(r.lo_, 1);
    else mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
    if (a.sign_hi() <= 0) mpfr_set_zero(r.hi_, 1);
    else mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
    return r;
  }

  // sin peaks at 2k pi + pi/2, bottoms at 2k pi - pi/2; cos is sin shifted
  // by a quarter turn. A peak is assumed whenever the enclosed preimage of
  // the turn count contains an integer.
  friend MpInterval sin(const MpInterval& a) { return trig(a, mpfr_sin, 0.25); }
  friend MpInterval cos(const MpInterval& a) { return trig(a, mpfr_cos, 0.0); }

 private:
  void init() {
    mpfr_init2(lo_, kPrecision);
    mpfr_init2(hi_, kPrecision);
  }

  static bool may_hold_integer(const MpInterval& turns) {
    MpInterval f;
    mpfr_floor(f.hi_, turns.hi_);
    return mpfr_cmp(f.hi_, turns.lo_) >= 0;
  }

  // quarter: turn offset of the peak (sin: 1/4, cos: 0).
  static MpInterval trig(const MpInterval& a, int (*fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t), double quarter) {
    MpInterval two_pi = pi() + pi();
    MpInterval turns = a / two_pi;
    MpInterval peak = turns - MpInterval(quarter), trough = turns - MpInterval(quarter + 0.5);
    MpInterval r, t;
    fn(r.lo_, a.lo_, MPFR_RNDD);
    fn(t.lo_, a.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t.lo_, MPFR_RNDD);
    fn(r.hi_, a.lo_, MPFR_RNDU);
    fn(t.hi_, a.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t.hi_, MPFR_RNDU);
    if (may_hold_integer(peak)) mpfr_set_si(r.hi_, 1, MPFR_RNDN);
    if (may_hold_integer(trough)) mpfr_set_si(r.lo_, -1, MPFR_RNDN);
    return r;
  }

  mpfr_t lo_, hi_;
};

}  // namespace innerbox::detail
