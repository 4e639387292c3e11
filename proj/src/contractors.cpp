#include "innerbox/contractors.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>

namespace innerbox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kShrinkTolerance = 1e-12;
constexpr int kHcMaxRounds = 64;
constexpr int kBc3MaxSweeps = 16;
constexpr int kSearchBudget = 4000;

Interval operand_value(const Operand& o, const std::vector<Interval>& slots) {
  return o.is_constant() ? o.value : slots[static_cast<std::size_t>(o.slot)];
}

// Narrows an operand to v; false when the operand is refuted.
bool narrow(const Operand& o, const Interval& v, std::vector<Interval>& slots) {
  if (o.is_constant()) return !intersect(o.value, v).is_empty();
  Interval& s = slots[static_cast<std::size_t>(o.slot)];
  s = intersect(s, v);
  return !s.is_empty();
}

// Hull of {x in a : sin x in y}.
Interval sin_preimage(const Interval& a, const Interval& y) {
  Interval yc = intersect(y, Interval(-1.0, 1.0));
  if (yc.is_empty()) return yc;
  if (!a.is_bounded() || a.width() > 8.0 * std::numbers::pi) return a;
  Interval as = asin(yc);
  Interval result = Interval::empty();
  double kmin = std::floor(a.lo() / std::numbers::pi) - 1.0;
  double kmax = std::ceil(a.hi() / std::numbers::pi) + 1.0;
  for (double k = kmin; k <= kmax; k += 1.0) {
    Interval base = Interval(k) * Interval::pi();
    bool even = std::fmod(std::fabs(k), 2.0) == 0.0;
    Interval piece = even ? base + as : base - as;
    result = hull(result, intersect(piece, a));
  }
  return result;
}

// Hull of {x in a : cos x in y}.
Interval cos_preimage(const Interval& a, const Interval& y) {
  Interval yc = intersect(y, Interval(-1.0, 1.0));
  if (yc.is_empty()) return yc;
  if (!a.is_bounded() || a.width() > 8.0 * std::numbers::pi) return a;
  Interval ac = acos(yc);
  Interval two_pi = Interval(2.0) * Interval::pi();
  Interval result = Interval::empty();
  double mmin = std::floor(a.lo() / (2.0 * std::numbers::pi)) - 1.0;
  double mmax = std::ceil(a.hi() / (2.0 * std::numbers::pi)) + 1.0;
  for (double m = mmin; m <= mmax; m += 1.0) {
    Interval base = Interval(m) * two_pi;
    result = hull(result, intersect(base + ac, a));
    result = hull(result, intersect(base - ac, a));
  }
  return result;
}

// Hull of {x in a : x^n in y}.
Interval pow_preimage(const Interval& a, const Interval& y, int n) {
  if (n == 0) return a;
  if (n % 2 == 1) return intersect(a, nth_root(y, n));
  Interval r = nth_root(intersect(y, Interval(0.0, kInf)), n);
  if (r.is_empty()) return r;
  return hull(intersect(a, r), intersect(a, -r));
}

bool shrank(const Interval& before, const Interval& after) {
  double w0 = before.width();
  if (!(w0 > 0.0)) return false;
  if (std::isinf(w0)) return after.width() < w0;
  return w0 - after.width() > kShrinkTolerance * w0;
}

std::int64_t ordinal(double x) {
  auto bits = std::bit_cast<std::int64_t>(x);
  return bits >= 0 ? bits : -(bits & std::numeric_limits<std::int64_t>::max());
}

double from_ordinal(std::int64_t o) {
  if (o >= 0) return std::bit_cast<double>(o);
  return std::bit_cast<double>((-o) | std::numeric_limits<std::int64_t>::min());
}

}  // namespace

std::string to_string(SatVerdict v) {
  switch (v) {
    case SatVerdict::yes: return "TRUE";
    case SatVerdict::no: return "FALSE";
    case SatVerdict::unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

SatVerdict verdict_of(const Interval& f, Relation rel) {
  if (f.is_empty()) return SatVerdict::no;
  if (rel == Relation::leq0) {
    if (f.hi() <= 0.0) return SatVerdict::yes;
    if (f.lo() > 0.0) return SatVerdict::no;
  } else {
    if (f.lo() >= 0.0) return SatVerdict::yes;
    if (f.hi() < 0.0) return SatVerdict::no;
  }
  return SatVerdict::unknown;
}

SatVerdict glob_sat(const Constraint& c, const Box& b) {
  return CompiledConstraint(c, b.size()).glob_sat(b.domains());
}

Box empty_box_like(const Box& like) {
  return Box(like.shared_names(), std::vector<Interval>(like.size(), Interval::empty()));
}

double search_midpoint(const Interval& x) {
  double lo = x.lo(), hi = x.hi();
  double m;
  if (hi - lo > 0x1p-30) {
    m = 0.5 * lo + 0.5 * hi;
  } else {
    std::int64_t a = ordinal(lo), b = ordinal(hi);
    m = from_ordinal(a + (b - a) / 2);
  }
  if (!(m > lo && m < hi)) m = next_float(lo);
  return m;
}

CompiledConstraint::CompiledConstraint(Constraint c, std::size_t n_vars)
    : constraint_(std::move(c)), system_(decompose(constraint_, n_vars)), dependents_(n_vars) {
  std::vector<std::vector<bool>> depends(system_.n_slots, std::vector<bool>(n_vars, false));
  for (std::size_t v = 0; v < n_vars; ++v) depends[v][v] = true;
  for (std::size_t i = 0; i < system_.primitives.size(); ++i) {
    const Primitive& p = system_.primitives[i];
    auto& out = depends[static_cast<std::size_t>(p.out)];
    for (const Operand* o : {&p.a, &p.b}) {
      if (o->is_constant()) continue;
      const auto& in = depends[static_cast<std::size_t>(o->slot)];
      for (std::size_t v = 0; v < n_vars; ++v) out[v] = out[v] || in[v];
    }
    for (std::size_t v = 0; v < n_vars; ++v)
      if (out[v]) dependents_[v].push_back(i);
  }
}

Interval CompiledConstraint::apply(const Primitive& p, const std::vector<Interval>& slots) const {
  Interval a = operand_value(p.a, slots);
  switch (p.op) {
    case Op::add: return a + operand_value(p.b, slots);
    case Op::sub: return a - operand_value(p.b, slots);
    case Op::mul: return a * operand_value(p.b, slots);
    case Op::div: return a / operand_value(p.b, slots);
    case Op::neg: return -a;
    case Op::sqr: return sqr(a);
    case Op::pow: return pow_int(a, p.exponent);
    case Op::sqrt: return sqrt(a);
    case Op::exp: return exp(a);
    case Op::log: return log(a);
    case Op::sin: return sin(a);
    case Op::cos: return cos(a);
    case Op::constant:
    case Op::variable: break;
  }
  throw std::logic_error("primitive with a leaf operator");
}

void CompiledConstraint::forward(std::span<const Interval> domains, std::vector<Interval>& slots) const {
  slots.assign(system_.n_slots, Interval::entire());
  std::copy(domains.begin(), domains.begin() + static_cast<std::ptrdiff_t>(system_.n_vars), slots.begin());
  for (const auto& p : system_.primitives) slots[static_cast<std::size_t>(p.out)] = apply(p, slots);
}

void CompiledConstraint::reforward(std::size_t var, std::vector<Interval>& slots) const {
  for (std::size_t i : dependents_[var]) {
    const Primitive& p = system_.primitives[i];
    slots[static_cast<std::size_t>(p.out)] = apply(p, slots);
  }
}

Interval CompiledConstraint::root_value(const std::vector<Interval>& slots) const {
  return operand_value(system_.root, slots);
}

Interval CompiledConstraint::evaluate(std::span<const Interval> domains) const {
  std::vector<Interval> slots;
  forward(domains, slots);
  return root_value(slots);
}

SatVerdict CompiledConstraint::glob_sat(std::span<const Interval> domains) const {
  std::vector<Interval> slots;
  forward(domains, slots);
  return verdict(slots);
}

SatVerdict CompiledConstraint::verdict(const std::vector<Interval>& slots) const {
  SatVerdict v = verdict_of(root_value(slots), system_.rel);
  if (v != SatVerdict::yes) return v;
  // A certified sign says nothing about points where f is undefined.
  for (const auto& p : system_.primitives) {
    Interval a = operand_value(p.a, slots);
    bool partial = (p.op == Op::sqrt && a.lo() < 0.0) || (p.op == Op::log && a.lo() <= 0.0) ||
                   (p.op == Op::div && operand_value(p.b, slots).contains_zero());
    if (partial) return SatVerdict::unknown;
  }
  return v;
}

bool CompiledConstraint::backward(const Primitive& p, std::vector<Interval>& slots) const {
  const Interval o = slots[static_cast<std::size_t>(p.out)];
  Interval a = operand_value(p.a, slots);
  switch (p.op) {
    case Op::add: {
      if (!narrow(p.a, o - operand_value(p.b, slots), slots)) return false;
      return narrow(p.b, o - operand_value(p.a, slots), slots);
    }
    case Op::sub: {
      if (!narrow(p.a, o + operand_value(p.b, slots), slots)) return false;
      return narrow(p.b, operand_value(p.a, slots) - o, slots);
    }
    case Op::mul: {
      Interval b = operand_value(p.b, slots);
      if (!(o.contains_zero() && b.contains_zero()) && !narrow(p.a, o / b, slots)) return false;
      a = operand_value(p.a, slots);
      if (!(o.contains_zero() && a.contains_zero()) && !narrow(p.b, o / a, slots)) return false;
      return true;
    }
    case Op::div: {
      Interval b = operand_value(p.b, slots);
      if (!narrow(p.a, o * b, slots)) return false;
      a = operand_value(p.a, slots);
      if (!(o.contains_zero() && a.contains_zero()) && !narrow(p.b, a / o, slots)) return false;
      return true;
    }
    case Op::neg: return narrow(p.a, -o, slots);
    case Op::sqr: return narrow(p.a, pow_preimage(a, o, 2), slots);
    case Op::pow: return narrow(p.a, pow_preimage(a, o, p.exponent), slots);
    case Op::sqrt: {
      Interval nonneg = intersect(o, Interval(0.0, kInf));
      if (nonneg.is_empty()) return false;
      return narrow(p.a, sqr(nonneg), slots);
    }
    case Op::exp: return narrow(p.a, log(o), slots);
    case Op::log: return narrow(p.a, exp(o), slots);
    case Op::sin: return narrow(p.a, sin_preimage(a, o), slots);
    case Op::cos: return narrow(p.a, cos_preimage(a, o), slots);
    case Op::constant:
    case Op::variable: break;
  }
  return true;
}

Box CompiledConstraint::hc_contract(const Box& b) const {
  if (b.is_empty()) return b;
  const Interval half = system_.rel == Relation::leq0 ? Interval(-kInf, 0.0) : Interval(0.0, kInf);
  std::vector<Interval> slots(system_.n_slots, Interval::entire());
  std::copy(b.domains().begin(), b.domains().end(), slots.begin());
  for (int round = 0; round < kHcMaxRounds; ++round) {
    std::vector<Interval> before(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(system_.n_vars));
    for (const auto& p : system_.primitives) {
      Interval& out = slots[static_cast<std::size_t>(p.out)];
      out = intersect(out, apply(p, slots));
      if (out.is_empty()) return empty_box_like(b);
    }
    if (!narrow(system_.root, half, slots)) return empty_box_like(b);
    for (auto it = system_.primitives.rbegin(); it != system_.primitives.rend(); ++it)
      if (!backward(*it, slots)) return empty_box_like(b);
    bool progress = false;
    for (std::size_t v = 0; v < system_.n_vars; ++v) progress = progress || shrank(before[v], slots[v]);
    if (!progress) break;
  }
  slots.resize(system_.n_vars);
  return Box(b.shared_names(), std::move(slots));
}

Box CompiledConstraint::bc3_contract(const Box& b, double tolerance) const {
  if (b.is_empty()) return b;
  const Relation rel = system_.rel;
  std::vector<Interval> slots;
  forward(b.domains(), slots);
  SatVerdict whole = verdict(slots);
  if (whole == SatVerdict::no) return empty_box_like(b);
  if (whole == SatVerdict::yes) return b;

  std::vector<Interval> doms = b.domains();

  // Leftmost (or rightmost) point of x that no sub-interval search refutes.
  auto quasi_zero = [&](std::size_t var, Interval x, bool leftmost) -> std::optional<double> {
    // The endpoint slice decides the common case in one evaluation: when it
    // is not refuted, neither is any interval of the search containing it.
    Interval edge = leftmost ? Interval(x.lo(), std::min(x.hi(), next_float(x.lo())))
                             : Interval(std::max(x.lo(), prev_float(x.hi())), x.hi());
    slots[var] = edge;
    reforward(var, slots);
    if (verdict_of(root_value(slots), rel) != SatVerdict::no) return leftmost ? x.lo() : x.hi();
    std::vector<Interval> stack{x};
    int budget = kSearchBudget;
    while (!stack.empty()) {
      Interval piece = stack.back();
      stack.pop_back();
      if (--budget < 0) {
        // Out of budget: the untested remainder bounds the quasi-zero.
        double bound = leftmost ? piece.lo() : piece.hi();
        for (const auto& rest : stack) bound = leftmost ? std::min(bound, rest.lo()) : std::max(bound, rest.hi());
        return bound;
      }
      slots[var] = piece;
      reforward(var, slots);
      SatVerdict v = verdict(slots);
      if (v == SatVerdict::no) continue;
      if (v == SatVerdict::yes || piece.is_canonical() || piece.width() <= tolerance)
        return leftmost ? piece.lo() : piece.hi();
      double m = search_midpoint(piece);
      Interval left(piece.lo(), m), right(m, piece.hi());
      if (leftmost) {
        stack.push_back(right);
        stack.push_back(left);
      } else {
        stack.push_back(left);
        stack.push_back(right);
      }
    }
    return std::nullopt;
  };

  for (int sweep = 0; sweep < kBc3MaxSweeps; ++sweep) {
    bool progress = false;
    for (std::size_t var = 0; var < system_.n_vars; ++var) {
      if (dependents_[var].empty() && !(system_.root.slot == static_cast<int>(var))) continue;
      forward(doms, slots);
      const Interval x = doms[var];
      auto lo = quasi_zero(var, x, true);
      if (!lo) return empty_box_like(b);
      auto hi = quasi_zero(var, Interval(*lo, x.hi()), false);
      if (!hi) return empty_box_like(b);
      Interval narrowed(*lo, *hi);
      progress = progress || shrank(x, narrowed);
      doms[var] = narrowed;
    }
    if (!progress) break;
  }
  return Box(b.shared_names(), std::move(doms));
}

bool CompiledConstraint::refutes_edge(const Box& b, std::size_t var) const {
  if (b.is_empty()) return false;
  const Interval x = b[var];
  if (x.is_canonical()) return false;
  std::vector<Interval> slots;
  forward(b.domains(), slots);
  for (const Interval& edge : {Interval(x.lo(), next_float(x.lo())), Interval(prev_float(x.hi()), x.hi())}) {
    slots[var] = edge;
    reforward(var, slots);
    if (verdict_of(root_value(slots), system_.rel) == SatVerdict::no) return true;
  }
  return false;
}

Box hc_contract(const Constraint& c, const Box& b) { return CompiledConstraint(c, b.size()).hc_contract(b); }

Box bc3_contract(const Constraint& c, const Box& b, double tolerance) {
  return CompiledConstraint(c, b.size()).bc3_contract(b, tolerance);
}

OuterContractor::OuterContractor(Constraint c, std::size_t n_vars, ContractorKind kind, double bc3_tolerance)
    : compiled_(std::move(c), n_vars), kind_(kind), tolerance_(bc3_tolerance) {}

Box OuterContractor::operator()(const Box& b) const {
  return kind_ == ContractorKind::hc ? compiled_.hc_contract(b) : compiled_.bc3_contract(b, tolerance_);
}

}  // namespace innerbox
