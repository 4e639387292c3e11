// Three-valued satisfaction test and the two complete narrowing operators:
// hull consistency over the primitive decomposition, and box consistency by
// leftmost/rightmost quasi-zero search.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "innerbox/box.hpp"
#include "innerbox/config.hpp"
#include "innerbox/expr.hpp"

namespace innerbox {

enum class SatVerdict { yes, no, unknown };

std::string to_string(SatVerdict v);

/// yes: every point of the box satisfies c; no: none does.
SatVerdict glob_sat(const Constraint& c, const Box& b);
SatVerdict verdict_of(const Interval& value, Relation rel);

/// A box whose components are all EMPTY, over the names of `like`.
Box empty_box_like(const Box& like);

/// A constraint compiled to a flat primitive system, with per-variable
/// dependency lists so that univariate re-evaluation skips everything that
/// does not depend on the variable being searched.
class CompiledConstraint {
 public:
  CompiledConstraint(Constraint c, std::size_t n_vars);

  const Constraint& constraint() const { return constraint_; }
  const PrimitiveSystem& system() const { return system_; }
  std::size_t n_vars() const { return system_.n_vars; }

  /// Natural extension over the flat system (equal to eval_natural).
  Interval evaluate(std::span<const Interval> domains) const;
  SatVerdict glob_sat(std::span<const Interval> domains) const;

  /// Outputs of primitives, indexed by slot; the variable slots hold the
  /// domains. `forward` fills every slot; `reforward` recomputes only the
  /// primitives depending on variable `var`.
  void forward(std::span<const Interval> domains, std::vector<Interval>& slots) const;
  void reforward(std::size_t var, std::vector<Interval>& slots) const;
  Interval root_value(const std::vector<Interval>& slots) const;

  /// Hull-consistency narrowing; EMPTY result when infeasibility is proven.
  Box hc_contract(const Box& b) const;
  /// Box-consistency narrowing; tolerance 0 searches down to canonical
  /// intervals.
  Box bc3_contract(const Box& b, double tolerance = 0.0) const;
  /// True when the canonical slice at either end of dom(var) is refuted;
  /// box consistency then narrows dom(var) on b and on every sub-box.
  bool refutes_edge(const Box& b, std::size_t var) const;

 private:
  /// Verdict on forwarded slots; TRUE only where f is defined throughout.
  SatVerdict verdict(const std::vector<Interval>& slots) const;

  Constraint constraint_;
  PrimitiveSystem system_;
  std::vector<std::vector<std::size_t>> dependents_;  // per variable: primitive indices

  Interval apply(const Primitive& p, const std::vector<Interval>& slots) const;
  bool backward(const Primitive& p, std::vector<Interval>& slots) const;
};

Box hc_contract(const Constraint& c, const Box& b);
Box bc3_contract(const Constraint& c, const Box& b, double tolerance = 0.0);

/// Narrowing operator bound to one constraint.
class OuterContractor {
 public:
  OuterContractor(Constraint c, std::size_t n_vars, ContractorKind kind, double bc3_tolerance = 0.0);

  Box operator()(const Box& b) const;
  SatVerdict glob_sat(const Box& b) const { return compiled_.glob_sat(b.domains()); }
  ContractorKind kind() const { return kind_; }
  /// Sufficient test that this contractor narrows dom(var) on b.
  bool narrows_edge(const Box& b, std::size_t var) const {
    return kind_ == ContractorKind::bc3 && compiled_.refutes_edge(b, var);
  }
  const Constraint& constraint() const { return compiled_.constraint(); }

 private:
  CompiledConstraint compiled_;
  ContractorKind kind_;
  double tolerance_;
};

/// Midpoint used by the quasi-zero search: arithmetic for wide intervals,
/// the midpoint of the bit-pattern ordinals for tiny ones so that intervals
/// around zero reach canonical width in a bounded number of steps.
double search_midpoint(const Interval& x);

}  // namespace innerbox
