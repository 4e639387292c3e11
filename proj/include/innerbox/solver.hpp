// Pavers: the inner-contractor propagation engine (plain and universally
// quantified constraints), the time-slicing evaluation baseline, and plain
// set inversion by bisection.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "innerbox/box.hpp"
#include "innerbox/config.hpp"
#include "innerbox/expr.hpp"

namespace innerbox {

/// inner: boxes of solutions; outer: boxes free of solutions; undecided:
/// the rest. Inner boxes of a quantified problem carry the full quantifier
/// domain in its slot.
struct Paving {
  BoxSet inner, outer, undecided;

  friend bool operator==(const Paving&, const Paving&) = default;
};

struct SolveStats {
  std::size_t contractor_calls = 0;
  std::size_t globsat_calls = 0;
  /// Boxes sent to outer because the forward contraction tightened the
  /// quantified domain.
  std::size_t guard_hits = 0;
  std::size_t n_inner = 0, n_outer = 0, n_undecided = 0;
  double inner_volume = 0.0;
  /// Seconds until the first inner box; negative when none was found.
  double t_first_s = -1.0;
  double t_total_s = 0.0;
  bool timed_out = false;
  bool stopped_early = false;
};

struct SolveResult {
  Paving paving;
  SolveStats stats;
};

enum class Algorithm { ipabc, jla, sivia };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);

/// Bisection paver over the conjunction (no quantifier allowed).
SolveResult subpaving(const std::vector<Constraint>& constraints, const Box& b, const SolverConfig& cfg);

/// Time-slicing evaluation paver: the quantifier domain is cut into
/// ceil(width / omega) slices; a box is inner once every slice certifies
/// every constraint.
SolveResult jla(const std::vector<Constraint>& constraints, const Box& b, const Quantifier& q,
                const SolverConfig& cfg);

/// Inner contraction for one constraint.
SolveResult ico1(const Constraint& c, const Box& b, const SolverConfig& cfg);
/// Inner contraction for one constraint holding for every value of q.
SolveResult ico2(const Constraint& c, const Box& b, const Quantifier& q, const SolverConfig& cfg);

/// Constraint-by-constraint propagation of inner contractions.
SolveResult ipa(const Problem& p, const SolverConfig& cfg);

/// Dispatches on the algorithm; ipabc is ipa with the configured contractor.
SolveResult solve(const Problem& p, Algorithm algo, const SolverConfig& cfg);

/// Exact check that the paving's boxes lie inside the initial box, have
/// pairwise disjoint interiors and have total volume equal to the initial
/// box. For quantified problems the check runs on the free-variable
/// projection (the quantified slot is dropped).
struct PartitionReport {
  bool inside = true;
  bool disjoint = true;
  bool covers = true;
  std::string detail;
  bool ok() const { return inside && disjoint && covers; }
};

PartitionReport check_partition(const Paving& p, const Box& initial,
                                std::optional<std::size_t> dropped = std::nullopt);

/// Sum of inner-box volumes over the free variables.
double inner_volume(const Paving& p, std::optional<std::size_t> dropped = std::nullopt);

}  // namespace innerbox
