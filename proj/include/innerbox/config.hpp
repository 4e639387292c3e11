#pragma once

#include <cstdint>
#include <string>

namespace innerbox {

enum class ContractorKind { hc, bc3 };

/// Which narrowings the inner operators apply per constraint.
///  - simple:   only the negation is contracted; the constraint itself is
///              checked by evaluation.
///  - preparse: like simple, preceded by evaluation on sample slices of the
///              quantified domain.
///  - normal:   contract both the constraint and its negation.
///  - global:   normal, then filter fresh inner boxes against the remaining
///              constraints by evaluation.
enum class Strategy { simple, preparse, normal, global };

/// depth_first: LIFO worklist, widest dimension split first.
/// semi_depth_first: FIFO worklist, dimensions split round-robin.
enum class Schedule { depth_first, semi_depth_first };

struct SolverConfig {
  double epsilon = 1e-2;  ///< stop splitting once every free width <= epsilon
  double omega = 0.1;     ///< slice width of the quantified domain (JLA)
  ContractorKind contractor = ContractorKind::bc3;
  Strategy strategy = Strategy::normal;
  Schedule schedule = Schedule::depth_first;
  int preparse_samples = 8;
  int split_arity = 2;
  /// BC3 quasi-zero width; 0 means canonical.
  double bc3_tolerance = 0.0;
  bool store_outer = true;
  bool first_only = false;
  double timeout_s = 600.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

std::string to_string(ContractorKind k);
std::string to_string(Strategy s);
std::string to_string(Schedule s);
ContractorKind parse_contractor(const std::string& s);
Strategy parse_strategy(const std::string& s);
Schedule parse_schedule(const std::string& s);

}  // namespace innerbox
