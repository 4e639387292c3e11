// Boxes (Cartesian products of intervals over named variables) and the
// box-set algebra used by the pavers: hull, intersection, difference and
// splitting.

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "innerbox/interval.hpp"

namespace innerbox {

using VarNames = std::vector<std::string>;

class Box {
 public:
  Box() = default;
  Box(VarNames names, std::vector<Interval> domains);
  Box(std::shared_ptr<const VarNames> names, std::vector<Interval> domains);

  std::size_t size() const { return domains_.size(); }
  const Interval& operator[](std::size_t i) const { return domains_[i]; }
  Interval& operator[](std::size_t i) { return domains_[i]; }
  const std::vector<Interval>& domains() const { return domains_; }

  const VarNames& names() const { return *names_; }
  const std::shared_ptr<const VarNames>& shared_names() const { return names_; }
  /// Throws std::out_of_range for an unknown variable.
  std::size_t index_of(const std::string& name) const;
  std::optional<std::size_t> find(const std::string& name) const;

  bool is_empty() const;
  /// Largest component width, skipping `exclude` when given.
  double max_width(std::optional<std::size_t> exclude = std::nullopt) const;
  /// Product of widths; 0 for EMPTY.
  double volume() const;
  bool subset_of(const Box& other) const;
  bool interior_overlaps(const Box& other) const;

  friend bool operator==(const Box& a, const Box& b);
  friend bool operator!=(const Box& a, const Box& b) { return !(a == b); }

 private:
  std::shared_ptr<const VarNames> names_ = std::make_shared<const VarNames>();
  std::vector<Interval> domains_;
};

std::string to_string(const Box& b);

using BoxSet = std::vector<Box>;

/// Smallest box containing every member; throws on an empty set or a
/// dimension mismatch. EMPTY members are ignored.
Box hull(const BoxSet& boxes);
Box intersect(const Box& a, const Box& b);

/// Set difference D ⊟ B as up to 2n boxes, sweeping dimensions in order and
/// carving the [lo_D, lo_B] and [hi_B, hi_D] slabs. Slabs share boundary
/// faces with B. Requires B ⊆ D (throws std::invalid_argument otherwise);
/// an EMPTY B yields {D}.
BoxSet box_diff(const Box& outer, const Box& inner);

/// B with the domain of `var` replaced by J.
Box replace_dom(const Box& b, const std::string& var, const Interval& j);
Box replace_dom(const Box& b, std::size_t index, const Interval& j);

enum class SplitPolicy { largest_first, round_robin };

/// Dimension Split would cut, or nullopt when every non-excluded component
/// is canonical. Round-robin scans cyclically from `start`.
std::optional<std::size_t> choose_split_dim(const Box& b, std::optional<std::size_t> exclude,
                                            SplitPolicy policy, std::size_t start = 0);

/// Cut `b` along `dim` into k slices of equal width (fewer when the domain
/// has too few representable points).
std::vector<Box> split_at(const Box& b, std::size_t dim, int k = 2);

/// Split_k: throws std::domain_error when no dimension is splittable.
std::vector<Box> split(const Box& b, int k = 2, std::optional<std::size_t> exclude = std::nullopt,
                       SplitPolicy policy = SplitPolicy::largest_first, std::size_t start = 0);

}  // namespace innerbox
