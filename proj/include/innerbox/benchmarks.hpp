// The benchmark suite: problem builders and independent oracles. Oracles
// use hand-written formulas (no Expr, no contractor) evaluated in exact
// rational arithmetic where a closed form exists (parabola, the circles, the
// polynomial problems), or by interval certification over a grid of the
// quantified domain otherwise.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "innerbox/expr.hpp"

namespace innerbox {

struct Benchmark {
  std::string name;
  Problem problem;
  /// Some constants are not taken from the published description.
  bool reconstructed = false;
  std::string note;
};

const std::vector<std::string>& benchmark_names();

/// Throws std::invalid_argument for an unknown name.
Benchmark build_benchmark(const std::string& name);

enum class Verdict { solution, nonsolution, undecided };

std::string to_string(Verdict v);

/// Decides whether the free-variable point (problem order, quantified
/// variable omitted) satisfies every constraint for every quantifier value.
/// Quantified problems are certified on a grid of `grid_cells` cells of the
/// quantifier domain, each cell refined adaptively when its enclosure
/// straddles zero. Throws std::invalid_argument for a point outside the
/// initial box.
Verdict oracle_eval(const std::string& name, std::span<const double> point, int grid_cells = 4096);

/// Whole-box version: solution when every point of the box is certified,
/// nonsolution when no point is a solution, undecided otherwise. The box
/// has the problem's full dimension; its quantified slot is ignored.
Verdict oracle_box(const std::string& name, const Box& box, int max_depth = 8);

/// Area of the solution region of garloffgraf1 inside the region (default:
/// its initial box), by a 10^6-cell midpoint rule along v of the exact
/// w-extent at each v.
double oracle_area(const std::string& name, std::optional<Box> region = std::nullopt);

/// Closed form of the garloffgraf1 area over its initial box.
double garloffgraf1_area_closed_form();

}  // namespace innerbox
