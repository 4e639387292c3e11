// Run artifacts: paving.json, report.csv rows and the SVG projection.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "innerbox/config.hpp"
#include "innerbox/solver.hpp"

namespace innerbox {

struct QuantifierRange {
  std::string var;
  double lo = 0.0, hi = 0.0;

  friend bool operator==(const QuantifierRange&, const QuantifierRange&) = default;
};

struct PavingFile {
  VarNames vars;
  std::optional<QuantifierRange> quantifier;
  Paving paving;
  /// A JSON object, kept as compact text.
  std::string config = "{}";

  friend bool operator==(const PavingFile&, const PavingFile&) = default;
};

/// Doubles are written as shortest round-trip decimals, so parsing the
/// text gives back every bound bit for bit. Non-finite bounds are rejected.
std::string to_json(const PavingFile& f);
/// Throws std::runtime_error on malformed input.
PavingFile paving_from_json(std::string_view text);

PavingFile make_paving_file(const Problem& p, const Paving& paving, const std::string& config_json);

/// Configuration echo written into paving.json.
std::string config_json(const std::string& source, Algorithm algo, const SolverConfig& cfg);

struct RunReport {
  std::string bench;
  std::string algo;
  SolverConfig config;
  SolveStats stats;
};

RunReport make_report(const std::string& bench, Algorithm algo, const SolverConfig& cfg, const SolveStats& stats);

/// Header and rows of report.csv. With `ratio`, a trailing column holds
/// t(jla)/t(ipabc) for rows matching another row on (bench, eps); timed out
/// runs print TIMEOUT in their time columns.
std::string csv_header(bool ratio);
std::vector<std::string> csv_rows(const std::vector<RunReport>& reports, bool ratio);
std::string to_csv(const std::vector<RunReport>& reports, bool ratio);

/// Box shadows on dimensions (x, y): outer light, undecided outlined, inner
/// filled and drawn last.
std::string to_svg(const Paving& p, const Box& frame, std::size_t x, std::size_t y);

/// Writes through a temporary file in the same directory and a rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace innerbox
