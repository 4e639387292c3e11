#include "innerbox/config.hpp"

#include <cmath>
#include <stdexcept>

namespace innerbox {

void SolverConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be positive");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("omega must be positive");
  if (preparse_samples < 1) throw std::invalid_argument("preparse sample count must be >= 1");
  if (split_arity < 2) throw std::invalid_argument("split arity must be >= 2");
  if (bc3_tolerance < 0.0) throw std::invalid_argument("bc3 tolerance must be >= 0");
  if (!(timeout_s > 0.0)) throw std::invalid_argument("timeout must be positive");
}

std::string to_string(ContractorKind k) { return k == ContractorKind::hc ? "hc" : "bc3"; }

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::simple: return "simple";
    case Strategy::preparse: return "preparse";
    case Strategy::normal: return "normal";
    case Strategy::global: return "global";
  }
  return "normal";
}

std::string to_string(Schedule s) { return s == Schedule::depth_first ? "dfs" : "semi"; }

ContractorKind parse_contractor(const std::string& s) {
  if (s == "hc") return ContractorKind::hc;
  if (s == "bc3") return ContractorKind::bc3;
  throw std::invalid_argument("unknown contractor '" + s + "'");
}

Strategy parse_strategy(const std::string& s) {
  if (s == "simple") return Strategy::simple;
  if (s == "preparse") return Strategy::preparse;
  if (s == "normal") return Strategy::normal;
  if (s == "global") return Strategy::global;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

Schedule parse_schedule(const std::string& s) {
  if (s == "dfs") return Schedule::depth_first;
  if (s == "semi") return Schedule::semi_depth_first;
  throw std::invalid_argument("unknown schedule '" + s + "'");
}

}  // namespace innerbox
