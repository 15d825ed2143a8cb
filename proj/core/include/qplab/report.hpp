#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

namespace qplab {

// Outcome of one verifier run: exact acceptance probability when tractable,
// otherwise an estimate with a Hoeffding half width.
struct VerdictReport {
  bool accept = false;
  std::optional<double> p_exact;
  std::optional<double> p_hat;
  long trials = 0;
  double half_width = 0.0;
  std::uint64_t seed = 0;
  std::map<std::string, double> stats;  // intermediate statistics

  nlohmann::json to_json() const;
};

}  // namespace qplab
