#pragma once

#include <cstddef>
#include <string>

#include <nlohmann/json.hpp>

#include "proxframe/types.hpp"

namespace proxframe {

/// Outcome of a sampled property check. `max_violation` is the largest
/// amount by which the property failed over all trials (<= 0 means it held
/// with room to spare); `pass` is `max_violation <= tolerance`.
struct VerifyReport {
  std::string property;
  std::size_t trials = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

VerifyReport make_report(std::string property, std::size_t trials, double max_violation,
                         double tolerance);

struct SolveReport {
  Vector minimizer;
  double objective = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool converged = false;
};

nlohmann::json to_json(const VerifyReport& report);
nlohmann::json to_json(const SolveReport& report);

}  // namespace proxframe
