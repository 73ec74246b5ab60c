#include "proxframe/reports.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace proxframe {

VerifyReport make_report(std::string property, std::size_t trials, double max_violation,
                         double tolerance) {
  VerifyReport r;
  r.property = std::move(property);
  r.trials = trials;
  r.max_violation = max_violation;
  r.tolerance = tolerance;
  r.pass = !std::isnan(max_violation) && max_violation <= tolerance;
  return r;
}

nlohmann::json to_json(const VerifyReport& report) {
  nlohmann::json j;
  j["property"] = report.property;
  j["trials"] = report.trials;
  j["max_violation"] = report.max_violation;
  j["tolerance"] = report.tolerance;
  j["pass"] = report.pass;
  return j;
}

nlohmann::json to_json(const SolveReport& report) {
  nlohmann::json j;
  j["minimizer"] = std::vector<double>(report.minimizer.data(),
                                       report.minimizer.data() + report.minimizer.size());
  if (std::isfinite(report.objective)) {
    j["objective"] = report.objective;
  } else {
    j["objective"] = nullptr;
  }
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  return j;
}

}  // namespace proxframe
