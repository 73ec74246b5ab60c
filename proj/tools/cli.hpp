#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "proxframe/types.hpp"

namespace proxframe::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsageError = 2 };

struct RunConfig {
  std::string command;
  std::string operator_spec = "example35";
  std::string prox_spec = "soft:1";
  std::string problem_path;
  std::string x_values;
  std::string method = "analysis";
  std::string grid = "-2:2:0.01";
  std::optional<double> tol;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "json";
};

/// Resolves "example35", "identity:d", "random:nxd:seed" or a CSV/JSON path.
Matrix resolve_operator(const std::string& spec);

/// Runs one CLI invocation; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace proxframe::cli
