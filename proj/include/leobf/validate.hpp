#pragma once

#include <string>
#include <vector>

namespace leobf {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Invariant suites behind `validate`. Quick mode covers the per-module
/// example checks (< 1 min); full mode adds the Monte-Carlo bound checks and
/// the oracle cross-check suites.
std::vector<CheckResult> run_validation(bool full);

/// True when every elimination matrix Q built with this penalty is positive
/// definite (exercised with mu = 0 states, where only the penalty term keeps
/// Q invertible). rho_g = 0 must make this fail.
bool q_matrix_positive_definite_check(double rho_g);

}  // namespace leobf
