#pragma once

#include <vector>

namespace leobf {

struct SolveReport {
  int iterations = 0;
  std::vector<double> objective_trace;
  std::vector<double> sum_rate_trace;  // bits/s/Hz
  std::vector<double> residual_trace;  // decentralized runs only
  bool converged = false;
  double wall_time_s = 0.0;
};

}  // namespace leobf
