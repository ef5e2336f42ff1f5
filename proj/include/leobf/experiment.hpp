#pragma once

#include <optional>
#include <string>
#include <vector>

#include "leobf/config.hpp"
#include "leobf/rates.hpp"
#include "leobf/report.hpp"

namespace leobf {

/// Everything one drop needs: scene, CSI, scheduling mask, power budgets.
struct DropContext {
  SceneGeometry scene;
  AodSet aods;
  StatisticalCsi csi;
  SchedulingMask mask;
  VecD p;
};

/// Deterministic per-drop scene assembly; axis_index separates RNG streams
/// between sweep points.
DropContext build_drop(const ExperimentConfig& cfg, int drop, int axis_index = 0);

struct DropResult {
  bool ok = false;
  std::string error;
  double final_sum_rate = 0.0;
  SolveReport report;
  std::vector<long long> overhead_cum_per_sat;  // per trace row x per satellite
  long long overhead_total = 0;
  int n_sats = 0;
};

/// Runs the configured solver on one drop (no file output).
DropResult run_drop(const ExperimentConfig& cfg, int drop, int axis_index = 0);

struct RunRecord {
  std::string config_hash;
  std::uint64_t seed = 0;
  int drop = 0;
  std::string solver;
  std::string topology;
  bool ok = false;
  double final_sum_rate = 0.0;
  int iterations = 0;
  std::string trace_path;
  long long overhead_total = 0;
  double wall_time_s = 0.0;
  std::string error;
};

/// `simulate`: one trace CSV per drop plus summary.csv and records.json in
/// out_dir. Returns the process exit code (non-zero when every drop failed).
int cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir);

/// `sweep`: per-(axis value, drop) runs aggregated into sweep.csv.
int cmd_sweep(const ExperimentConfig& cfg, const std::string& axis,
              const std::vector<double>& values, const std::string& out_dir);

std::vector<std::string> trace_header(int n_sats);

}  // namespace leobf
