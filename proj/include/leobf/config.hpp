#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leobf/centralized.hpp"
#include "leobf/channel.hpp"
#include "leobf/consensus.hpp"
#include "leobf/geometry.hpp"

namespace leobf {

enum class SolverKind { kCentralized, kDecentralized, kMrt, kZf, kSss };

SolverKind solver_kind_from_string(const std::string& name);
std::string to_string(SolverKind kind);

struct ExperimentConfig {
  GeometryConfig geometry;
  ChannelConfig channel;
  std::string scheduler = "cs";  // cs | rs
  SolverKind solver = SolverKind::kCentralized;
  TopologyKind topology = TopologyKind::kMesh;
  std::vector<std::pair<int, int>> topology_edges;  // custom topologies
  double power_budget_dbm = 50.0;
  int u_max = 8;
  CentralizedOptions centralized;
  DecentralizedOptions decentralized;
  std::string sweep_axis;            // power_dbm | n_antennas | n_sats | n_uts
  std::vector<double> sweep_values;
  int n_drops = 1;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  void validate() const;
  double power_budget_w() const { return dbm_to_watt(power_budget_dbm); }
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);

/// Canonical serialization of everything that determines the outputs; the
/// hash identifies a run in the emitted records.
std::string canonical_config_text(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

/// Applies one sweep-axis value (power_dbm, n_antennas, n_sats, n_uts).
ExperimentConfig apply_axis(const ExperimentConfig& base, const std::string& axis, double value);

}  // namespace leobf
