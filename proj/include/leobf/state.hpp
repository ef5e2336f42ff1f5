#pragma once

#include <map>
#include <string>
#include <vector>

#include "leobf/types.hpp"

namespace leobf {

enum class TopologyKind { kRing, kStar, kMesh, kCustom };

TopologyKind topology_kind_from_string(const std::string& name);
std::string to_string(TopologyKind kind);

/// Undirected connected ISL graph; neighbor sets G_s are derived from edges.
struct IslTopology {
  int n_sats = 0;
  std::vector<std::pair<int, int>> edges;      // i < j, unique
  std::vector<std::vector<int>> neighbors;     // G_s, ascending

  int degree(int s) const { return static_cast<int>(neighbors[s].size()); }
};

/// Throws ConfigError for self-loops, out-of-range nodes, or a disconnected
/// graph. Ring needs S >= 2; star hub is node 0; mesh is the complete graph.
IslTopology build_topology(TopologyKind kind, int n_sats,
                           const std::vector<std::pair<int, int>>& custom_edges = {});

/// Satellite-local optimizer state for the consensus engine. Tables are laid
/// out like BeamGains: S rows, column u*U + l. Entries g_{i,u,l} stay exactly
/// zero whenever UT l is not scheduled at satellite i; dual rows for the
/// owning satellite itself are unused and stay zero.
struct ConsensusState {
  int sat = -1;
  int S = 0;
  int U = 0;
  double rho_g = 1.0;

  MatC g_local;                  // g^{(s)}
  std::map<int, MatC> snapshots; // g~^{(j)}, j in G_s (self copy kept separately)
  MatC self_snapshot;            // g~^{(s)}: own previous value
  std::map<int, MatC> duals;     // z^{(j)}, j in G_s, row `sat` always zero
  MatC self_dual;                // z^{(s)}

  VecC mu;  // mu^{(s)} per user
  VecD nu;  // nu^{(s)} per user

  int degree() const { return static_cast<int>(snapshots.size()); }
  Eigen::Index pair_col(int u, int l) const { return static_cast<Eigen::Index>(u) * U + l; }

  static ConsensusState init(int sat, int S, int U, double rho_g,
                             const std::vector<int>& neighbors);
};

/// Complex scalars sent per satellite, accumulated per consensus round.
struct OverheadLedger {
  std::vector<long long> per_round;   // latest round, per satellite
  std::vector<long long> cumulative;  // totals, per satellite
  long long rounds = 0;

  void reset(int n_sats);
  void add_round(const std::vector<long long>& counts);
};

}  // namespace leobf
