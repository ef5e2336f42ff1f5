#include "leobf/state.hpp"

#include <algorithm>

namespace leobf {

TopologyKind topology_kind_from_string(const std::string& name) {
  if (name == "ring") return TopologyKind::kRing;
  if (name == "star") return TopologyKind::kStar;
  if (name == "mesh") return TopologyKind::kMesh;
  if (name == "custom") return TopologyKind::kCustom;
  throw ConfigError("topology.kind must be one of ring|star|mesh|custom");
}

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::kRing: return "ring";
    case TopologyKind::kStar: return "star";
    case TopologyKind::kMesh: return "mesh";
    case TopologyKind::kCustom: return "custom";
  }
  return "?";
}

namespace {

bool is_connected(int n, const std::vector<std::vector<int>>& adj) {
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

}  // namespace

IslTopology build_topology(TopologyKind kind, int n_sats,
                           const std::vector<std::pair<int, int>>& custom_edges) {
  if (n_sats < 2) throw ConfigError("topology: need at least 2 satellites");
  IslTopology topo;
  topo.n_sats = n_sats;
  switch (kind) {
    case TopologyKind::kRing:
      for (int s = 0; s < n_sats; ++s) {
        const int t = (s + 1) % n_sats;
        topo.edges.emplace_back(std::min(s, t), std::max(s, t));
      }
      break;
    case TopologyKind::kStar:
      for (int s = 1; s < n_sats; ++s) topo.edges.emplace_back(0, s);
      break;
    case TopologyKind::kMesh:
      for (int i = 0; i < n_sats; ++i)
        for (int j = i + 1; j < n_sats; ++j) topo.edges.emplace_back(i, j);
      break;
    case TopologyKind::kCustom:
      for (auto [i, j] : custom_edges) {
        if (i == j) throw ConfigError("topology.edges: self-loop");
        if (i < 0 || j < 0 || i >= n_sats || j >= n_sats)
          throw ConfigError("topology.edges: node index out of range");
        topo.edges.emplace_back(std::min(i, j), std::max(i, j));
      }
      break;
  }
  std::sort(topo.edges.begin(), topo.edges.end());
  topo.edges.erase(std::unique(topo.edges.begin(), topo.edges.end()), topo.edges.end());

  topo.neighbors.assign(n_sats, {});
  for (auto [i, j] : topo.edges) {
    topo.neighbors[i].push_back(j);
    topo.neighbors[j].push_back(i);
  }
  for (auto& g : topo.neighbors) std::sort(g.begin(), g.end());
  if (!is_connected(n_sats, topo.neighbors)) throw ConfigError("topology: graph is not connected");
  return topo;
}

ConsensusState ConsensusState::init(int sat, int S, int U, double rho_g,
                                    const std::vector<int>& neighbors) {
  if (!(rho_g > 0.0)) throw ConfigError("rho_g must be positive");
  ConsensusState st;
  st.sat = sat;
  st.S = S;
  st.U = U;
  st.rho_g = rho_g;
  const Eigen::Index cols = static_cast<Eigen::Index>(U) * U;
  st.g_local = MatC::Zero(S, cols);
  st.self_snapshot = MatC::Zero(S, cols);
  st.self_dual = MatC::Zero(S, cols);
  for (int j : neighbors) {
    st.snapshots.emplace(j, MatC::Zero(S, cols));
    st.duals.emplace(j, MatC::Zero(S, cols));
  }
  st.mu = VecC::Zero(U);
  st.nu = VecD::Ones(U);
  return st;
}

void OverheadLedger::reset(int n_sats) {
  per_round.assign(n_sats, 0);
  cumulative.assign(n_sats, 0);
  rounds = 0;
}

void OverheadLedger::add_round(const std::vector<long long>& counts) {
  per_round = counts;
  for (std::size_t s = 0; s < counts.size(); ++s) cumulative[s] += counts[s];
  ++rounds;
}

}  // namespace leobf
