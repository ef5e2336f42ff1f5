#include "leobf/synthetic.hpp"

#include <cmath>

#include "leobf/rates.hpp"

namespace leobf {

StatisticalCsi make_random_csi(int n_sats, int n_uts, int n_ant, Rng& rng) {
  StatisticalCsi csi;
  csi.S = n_sats;
  csi.U = n_uts;
  csi.N = n_ant;
  csi.gamma.resize(n_sats, n_uts);
  csi.kappa.resize(n_sats, n_uts);
  csi.alpha_bar.resize(n_sats, n_uts);
  csi.beta.resize(n_sats, n_uts);
  csi.b.resize(static_cast<std::size_t>(n_sats) * n_uts);
  for (int s = 0; s < n_sats; ++s)
    for (int u = 0; u < n_uts; ++u) {
      csi.gamma(s, u) = rng.uniform(0.2, 2.0);
      csi.kappa(s, u) = rng.uniform(0.5, 20.0);
      const auto [abar, beta] = rician_moments(csi.gamma(s, u), csi.kappa(s, u));
      csi.alpha_bar(s, u) = abar;
      csi.beta(s, u) = beta;
      VecC b(n_ant);
      for (int k = 0; k < n_ant; ++k) b(k) = rng.normal_complex();
      csi.b_at(s, u) = b;
    }
  csi.noise_power = rng.uniform(0.5, 1.5);
  return csi;
}

SchedulingMask make_random_mask(int n_sats, int n_uts, int u_max, Rng& rng) {
  const int take = std::min(u_max, n_uts);
  std::vector<std::vector<int>> served(n_sats);
  for (int s = 0; s < n_sats; ++s) {
    std::vector<int> pool(n_uts);
    for (int u = 0; u < n_uts; ++u) pool[u] = u;
    for (int k = 0; k < take; ++k) {
      const int j = k + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n_uts - k)));
      std::swap(pool[k], pool[j]);
    }
    served[s].assign(pool.begin(), pool.begin() + take);
  }
  return SchedulingMask::from_served(n_uts, std::move(served), u_max);
}

ConsensusState make_random_state(int sat, const std::vector<int>& neighbors,
                                 const StatisticalCsi& csi, const SchedulingMask& mask,
                                 double rho_g, Rng& rng) {
  ConsensusState st = ConsensusState::init(sat, csi.S, csi.U, rho_g, neighbors);
  for (int u = 0; u < csi.U; ++u) {
    st.mu(u) = 0.3 * rng.normal_complex();
    st.nu(u) = rng.uniform(0.5, 3.0);
  }
  const auto fill = [&](MatC& table, bool dual) {
    for (int u = 0; u < csi.U; ++u)
      for (int l = 0; l < csi.U; ++l)
        for (int i = 0; i < csi.S; ++i) {
          if (!mask.is_served(i, l)) continue;  // scheduler-forced zeros
          if (dual && i == sat) continue;       // dual rows for self stay zero
          table(i, gain_col(u, l, csi.U)) = rng.normal_complex();
        }
  };
  fill(st.self_snapshot, false);
  fill(st.self_dual, true);
  for (auto& [j, snap] : st.snapshots) fill(snap, false);
  for (auto& [j, z] : st.duals) fill(z, true);
  st.g_local = st.self_snapshot;
  return st;
}

}  // namespace leobf
