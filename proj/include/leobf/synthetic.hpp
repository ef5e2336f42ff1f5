#pragma once

#include "leobf/rng.hpp"
#include "leobf/scheduling.hpp"
#include "leobf/state.hpp"

namespace leobf {

/// Synthetic O(1)-scale instances for validation suites and property tests.
/// These are not physical scenes; they exercise the solver algebra on
/// well-conditioned random data.

StatisticalCsi make_random_csi(int n_sats, int n_uts, int n_ant, Rng& rng);

/// Random mask with exactly min(u_max, U) served users per satellite.
SchedulingMask make_random_mask(int n_sats, int n_uts, int u_max, Rng& rng);

/// Random consensus state (mu, nu, snapshots, duals) for satellite `sat`
/// with the given neighbor set; scheduler-forced zeros are respected.
ConsensusState make_random_state(int sat, const std::vector<int>& neighbors,
                                 const StatisticalCsi& csi, const SchedulingMask& mask,
                                 double rho_g, Rng& rng);

}  // namespace leobf
