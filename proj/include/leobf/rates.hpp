#pragma once

#include <vector>

#include "leobf/channel.hpp"
#include "leobf/rng.hpp"
#include "leobf/scheduling.hpp"
#include "leobf/types.hpp"

namespace leobf {

/// Per-satellite beamformers w_{s,u}; unscheduled users hold zero vectors.
struct BeamformerSet {
  std::vector<std::vector<VecC>> w;  // [s][u], each length N
  VecD power_budget;                 // P_s, linear W

  int num_sats() const { return static_cast<int>(w.size()); }
  double power_used(int s) const;
  bool power_feasible(double rel_tol = 1e-9) const;

  static BeamformerSet zeros(int n_sats, int n_uts, int n_ant, const VecD& budget);
};

/// Beam-domain gains g_{u,l} in C^S, entries b^T(theta_{s,u}) delta_{s,l} w_{s,l}.
/// All gain tables in the project share this layout: S rows, column u*U + l.
struct BeamGains {
  int S = 0;
  int U = 0;
  MatC flat;

  auto col(int u, int l) { return flat.col(static_cast<Eigen::Index>(u) * U + l); }
  auto col(int u, int l) const { return flat.col(static_cast<Eigen::Index>(u) * U + l); }

  static BeamGains zeros(int n_sats, int n_uts);
};

inline Eigen::Index gain_col(int u, int l, int n_uts) {
  return static_cast<Eigen::Index>(u) * n_uts + l;
}

struct WmmseAux {
  VecC mu;  // receive scalars
  VecD nu;  // MSE weights, positive
};

BeamGains compute_beam_gains(const StatisticalCsi& csi, const SchedulingMask& mask,
                             const BeamformerSet& bf);

/// Mean useful gain sum_s alpha_bar_{s,u} g_{s,u,u}.
Complex mean_gain(const MatC& gains, const StatisticalCsi& csi, int u);

/// Interference-plus-fluctuation power Psi_u (includes sigma^2).
double psi_u(const MatC& gains, const StatisticalCsi& csi, int u);

/// Hardening-bound rate, bits/s/Hz per user.
VecD rate_lower_bound(const MatC& gains, const StatisticalCsi& csi);

double sum_rate(const MatC& gains, const StatisticalCsi& csi);

double upsilon_u(const WmmseAux& aux, const MatC& gains, const StatisticalCsi& csi, int u);

/// Surrogate objective sum_u (nu_u * Upsilon_u - ln nu_u), natural log.
double wmmse_objective(const WmmseAux& aux, const MatC& gains, const StatisticalCsi& csi);

VecC update_mu(const MatC& gains, const StatisticalCsi& csi);
VecD update_nu(const WmmseAux& aux, const MatC& gains, const StatisticalCsi& csi);

struct MonteCarloRate {
  VecD mean;     // bits/s/Hz per user
  VecD stderr_;  // standard error of the mean
  int n_samples = 0;
};

/// Ergodic-rate estimate under the hardening decomposition: the useful
/// coefficient is the mean gain, fluctuations and cross terms are noise.
MonteCarloRate monte_carlo_rate(const StatisticalCsi& csi, const SchedulingMask& mask,
                                const BeamformerSet& bf, int n_samples, Rng& rng);

}  // namespace leobf
