#include "leobf/rates.hpp"

#include <cmath>

namespace leobf {

double BeamformerSet::power_used(int s) const {
  double acc = 0.0;
  for (const auto& v : w[s]) acc += v.squaredNorm();
  return acc;
}

bool BeamformerSet::power_feasible(double rel_tol) const {
  for (int s = 0; s < num_sats(); ++s)
    if (power_used(s) > power_budget(s) * (1.0 + rel_tol)) return false;
  return true;
}

BeamformerSet BeamformerSet::zeros(int n_sats, int n_uts, int n_ant, const VecD& budget) {
  BeamformerSet bf;
  bf.w.assign(n_sats, std::vector<VecC>(n_uts, VecC::Zero(n_ant)));
  bf.power_budget = budget;
  return bf;
}

BeamGains BeamGains::zeros(int n_sats, int n_uts) {
  BeamGains g;
  g.S = n_sats;
  g.U = n_uts;
  g.flat = MatC::Zero(n_sats, static_cast<Eigen::Index>(n_uts) * n_uts);
  return g;
}

BeamGains compute_beam_gains(const StatisticalCsi& csi, const SchedulingMask& mask,
                             const BeamformerSet& bf) {
  if (mask.num_sats() != csi.S || mask.num_uts() != csi.U || bf.num_sats() != csi.S)
    throw InternalError("compute_beam_gains: shape mismatch");
  BeamGains g = BeamGains::zeros(csi.S, csi.U);
  for (int s = 0; s < csi.S; ++s)
    for (int l = 0; l < csi.U; ++l) {
      if (!mask.is_served(s, l)) continue;  // exact zeros where unscheduled
      const VecC& w = bf.w[s][l];
      if (w.size() != csi.N) throw InternalError("compute_beam_gains: beamformer length != N");
      for (int u = 0; u < csi.U; ++u) g.col(u, l)(s) = transpose_dot(csi.b_at(s, u), w);
    }
  return g;
}

Complex mean_gain(const MatC& gains, const StatisticalCsi& csi, int u) {
  const auto guu = gains.col(gain_col(u, u, csi.U));
  Complex acc(0.0, 0.0);
  for (int s = 0; s < csi.S; ++s) acc += csi.alpha_bar(s, u) * guu(s);
  return acc;
}

double psi_u(const MatC& gains, const StatisticalCsi& csi, int u) {
  const auto guu = gains.col(gain_col(u, u, csi.U));
  double fluctuation = 0.0;
  for (int s = 0; s < csi.S; ++s) fluctuation += csi.beta(s, u) * std::norm(guu(s));
  const MatD t = csi.t_matrix(u);
  double interference = 0.0;
  for (int l = 0; l < csi.U; ++l) {
    if (l == u) continue;
    const VecC gul = gains.col(gain_col(u, l, csi.U));
    interference += quad_form(t, gul, gul).real();
  }
  return fluctuation + interference + csi.noise_power;
}

VecD rate_lower_bound(const MatC& gains, const StatisticalCsi& csi) {
  VecD rates(csi.U);
  for (int u = 0; u < csi.U; ++u) {
    const double signal = std::norm(mean_gain(gains, csi, u));
    rates(u) = std::log2(1.0 + signal / psi_u(gains, csi, u));
  }
  return rates;
}

double sum_rate(const MatC& gains, const StatisticalCsi& csi) {
  return rate_lower_bound(gains, csi).sum();
}

double upsilon_u(const WmmseAux& aux, const MatC& gains, const StatisticalCsi& csi, int u) {
  const Complex t = mean_gain(gains, csi, u);
  return std::norm(1.0 - aux.mu(u) * t) + std::norm(aux.mu(u)) * psi_u(gains, csi, u);
}

double wmmse_objective(const WmmseAux& aux, const MatC& gains, const StatisticalCsi& csi) {
  double acc = 0.0;
  for (int u = 0; u < csi.U; ++u)
    acc += aux.nu(u) * upsilon_u(aux, gains, csi, u) - std::log(aux.nu(u));
  return acc;
}

VecC update_mu(const MatC& gains, const StatisticalCsi& csi) {
  VecC mu(csi.U);
  for (int u = 0; u < csi.U; ++u) {
    const Complex t = mean_gain(gains, csi, u);
    mu(u) = std::conj(t) / (std::norm(t) + psi_u(gains, csi, u));
  }
  return mu;
}

VecD update_nu(const WmmseAux& aux, const MatC& gains, const StatisticalCsi& csi) {
  VecD nu(csi.U);
  for (int u = 0; u < csi.U; ++u) {
    const double ups = upsilon_u(aux, gains, csi, u);
    if (!(ups > 0.0)) throw InternalError("update_nu: degenerate Upsilon (requires sigma^2 > 0)");
    nu(u) = 1.0 / ups;
  }
  return nu;
}

MonteCarloRate monte_carlo_rate(const StatisticalCsi& csi, const SchedulingMask& mask,
                                const BeamformerSet& bf, int n_samples, Rng& rng) {
  if (n_samples < 1) throw ConfigError("monte_carlo_rate: n_samples must be >= 1");
  const BeamGains g = compute_beam_gains(csi, mask, bf);
  VecC mean_coeff(csi.U);
  for (int u = 0; u < csi.U; ++u) mean_coeff(u) = mean_gain(g.flat, csi, u);

  VecD acc = VecD::Zero(csi.U);
  VecD acc2 = VecD::Zero(csi.U);
  // The sampled composite gain has mean alpha_bar*(1+j); dividing the draw by
  // (1+j) aligns it with the hardening decomposition, whose useful
  // coefficient is the real-mean gain sum_s alpha_bar*g.
  const Complex phase(1.0, 1.0);
  for (int n = 0; n < n_samples; ++n) {
    const MatC alpha = sample_instant_alpha(csi, rng);
    for (int u = 0; u < csi.U; ++u) {
      double denom = csi.noise_power;
      for (int l = 0; l < csi.U; ++l) {
        Complex gamma_ul(0.0, 0.0);
        for (int s = 0; s < csi.S; ++s) gamma_ul += (alpha(s, u) / phase) * g.col(u, l)(s);
        if (l == u)
          denom += std::norm(gamma_ul - mean_coeff(u));
        else
          denom += std::norm(gamma_ul);
      }
      const double r = std::log2(1.0 + std::norm(mean_coeff(u)) / denom);
      acc(u) += r;
      acc2(u) += r * r;
    }
  }
  MonteCarloRate out;
  out.n_samples = n_samples;
  out.mean = acc / n_samples;
  out.stderr_ = VecD(csi.U);
  for (int u = 0; u < csi.U; ++u) {
    const double var = std::max(0.0, acc2(u) / n_samples - out.mean(u) * out.mean(u));
    out.stderr_(u) = std::sqrt(var / n_samples);
  }
  return out;
}

}  // namespace leobf
