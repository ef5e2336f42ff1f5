#include "leobf/channel.hpp"

#include <cmath>

namespace leobf {

void ArrayConfig::validate() const {
  if (n_h < 1) throw ConfigError("channel.array.n_h must be >= 1");
  if (n_v < 1) throw ConfigError("channel.array.n_v must be >= 1");
  if (!(spacing_over_lambda > 0.0)) throw ConfigError("channel.array.spacing_over_lambda must be positive");
  if (!(carrier_hz > 0.0)) throw ConfigError("channel.array.carrier_hz must be positive");
}

void ChannelConfig::validate() const {
  if (!(f_c_hz > 0.0)) throw ConfigError("channel.f_c_hz must be positive");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("channel.bandwidth_hz must be positive");
  if (kappa_db_max < kappa_db_min) throw ConfigError("channel.kappa_db_range must be non-decreasing");
  array.validate();
}

MatD StatisticalCsi::t_matrix(int u) const {
  const VecD a = alpha_bar.col(u);
  MatD t = a * a.transpose();
  t.diagonal() += beta.col(u);
  return t;
}

void StatisticalCsi::validate() const {
  if (!(noise_power > 0.0)) throw ConfigError("csi.noise_power must be positive");
  for (int s = 0; s < S; ++s)
    for (int u = 0; u < U; ++u) {
      const double g = gamma(s, u);
      const double total = 2.0 * alpha_bar(s, u) * alpha_bar(s, u) + 2.0 * beta(s, u);
      if (std::abs(total - g) > 1e-12 * std::max(1.0, g))
        throw InternalError("csi power identity 2*abar^2 + 2*beta = gamma violated");
    }
}

VecC steering_vector(double az, double el, const ArrayConfig& arr) {
  arr.validate();
  const double ce = std::cos(el);
  const double phi_h = arr.spacing_over_lambda * std::cos(az) * ce;
  const double phi_v = arr.spacing_over_lambda * std::sin(az) * ce;
  VecC a(arr.size());
  for (int k = 0; k < arr.n_h; ++k)
    for (int m = 0; m < arr.n_v; ++m)
      a(k * arr.n_v + m) = std::polar(1.0, -2.0 * kPi * (phi_h * k + phi_v * m));
  return a;
}

double radiation_gain(double off_boresight) {
  if (off_boresight < 0.0 || off_boresight > kPi / 2.0)
    throw std::domain_error("radiation_gain: off-boresight angle outside [0, pi/2]");
  return std::sqrt(3.0 / (2.0 * kPi)) * std::cos(off_boresight);
}

double path_gain(double distance_m, double wavelength_m) {
  const double ratio = wavelength_m / (4.0 * kPi * distance_m);
  return ratio * ratio;
}

std::pair<double, double> rician_moments(double gamma, double kappa) {
  const double beta = gamma / (2.0 * (1.0 + kappa));
  const double alpha_bar = std::sqrt(kappa * gamma / (2.0 * (1.0 + kappa)));
  return {alpha_bar, beta};
}

double noise_power_w(double noise_psd_dbm_hz, double bandwidth_hz, double noise_figure_db) {
  const double dbm = noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
  return dbm_to_watt(dbm);
}

StatisticalCsi build_csi(const SceneGeometry& scene, const AodSet& aods, const ChannelConfig& cfg,
                         Rng& rng) {
  cfg.validate();
  StatisticalCsi csi;
  csi.S = scene.num_sats();
  csi.U = scene.num_uts();
  csi.N = cfg.array.size();
  csi.gamma.resize(csi.S, csi.U);
  csi.kappa.resize(csi.S, csi.U);
  csi.alpha_bar.resize(csi.S, csi.U);
  csi.beta.resize(csi.S, csi.U);
  csi.b.resize(static_cast<std::size_t>(csi.S) * csi.U);
  const double lambda = cfg.wavelength_m();
  for (int s = 0; s < csi.S; ++s) {
    for (int u = 0; u < csi.U; ++u) {
      const double dist_m = (scene.ut_positions[u] - scene.sat_positions[s]).norm() * 1e3;
      csi.gamma(s, u) = path_gain(dist_m, lambda);
      csi.kappa(s, u) = db_to_linear(rng.uniform(cfg.kappa_db_min, cfg.kappa_db_max));
      const auto [abar, beta] = rician_moments(csi.gamma(s, u), csi.kappa(s, u));
      csi.alpha_bar(s, u) = abar;
      csi.beta(s, u) = beta;
      csi.b_at(s, u) = radiation_gain(aods.off_boresight(s, u)) *
                       steering_vector(aods.az(s, u), aods.el(s, u), cfg.array);
    }
  }
  csi.noise_power = noise_power_w(cfg.noise_psd_dbm_hz, cfg.bandwidth_hz, cfg.noise_figure_db);
  return csi;
}

MatC sample_instant_alpha(const StatisticalCsi& csi, Rng& rng) {
  MatC alpha(csi.S, csi.U);
  for (int s = 0; s < csi.S; ++s)
    for (int u = 0; u < csi.U; ++u) {
      const double sd = std::sqrt(csi.beta(s, u));
      alpha(s, u) = Complex(csi.alpha_bar(s, u) + sd * rng.normal(),
                            csi.alpha_bar(s, u) + sd * rng.normal());
    }
  return alpha;
}

}  // namespace leobf
