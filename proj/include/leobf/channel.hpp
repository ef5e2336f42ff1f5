#pragma once

#include <utility>
#include <vector>

#include "leobf/geometry.hpp"
#include "leobf/rng.hpp"
#include "leobf/types.hpp"

namespace leobf {

struct ArrayConfig {
  int n_h = 4;
  int n_v = 4;
  double spacing_over_lambda = 0.5;  // d / lambda
  double carrier_hz = 5e9;

  int size() const { return n_h * n_v; }
  void validate() const;
};

struct ChannelConfig {
  double f_c_hz = 5e9;
  double bandwidth_hz = 20e6;
  double noise_figure_db = 10.0;
  double noise_psd_dbm_hz = -173.855;
  double kappa_db_min = 15.0;
  double kappa_db_max = 20.0;
  ArrayConfig array;

  void validate() const;
  double wavelength_m() const { return kSpeedOfLight / f_c_hz; }
};

/// Per-link statistical CSI: the only channel knowledge the optimizers see.
struct StatisticalCsi {
  int S = 0;
  int U = 0;
  int N = 0;
  MatD gamma;      // mean power, linear
  MatD kappa;      // Rician factor, linear
  MatD alpha_bar;  // per-component LOS mean
  MatD beta;       // per-component scatter variance
  std::vector<VecC> b;  // effective array response G*a, indexed s*U + u
  double noise_power = 0.0;  // sigma^2, W

  const VecC& b_at(int s, int u) const { return b[static_cast<std::size_t>(s) * U + u]; }
  VecC& b_at(int s, int u) { return b[static_cast<std::size_t>(s) * U + u]; }

  /// Inter-satellite gain correlation T_u = abar*abar^T + diag(beta).
  MatD t_matrix(int u) const;

  void validate() const;
};

/// Kronecker phase-ramp steering vector; entry k*n_v + m is
/// exp(-j*2*pi*(phi_h*k + phi_v*m)) with phi_h = (d/lambda)*cos(az)*cos(el),
/// phi_v = (d/lambda)*sin(az)*cos(el). All entries unit modulus.
VecC steering_vector(double az, double el, const ArrayConfig& arr);

/// Amplitude pattern sqrt(3/(2*pi))*cos(theta); theta is off-boresight.
double radiation_gain(double off_boresight);

/// Free-space path gain (lambda / (4*pi*d))^2, both arguments in meters.
double path_gain(double distance_m, double wavelength_m);

/// (alpha_bar, beta) from mean power gamma and Rician factor kappa (linear).
std::pair<double, double> rician_moments(double gamma, double kappa);

double noise_power_w(double noise_psd_dbm_hz, double bandwidth_hz, double noise_figure_db);

/// Assembles CSI for a scene: FSPL gains, per-link kappa drawn uniformly in
/// [kappa_db_min, kappa_db_max] dB, effective responses from the AoDs.
StatisticalCsi build_csi(const SceneGeometry& scene, const AodSet& aods, const ChannelConfig& cfg,
                         Rng& rng);

/// One instantaneous draw of the composite gains alpha_{s,u}: real and
/// imaginary parts independent N(alpha_bar, beta). h_{s,u} = alpha * b.
MatC sample_instant_alpha(const StatisticalCsi& csi, Rng& rng);

}  // namespace leobf
