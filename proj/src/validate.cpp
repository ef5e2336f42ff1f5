#include "leobf/validate.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "leobf/baselines.hpp"
#include "leobf/centralized.hpp"
#include "leobf/consensus.hpp"
#include "leobf/experiment.hpp"
#include "leobf/oracles.hpp"
#include "leobf/synthetic.hpp"

namespace leobf {

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool cond, const std::string& msg) {
  if (!cond) throw CheckFailure(msg);
}

void expect_near(double got, double want, double tol, const std::string& what) {
  if (!(std::abs(got - want) <= tol)) {
    std::ostringstream os;
    os << what << ": got " << got << ", want " << want << " (tol " << tol << ")";
    throw CheckFailure(os.str());
  }
}

struct Harness {
  std::vector<CheckResult> results;

  void check(const std::string& name, const std::function<void()>& body) {
    CheckResult r;
    r.name = name;
    try {
      body();
      r.pass = true;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = e.what();
    }
    results.push_back(r);
  }
};

GeometryConfig table_defaults() { return GeometryConfig{}; }

ChannelConfig channel_defaults() { return ChannelConfig{}; }

// Quantile of the chi-square distribution via the Wilson-Hilferty cube
// approximation; plenty for a p = 0.01 acceptance threshold.
double chi2_quantile(double dof, double z) {
  const double t = 2.0 / (9.0 * dof);
  const double c = 1.0 - t + z * std::sqrt(t);
  return dof * c * c * c;
}

DropContext small_drop(int s_count, int u_count, int n_h, int n_v, int u_max,
                       std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.geometry.serving_count = s_count;
  cfg.geometry.ut_count = u_count;
  cfg.channel.array.n_h = n_h;
  cfg.channel.array.n_v = n_v;
  cfg.u_max = u_max;
  cfg.seed = seed;
  return build_drop(cfg, 0);
}

// ---------------------------------------------------------------- geometry

void register_geometry(Harness& h) {
  h.check("walker_delta.equatorial_symmetry", [] {
    GeometryConfig cfg = table_defaults();
    cfg.planes = 1;
    cfg.sats_per_plane = 4;
    cfg.inclination_deg = 0.0;
    cfg.serving_count = 1;
    const auto c = build_walker_delta(cfg);
    expect(c.positions.size() == 4, "want 4 satellites");
    for (int k = 0; k < 4; ++k) {
      const double lon = std::atan2(c.positions[k].y(), c.positions[k].x());
      expect_near(lon, kPi / 2.0 * k > kPi ? kPi / 2.0 * k - 2 * kPi : kPi / 2.0 * k, 1e-12,
                  "equatorial longitude");
      expect_near(c.positions[k].z(), 0.0, 1e-9, "equatorial z");
    }
  });
  h.check("walker_delta.table1_counts_radii", [] {
    const GeometryConfig cfg = table_defaults();
    const auto c = build_walker_delta(cfg);
    expect(c.positions.size() == 1680, "want 28*60 satellites");
    for (const auto& p : c.positions)
      expect_near(p.norm(), 6921.0, 6921.0 * 1e-9, "orbit radius km");
  });
  h.check("walker_delta.in_plane_spacing", [] {
    GeometryConfig cfg = table_defaults();
    cfg.planes = 3;
    cfg.sats_per_plane = 7;
    const auto c = build_walker_delta(cfg);
    for (int k = 0; k < 6; ++k) {
      const double cosang = c.positions[k].normalized().dot(c.positions[k + 1].normalized());
      expect_near(std::acos(std::clamp(cosang, -1.0, 1.0)), 2.0 * kPi / 7.0, 1e-9,
                  "in-plane angular spacing");
    }
  });
  h.check("walker_delta.deterministic", [] {
    const GeometryConfig cfg = table_defaults();
    const auto a = build_walker_delta(cfg);
    const auto b = build_walker_delta(cfg);
    for (std::size_t i = 0; i < a.positions.size(); ++i)
      expect(a.positions[i] == b.positions[i], "bit-identical positions");
  });
  h.check("drop_uts.degenerate_cap_and_determinism", [] {
    GeometryConfig cfg = table_defaults();
    cfg.region_radius_km = 1e-9;
    cfg.ut_count = 5;
    Rng r1(3), r2(3);
    const auto a = drop_uts(cfg, r1);
    const auto b = drop_uts(cfg, r2);
    const Vec3 center = latlon_to_ecef(cfg.region_center_lat_deg, cfg.region_center_lon_deg,
                                       cfg.earth_radius_km);
    for (int i = 0; i < 5; ++i) {
      expect((a[i] - center).norm() < 1e-3, "UTs at cap center for degenerate radius");
      expect(a[i] == b[i], "same seed gives identical drop");
    }
  });
  h.check("select_serving.all_and_tie_rule", [] {
    // Hand-built cluster above the region so every satellite is visible.
    GeometryConfig cfg = table_defaults();
    cfg.planes = 1;
    cfg.sats_per_plane = 8;
    cfg.serving_count = 8;
    cfg.region_center_lat_deg = 0.0;
    cfg.region_center_lon_deg = 0.0;
    Constellation cluster;
    const double r = cfg.earth_radius_km + cfg.altitude_km;
    for (int k = 0; k < 8; ++k) {
      const double lon = deg2rad(-3.5 + k);  // within a few degrees of the center
      cluster.positions.push_back(r * Vec3(std::cos(lon), std::sin(lon), 0.0));
      cluster.velocity_dirs.push_back(Vec3(-std::sin(lon), std::cos(lon), 0.0));
    }
    Rng rng(1);
    const auto uts = drop_uts(cfg, rng);
    const auto all = select_serving_sats(cfg, cluster, uts);
    expect(all.num_sats() == 8, "S = total selects everything");

    // Two equidistant satellites, one slot: the smaller index wins.
    cfg.serving_count = 1;
    cfg.planes = 1;
    cfg.sats_per_plane = 8;
    Constellation tie = cluster;
    tie.positions[3] = r * Vec3(std::cos(deg2rad(2.0)), std::sin(deg2rad(2.0)), 0.0);
    tie.positions[7] = r * Vec3(std::cos(deg2rad(-2.0)), std::sin(deg2rad(-2.0)), 0.0);
    for (int k = 0; k < 8; ++k)
      if (k != 3 && k != 7)
        tie.positions[k] =
            r * Vec3(std::cos(deg2rad(10.0 + k)), std::sin(deg2rad(10.0 + k)), 0.0);
    const auto one = select_serving_sats(cfg, tie, uts);
    expect((one.sat_positions[0] - tie.positions[3]).norm() < 1e-9,
           "equidistant tie resolved to the lower index");
  });
  h.check("select_serving.table1_elevations", [] {
    const DropContext ctx = small_drop(5, 4, 2, 2, 4, 11);
    const GeometryConfig cfg = table_defaults();
    const Vec3 center = latlon_to_ecef(cfg.region_center_lat_deg, cfg.region_center_lon_deg,
                                       cfg.earth_radius_km);
    expect(ctx.scene.num_sats() == 5, "five serving satellites");
    for (int s = 0; s < 5; ++s)
      expect(elevation_angle(center, ctx.scene.sat_positions[s]) > kMinVisibilityElevationRad,
             "serving satellite above 10 deg at region center");
  });
  h.check("local_frames.orthonormal_right_handed", [] {
    const DropContext ctx = small_drop(5, 4, 2, 2, 4, 12);
    for (const auto& f : ctx.scene.local_frames) {
      expect((f.transpose() * f - Mat3::Identity()).norm() < 1e-9, "orthonormal frame");
      expect_near(f.determinant(), 1.0, 1e-9, "right-handed frame");
    }
  });
  h.check("aod.nadir_and_roundtrip", [] {
    const DropContext ctx = small_drop(4, 6, 2, 2, 4, 13);
    const AodSet aods = compute_aods(ctx.scene);
    for (int s = 0; s < 4; ++s)
      for (int u = 0; u < 6; ++u) {
        expect_near(aods.off_boresight(s, u), kPi / 2.0 - aods.el(s, u), 1e-15,
                    "off-boresight identity");
        // reconstruct the unit direction from (az, el) in the local frame
        const double az = aods.az(s, u), el = aods.el(s, u);
        const Vec3 local(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
        const Vec3 dir = ctx.scene.local_frames[s] * local;
        const Vec3 want = (ctx.scene.ut_positions[u] - ctx.scene.sat_positions[s]).normalized();
        expect((dir - want).norm() < 1e-12, "aod roundtrip to 1e-12");
      }
  });
  h.check("geometry.invalid_config_errors", [] {
    GeometryConfig cfg = table_defaults();
    cfg.altitude_km = -1.0;
    try {
      build_walker_delta(cfg);
      throw CheckFailure("negative altitude accepted");
    } catch (const ConfigError& e) {
      expect(std::string(e.what()).find("altitude_km") != std::string::npos,
             "error names the offending field");
    }
  });
}

// ----------------------------------------------------------------- channel

void register_channel(Harness& h) {
  h.check("steering.boresight_all_ones", [] {
    ArrayConfig arr;
    const VecC a = steering_vector(0.7, kPi / 2.0, arr);
    for (int i = 0; i < arr.size(); ++i)
      expect(std::abs(a(i) - Complex(1.0, 0.0)) < 1e-12, "all-ones at boresight");
  });
  h.check("steering.two_element_line", [] {
    ArrayConfig arr;
    arr.n_h = 2;
    arr.n_v = 1;
    const VecC a = steering_vector(0.0, 0.0, arr);
    expect(std::abs(a(0) - Complex(1, 0)) < 1e-12 && std::abs(a(1) - Complex(-1, 0)) < 1e-12,
           "[1, -1] for az=0, el=0, d/lambda=1/2");
  });
  h.check("steering.unit_norm", [] {
    Rng rng(5);
    ArrayConfig arr;
    arr.n_h = 3;
    arr.n_v = 5;
    for (int i = 0; i < 20; ++i) {
      const VecC a = steering_vector(rng.uniform(-kPi, kPi), rng.uniform(0.0, kPi / 2), arr);
      expect_near(a.squaredNorm(), 15.0, 1e-9, "||a||^2 = N");
    }
  });
  h.check("radiation_gain.values_and_domain", [] {
    expect_near(radiation_gain(0.0), std::sqrt(3.0 / (2.0 * kPi)), 1e-12, "peak gain");
    expect_near(radiation_gain(0.0), 0.6910, 5e-5, "peak gain approx 0.6910");
    expect_near(radiation_gain(kPi / 2.0), 0.0, 1e-12, "zero at horizon");
    expect_near(radiation_gain(kPi / 3.0), 0.5 * std::sqrt(3.0 / (2.0 * kPi)), 1e-12,
                "half peak at 60 deg");
    try {
      radiation_gain(-0.1);
      throw CheckFailure("negative angle accepted");
    } catch (const std::domain_error&) {
    }
  });
  h.check("path_gain.fspl_values", [] {
    const double lambda = kSpeedOfLight / 5e9;
    const double g = path_gain(550e3, lambda);
    expect_near(g, 7.526e-17, 7.526e-17 * 1e-3, "FSPL at 550 km, 5 GHz");
    expect_near(path_gain(1100e3, lambda), g / 4.0, g * 1e-12, "doubling distance quarters gain");
    expect_near(path_gain(550e3, 2.0 * lambda), 4.0 * g, g * 1e-9, "doubling wavelength x4");
  });
  h.check("rician.moments", [] {
    auto [a0, b0] = rician_moments(1.0, 1.0);
    expect_near(a0, 0.5, 1e-15, "alpha_bar at gamma=kappa=1");
    expect_near(b0, 0.25, 1e-15, "beta at gamma=kappa=1");
    auto [a1, b1] = rician_moments(1.0, 0.0);
    expect(a1 == 0.0, "Rayleigh limit alpha_bar");
    expect_near(b1, 0.5, 1e-15, "Rayleigh limit beta");
    auto [a2, b2] = rician_moments(3.0, 1e12);
    expect_near(a2, std::sqrt(1.5), 1e-6, "LOS limit alpha_bar");
    expect(b2 < 2e-12, "LOS limit beta -> 0");
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
      const double g = rng.uniform(1e-18, 2.0);
      const double k = rng.uniform(0.0, 200.0);
      auto [ab, bb] = rician_moments(g, k);
      expect_near(2 * ab * ab + 2 * bb, g, g * 1e-12, "power identity 2a^2+2b = gamma");
    }
  });
  h.check("t_matrix.formula_and_psd", [] {
    StatisticalCsi csi;
    csi.S = 2;
    csi.U = 1;
    csi.alpha_bar.resize(2, 1);
    csi.beta.resize(2, 1);
    csi.alpha_bar << 1.0, 2.0;
    csi.beta << 0.1, 0.2;
    const MatD t = csi.t_matrix(0);
    expect_near(t(0, 0), 1.1, 1e-15, "T(0,0)");
    expect_near(t(0, 1), 2.0, 1e-15, "T(0,1)");
    expect_near(t(1, 0), 2.0, 1e-15, "T(1,0)");
    expect_near(t(1, 1), 4.2, 1e-15, "T(1,1)");
    Rng rng(6);
    StatisticalCsi r = make_random_csi(5, 3, 2, rng);
    for (int u = 0; u < 3; ++u) {
      Eigen::SelfAdjointEigenSolver<MatD> es(r.t_matrix(u));
      expect(es.eigenvalues().minCoeff() >= -1e-12, "T_u PSD");
    }
    // beta = 0 gives the rank-1 outer product
    StatisticalCsi los = r;
    los.beta.setZero();
    Eigen::SelfAdjointEigenSolver<MatD> es(los.t_matrix(0));
    int positive = 0;
    for (int i = 0; i < 5; ++i) positive += es.eigenvalues()(i) > 1e-12;
    expect(positive == 1, "beta=0 makes T rank one");
  });
  h.check("noise_power.table1", [] {
    const double sigma2 = noise_power_w(-173.855, 20e6, 10.0);
    expect_near(sigma2, 8.233e-13, 8.233e-13 * 1e-3, "sigma^2 for Table-I numbers");
    expect_near(noise_power_w(-173.855, 1.0, 0.0), dbm_to_watt(-173.855), 1e-25, "F=0, B=1");
    expect_near(noise_power_w(-173.855, 40e6, 10.0), 2.0 * sigma2, sigma2 * 1e-9,
                "doubling B doubles sigma^2");
  });
  h.check("sample_alpha.beta_zero_deterministic", [] {
    Rng rng(9);
    StatisticalCsi csi = make_random_csi(2, 2, 2, rng);
    csi.beta.setZero();
    Rng s(10);
    const MatC alpha = sample_instant_alpha(csi, s);
    for (int i = 0; i < 2; ++i)
      for (int u = 0; u < 2; ++u)
        expect(std::abs(alpha(i, u) - csi.alpha_bar(i, u) * Complex(1, 1)) == 0.0,
               "alpha = alpha_bar(1+j) exactly when beta = 0");
  });
}

// ------------------------------------------------------------ rate metrics

void register_rates(Harness& h) {
  h.check("gains.zero_and_scalar_case", [] {
    Rng rng(14);
    StatisticalCsi csi = make_random_csi(1, 1, 1, rng);
    csi.b_at(0, 0) = VecC::Constant(1, Complex(2.0, 0.0));
    SchedulingMask mask = SchedulingMask::from_served(1, {{0}}, 1);
    BeamformerSet bf = BeamformerSet::zeros(1, 1, 1, VecD::Constant(1, 100.0));
    bf.w[0][0](0) = Complex(3.0, 0.0);
    const BeamGains g = compute_beam_gains(csi, mask, bf);
    expect(std::abs(g.col(0, 0)(0) - Complex(6.0, 0.0)) == 0.0, "b=2, w=3 gives g=6");
    bf.w[0][0].setZero();
    expect(compute_beam_gains(csi, mask, bf).flat.cwiseAbs().maxCoeff() == 0.0, "W=0 -> g=0");
  });
  h.check("rate.trivial_values", [] {
    Rng rng(15);
    StatisticalCsi csi = make_random_csi(1, 1, 1, rng);
    csi.alpha_bar(0, 0) = 1.0;
    csi.beta(0, 0) = 0.0;
    csi.noise_power = 1.0;
    MatC gains = MatC::Zero(1, 1);
    expect(rate_lower_bound(gains, csi)(0) == 0.0, "zero gains give zero rate");
    gains(0, 0) = Complex(1.0, 0.0);
    expect_near(rate_lower_bound(gains, csi)(0), 1.0, 1e-15, "log2(2) = 1");
  });
  h.check("wmmse.hand_arithmetic", [] {
    Rng rng(16);
    StatisticalCsi csi = make_random_csi(1, 1, 1, rng);
    csi.alpha_bar(0, 0) = 1.0;
    csi.beta(0, 0) = 0.0;
    csi.noise_power = 1.0;
    MatC gains(1, 1);
    gains(0, 0) = Complex(1.0, 0.0);
    const VecC mu = update_mu(gains, csi);
    expect(std::abs(mu(0) - Complex(0.5, 0.0)) < 1e-15, "mu = 1/2");
    WmmseAux aux{mu, VecD::Ones(1)};
    expect_near(upsilon_u(aux, gains, csi, 0), 0.5, 1e-15, "Upsilon = 1/2");
    const VecD nu = update_nu(aux, gains, csi);
    expect_near(nu(0), 2.0, 1e-15, "nu = 2");
    // mu = 0, nu = 1 gives objective U
    WmmseAux zero{VecC::Zero(1), VecD::Ones(1)};
    expect_near(wmmse_objective(zero, gains, csi), 1.0, 1e-15, "objective = U at mu=0, nu=1");
  });
  h.check("wmmse.mu_stationarity_fd", [] {
    Rng rng(17);
    const StatisticalCsi csi = make_random_csi(3, 3, 2, rng);
    const SchedulingMask mask = make_random_mask(3, 3, 2, rng);
    MatC gains = MatC::Zero(3, 9);
    for (int u = 0; u < 3; ++u)
      for (int l = 0; l < 3; ++l)
        for (int s = 0; s < 3; ++s)
          if (mask.is_served(s, l)) gains(s, gain_col(u, l, 3)) = rng.normal_complex();
    const VecC mu = update_mu(gains, csi);
    for (int u = 0; u < 3; ++u) {
      const auto ups = [&](Complex m) {
        WmmseAux aux{VecC::Constant(3, Complex(0, 0)), VecD::Ones(3)};
        aux.mu(u) = m;
        return upsilon_u(aux, gains, csi, u);
      };
      const double eps = 1e-6;
      const double dre = (ups(mu(u) + eps) - ups(mu(u) - eps)) / (2 * eps);
      const double dim =
          (ups(mu(u) + Complex(0, eps)) - ups(mu(u) - Complex(0, eps))) / (2 * eps);
      expect(std::abs(dre) < 1e-8 && std::abs(dim) < 1e-8, "dUpsilon/dmu = 0 at update_mu");
    }
  });
  h.check("wmmse.identity_and_monotone_updates", [] {
    Rng rng(18);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const StatisticalCsi csi = make_random_csi(2, 3, 2, rng);
      MatC gains(2, 9);
      for (int i = 0; i < gains.size(); ++i) gains.data()[i] = rng.normal_complex();
      WmmseAux aux;
      aux.mu = VecC::Zero(3);
      aux.nu = VecD::Ones(3);
      for (int u = 0; u < 3; ++u) {
        aux.mu(u) = 0.3 * rng.normal_complex();
        aux.nu(u) = rng.uniform(0.5, 2.0);
      }
      const double before = wmmse_objective(aux, gains, csi);
      aux.mu = update_mu(gains, csi);
      aux.nu = update_nu(aux, gains, csi);
      const double after = wmmse_objective(aux, gains, csi);
      expect(after <= before + 1e-9 * std::abs(before), "Eq.13/14 never increase Eq.12");
      // with optimal mu, nu: objective = U - sum ln(1 + SINR)
      double want = 3.0;
      for (int u = 0; u < 3; ++u) {
        const double sinr = std::norm(mean_gain(gains, csi, u)) / psi_u(gains, csi, u);
        want -= std::log1p(sinr);
      }
      expect_near(after, want, 1e-9 * std::max(1.0, std::abs(want)),
                  "objective identity U - sum ln(1+SINR)");
      ++checked;
    }
    expect(checked == 100, "ran all trials");
  });
}

// -------------------------------------------------- scheduling + baselines

void register_scheduling(Harness& h) {
  h.check("cs.full_when_few_uts", [] {
    Rng rng(20);
    const StatisticalCsi csi = make_random_csi(2, 3, 2, rng);
    const SchedulingMask mask = schedule_cs(csi, 8);
    for (int s = 0; s < 2; ++s) expect(mask.served[s].size() == 3, "U <= U_max schedules all");
  });
  h.check("cs.orthogonal_over_collinear", [] {
    Rng rng(21);
    StatisticalCsi csi = make_random_csi(1, 3, 2, rng);
    csi.gamma(0, 0) = 10.0;  // seed
    csi.gamma(0, 1) = 1.0;
    csi.gamma(0, 2) = 1.0;
    csi.b_at(0, 0) = (VecC(2) << 1.0, 0.0).finished();
    csi.b_at(0, 1) = (VecC(2) << 1.0, 0.0).finished();   // collinear with seed
    csi.b_at(0, 2) = (VecC(2) << 0.0, 1.0).finished();   // orthogonal to seed
    const SchedulingMask mask = schedule_cs(csi, 2);
    expect(mask.is_served(0, 0) && mask.is_served(0, 2) && !mask.is_served(0, 1),
           "greedy picks the orthogonal candidate");
  });
  h.check("rs.contracts", [] {
    Rng a(22), b(22);
    const SchedulingMask m1 = schedule_rs(3, 6, 3, a);
    const SchedulingMask m2 = schedule_rs(3, 6, 3, b);
    expect(m1.delta == m2.delta, "seeded RS reproducible");
    Rng c(23);
    const SchedulingMask full = schedule_rs(2, 4, 4, c);
    expect(full.delta.sum() == 8, "U_max = U schedules everything");
    try {
      Rng d(24);
      schedule_rs(2, 3, 4, d);
      throw CheckFailure("U_max > U accepted");
    } catch (const ConfigError&) {
    }
  });
  h.check("rs.inclusion_frequency", [] {
    Rng rng(25);
    const int draws = 10000;
    Eigen::VectorXd count = Eigen::VectorXd::Zero(8);
    for (int d = 0; d < draws; ++d) {
      const SchedulingMask m = schedule_rs(1, 8, 2, rng);
      for (int u : m.served[0]) count(u) += 1.0;
    }
    for (int u = 0; u < 8; ++u)
      expect_near(count(u) / draws, 0.25, 0.02, "per-UT inclusion frequency U_max/U");
  });
  h.check("sss.rules", [] {
    Rng rng(26);
    StatisticalCsi csi = make_random_csi(3, 2, 2, rng);
    csi.gamma.col(0) << 1e-16, 2e-16, 2e-16;
    csi.gamma.col(1) << 5e-16, 1e-16, 1e-16;
    const SchedulingMask mask = SchedulingMask::from_served(2, {{0, 1}, {0}, {0}}, 2);
    const SchedulingMask out = sss_assign(mask, csi);
    expect(out.is_served(1, 0) && !out.is_served(0, 0) && !out.is_served(2, 0),
           "tie broken toward the first strongest satellite");
    expect(out.is_served(0, 1), "singly served UT unchanged");
  });
  h.check("mrt.contracts", [] {
    Rng rng(27);
    const StatisticalCsi csi = make_random_csi(3, 4, 4, rng);
    const SchedulingMask mask = make_random_mask(3, 4, 2, rng);
    const VecD p = VecD::Constant(3, 2.0);
    const BeamformerSet bf = mrt_beamformers(csi, mask, p);
    for (int s = 0; s < 3; ++s) expect_near(bf.power_used(s), 2.0, 2.0 * 1e-12, "power exact");
    // single served user: |b^T w| = ||b|| sqrt(P)
    const SchedulingMask single = SchedulingMask::from_served(4, {{1}, {2}, {3}}, 1);
    const BeamformerSet one = mrt_beamformers(csi, single, p);
    const Complex gain = transpose_dot(csi.b_at(0, 1), one.w[0][1]);
    expect_near(std::abs(gain), csi.b_at(0, 1).norm() * std::sqrt(2.0), 1e-9,
                "phase-aligned maximum");
  });
  h.check("zf.contracts", [] {
    Rng rng(28);
    const StatisticalCsi csi = make_random_csi(2, 4, 4, rng);
    const SchedulingMask mask = make_random_mask(2, 4, 3, rng);
    const VecD p = VecD::Constant(2, 1.0);
    const BeamformerSet bf = zf_beamformers(csi, mask, p);
    expect(bf.power_feasible(1e-12), "ZF within power budget");
    for (int s = 0; s < 2; ++s)
      for (int u : mask.served[s])
        for (int j : mask.served[s]) {
          if (j == u || bf.w[s][u].norm() == 0.0) continue;
          const double resid = std::abs(transpose_dot(csi.b_at(s, j), bf.w[s][u])) /
                               (csi.b_at(s, j).norm() * bf.w[s][u].norm());
          expect(resid < 1e-9, "nulling residual below 1e-9");
        }
    // orthogonal served channels make ZF collapse to MRT
    StatisticalCsi ortho = csi;
    ortho.b_at(0, 0) = (VecC(4) << 1, 0, 0, 0).finished();
    ortho.b_at(0, 1) = (VecC(4) << 0, 1, 0, 0).finished();
    const SchedulingMask m2 = SchedulingMask::from_served(4, {{0, 1}, {2}}, 2);
    const BeamformerSet zf = zf_beamformers(ortho, m2, p);
    const BeamformerSet mrt = mrt_beamformers(ortho, m2, p);
    expect((zf.w[0][0] - mrt.w[0][0]).norm() < 1e-12, "ZF equals MRT for orthogonal channels");
  });
}

// ------------------------------------------------------------- ball solver

void register_ball(Harness& h) {
  h.check("ball.identity_theta", [] {
    ReducedQuadratic quad;
    quad.budget = 1.0;
    BlockQuadratic blk;
    blk.theta = MatC::Identity(2, 2);
    blk.xi = (VecC(2) << Complex(2.0, 0.0), 0.0).finished();  // ||xi||^2 = 4
    quad.blocks.push_back(blk);
    quad.eigendecompose();
    const BallSolution sol = solve_ball_constrained(quad);
    expect_near(sol.lambda, 1.0, 1e-9, "lambda = 1");
    double norm2 = 0.0;
    for (const auto& w : sol.w) norm2 += w.squaredNorm();
    expect_near(norm2, 1.0, 1e-9, "||w|| = 1");
  });
  h.check("ball.zero_theta", [] {
    ReducedQuadratic quad;
    quad.budget = 4.0;
    BlockQuadratic blk;
    blk.theta = MatC::Zero(3, 3);
    blk.xi = VecC::Zero(3);
    blk.xi(0) = Complex(0.0, 5.0);
    quad.blocks.push_back(blk);
    quad.eigendecompose();
    const BallSolution sol = solve_ball_constrained(quad);
    expect_near(sol.lambda, 5.0 / 2.0, 1e-12, "lambda = ||xi||/sqrt(P)");
    expect(std::abs(sol.w[0](0) - Complex(0.0, 2.0)) < 1e-12, "w = xi sqrt(P)/||xi||");
  });
  h.check("ball.h_monotone_and_forms_agree", [] {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
      ReducedQuadratic quad;
      quad.budget = rng.uniform(0.5, 4.0);
      for (int b = 0; b < 2; ++b) {
        MatC m(3, 3);
        for (int i = 0; i < 9; ++i) m.data()[i] = rng.normal_complex();
        BlockQuadratic blk;
        blk.theta = m.adjoint() * m;  // PSD
        blk.xi = VecC::Zero(3);
        for (int i = 0; i < 3; ++i) blk.xi(i) = rng.normal_complex();
        quad.blocks.push_back(blk);
      }
      quad.eigendecompose();
      double prev = std::numeric_limits<double>::infinity();
      for (double lam : {0.0, 0.3, 0.9, 2.7, 8.1}) {
        const double val = h_of_lambda(quad, lam);
        expect(val < prev, "h strictly decreasing");
        prev = val;
        expect_near(val, oracle::h_inverse_form(quad, lam), 1e-10 * std::max(1.0, std::abs(val)),
                    "spectral h equals inverse-form h");
      }
      const BallSolution sol = solve_ball_constrained(quad);
      double norm2 = 0.0;
      for (const auto& w : sol.w) norm2 += w.squaredNorm();
      expect(norm2 <= quad.budget * (1.0 + 1e-9), "power feasible");
      expect(sol.lambda * std::abs(norm2 - quad.budget) < 1e-8 * quad.budget,
             "complementary slackness");
    }
  });
}

// -------------------------------------------------- local solver (theorems)

void register_local(Harness& h) {
  h.check("theorem1.matches_dense_solve", [] {
    Rng rng(40);
    for (int trial = 0; trial < 10; ++trial) {
      const int s_count = 3, u_count = 2, n_ant = 2;
      const StatisticalCsi csi = make_random_csi(s_count, u_count, n_ant, rng);
      const SchedulingMask mask = make_random_mask(s_count, u_count, 2, rng);
      const ConsensusState st = make_random_state(0, {1, 2}, csi, mask, rng.uniform(0.5, 2.0), rng);
      std::vector<VecC> w_row(u_count, VecC::Zero(n_ant));
      for (auto& w : w_row)
        for (int i = 0; i < n_ant; ++i) w(i) = rng.normal_complex();
      const MatC g = eliminate_g(st, csi, mask, w_row);
      for (int u = 0; u < u_count; ++u)
        for (int l = 0; l < u_count; ++l) {
          const Complex own = mask.is_served(0, l) ? transpose_dot(csi.b_at(0, u), w_row[l])
                                                   : Complex(0, 0);
          std::vector<int> support;
          const VecC dense = oracle::dense_consensus_solve(st, csi, mask, u, l, own, &support);
          for (std::size_t i = 0; i < support.size(); ++i) {
            const Complex mine = g(support[i], gain_col(u, l, u_count));
            expect(std::abs(mine - dense(i)) <= 1e-10 * std::max(1.0, std::abs(dense(i))),
                   "eliminate_g equals dense Eq.24 solve");
          }
        }
    }
  });
  h.check("theorem1.penalty_dominance_limit", [] {
    Rng rng(41);
    const StatisticalCsi csi = make_random_csi(3, 2, 2, rng);
    const SchedulingMask mask = SchedulingMask::from_served(2, {{0, 1}, {0, 1}, {0, 1}}, 2);
    ConsensusState st = make_random_state(0, {1, 2}, csi, mask, 1e9, rng);
    st.self_dual.setZero();
    for (auto& [j, z] : st.duals) z.setZero();
    std::vector<VecC> w_row(2, VecC::Zero(2));
    const MatC g = eliminate_g(st, csi, mask, w_row);
    // average of the snapshots over G_s ∪ {s}
    for (int u = 0; u < 2; ++u)
      for (int l = 0; l < 2; ++l)
        for (int i = 1; i < 3; ++i) {
          Complex avg = st.self_snapshot(i, gain_col(u, l, 2));
          for (const auto& [j, snap] : st.snapshots) avg += snap(i, gain_col(u, l, 2));
          avg /= 3.0;
          expect(std::abs(g(i, gain_col(u, l, 2)) - avg) < 1e-6 * std::max(1.0, std::abs(avg)),
                 "large rho collapses to the consensus average");
        }
  });
  h.check("theorem1.mu_zero_formula_collapse", [] {
    Rng rng(42);
    const StatisticalCsi csi = make_random_csi(3, 2, 2, rng);
    const SchedulingMask mask = SchedulingMask::from_served(2, {{0, 1}, {0, 1}, {0, 1}}, 2);
    ConsensusState st = make_random_state(0, {1, 2}, csi, mask, 1.3, rng);
    st.mu.setZero();
    st.self_dual.setZero();
    for (auto& [j, z] : st.duals) z.setZero();
    std::vector<VecC> w_row(2, VecC::Zero(2));
    const MatC g = eliminate_g(st, csi, mask, w_row);
    for (int u = 0; u < 2; ++u)
      for (int l = 0; l < 2; ++l)
        for (int i = 1; i < 3; ++i) {
          Complex avg = st.self_snapshot(i, gain_col(u, l, 2));
          for (const auto& [j, snap] : st.snapshots) avg += snap(i, gain_col(u, l, 2));
          avg /= 3.0;
          expect(std::abs(g(i, gain_col(u, l, 2)) - avg) < 1e-12 * std::max(1.0, std::abs(avg)),
                 "mu=0, zero duals: plain average");
        }
  });
  h.check("theorem2.gradient_identity_fd", [] {
    Rng rng(43);
    for (int trial = 0; trial < 3; ++trial) {
      const int s_count = 3, u_count = 3, n_ant = 2;
      const StatisticalCsi csi = make_random_csi(s_count, u_count, n_ant, rng);
      const SchedulingMask mask = make_random_mask(s_count, u_count, 2, rng);
      const ConsensusState st = make_random_state(0, {1, 2}, csi, mask, 1.0, rng);
      const ReducedQuadratic quad = assemble_reduced(st, csi, mask, 1.0);
      const auto& served = mask.served[0];
      std::vector<VecC> w_row(u_count, VecC::Zero(n_ant));
      for (int l : served)
        for (int i = 0; i < n_ant; ++i) w_row[l](i) = 0.5 * rng.normal_complex();
      for (std::size_t bi = 0; bi < served.size(); ++bi) {
        const int l = served[bi];
        const auto eval = [&](const VecC& w) {
          std::vector<VecC> probe = w_row;
          probe[l] = w;
          const MatC g = eliminate_g(st, csi, mask, probe);
          return local_objective(st, csi, g);
        };
        const VecC fd = oracle::fd_gradient(eval, w_row[l], 1e-5);
        const VecC analytic = 2.0 * (quad.blocks[bi].theta * w_row[l] - quad.blocks[bi].xi);
        expect((fd - analytic).norm() <= 1e-6 * std::max(1.0, analytic.norm()),
               "reduced gradient equals FD gradient of the eliminated objective");
      }
      // objective difference is w-independent
      double first = 0.0;
      double var = 0.0;
      std::vector<double> diffs;
      for (int probe = 0; probe < 10; ++probe) {
        std::vector<VecC> w_probe(u_count, VecC::Zero(n_ant));
        for (int l : served)
          for (int i = 0; i < n_ant; ++i) w_probe[l](i) = 0.5 * rng.normal_complex();
        const MatC g = eliminate_g(st, csi, mask, w_probe);
        double reduced = 0.0;
        for (std::size_t bi = 0; bi < served.size(); ++bi) {
          const VecC& w = w_probe[served[bi]];
          reduced += (w.adjoint() * quad.blocks[bi].theta * w).value().real() -
                     2.0 * quad.blocks[bi].xi.dot(w).real();
        }
        diffs.push_back(local_objective(st, csi, g) - reduced);
      }
      double mean = 0.0;
      for (double d : diffs) mean += d;
      mean /= diffs.size();
      for (double d : diffs) var += (d - mean) * (d - mean);
      var /= diffs.size();
      expect(var < 1e-12, "offset variance below 1e-12");
      (void)first;
    }
  });
  h.check("solve_local.matches_generic_oracle", [] {
    Rng rng(44);
    for (int trial = 0; trial < 3; ++trial) {
      const StatisticalCsi csi = make_random_csi(3, 3, 4, rng);
      const SchedulingMask mask = make_random_mask(3, 3, 2, rng);
      const ConsensusState st = make_random_state(0, {1, 2}, csi, mask, 1.0, rng);
      const double budget = rng.uniform(0.5, 2.0);
      const LocalSolve mine = solve_local(st, csi, mask, budget);
      const GenericOracleResult ref = generic_local_oracle(st, csi, mask, budget, 1e-12, 2000);
      const double my_obj = local_objective(st, csi, mine.g);
      expect(my_obj <= ref.objective + 1e-6 * std::max(1.0, std::abs(ref.objective)),
             "solve_local at least as good as the oracle");
      expect(std::abs(my_obj - ref.objective) <= 1e-6 * std::max(1.0, std::abs(ref.objective)),
             "objectives agree to 1e-6");
      // own-entry contract (Eq. 16) and scheduler zeros
      for (int u = 0; u < 3; ++u)
        for (int l = 0; l < 3; ++l) {
          const Complex own = mask.is_served(0, l)
                                  ? transpose_dot(csi.b_at(0, u), mine.w_row[l])
                                  : Complex(0, 0);
          expect(mine.g(0, gain_col(u, l, 3)) == own, "own entry equals b^T delta w exactly");
          for (int i = 0; i < 3; ++i)
            if (!mask.is_served(i, l))
              expect(mine.g(i, gain_col(u, l, 3)) == Complex(0, 0), "scheduler zeros exact");
        }
    }
  });
}

// ---------------------------------------------------- centralized solver

void register_centralized(Harness& h) {
  h.check("bcd.matches_projected_gradient", [] {
    Rng rng(50);
    for (int trial = 0; trial < 3; ++trial) {
      const StatisticalCsi csi = make_random_csi(2, 2, 2, rng);
      const SchedulingMask mask = SchedulingMask::from_served(2, {{0, 1}, {0, 1}}, 2);
      WmmseAux aux;
      aux.mu = VecC::Zero(2);
      aux.nu = VecD::Ones(2);
      for (int u = 0; u < 2; ++u) {
        aux.mu(u) = 0.4 * rng.normal_complex();
        aux.nu(u) = rng.uniform(0.5, 2.0);
      }
      const VecD p = VecD::Constant(2, 1.5);
      const BeamformerSet w0 = BeamformerSet::zeros(2, 2, 2, p);
      const BeamformerSet mine = solve_beamformers_centralized(aux, csi, mask, w0, 1e-12, 2000);
      const auto jq = oracle::build_joint_quadratic(aux, csi, mask);
      const VecC ref = oracle::projected_gradient_joint(jq, p, 100000);
      VecC stacked(jq.a.rows());
      int off = 0;
      for (int s = 0; s < 2; ++s)
        for (int l : mask.served[s]) {
          stacked.segment(off, 2) = mine.w[s][l];
          off += 2;
        }
      const double got = oracle::joint_objective(jq, stacked);
      const double want = oracle::joint_objective(jq, ref);
      expect(got <= want + 1e-6 * std::max(1.0, std::abs(want)),
             "BCD objective within 1e-6 of projected-gradient oracle");
    }
  });
  h.check("bcd.zero_linear_term", [] {
    Rng rng(51);
    const StatisticalCsi csi = make_random_csi(2, 2, 2, rng);
    const SchedulingMask mask = SchedulingMask::from_served(2, {{0, 1}, {0, 1}}, 2);
    WmmseAux aux;
    aux.mu = VecC::Zero(2);  // kills the linear term; quadratic is PSD
    aux.nu = VecD::Ones(2);
    const VecD p = VecD::Constant(2, 1.0);
    const BeamformerSet w0 = BeamformerSet::zeros(2, 2, 2, p);
    const BeamformerSet out = solve_beamformers_centralized(aux, csi, mask, w0, 1e-12, 50);
    for (int s = 0; s < 2; ++s) expect(out.power_used(s) < 1e-18, "w = 0 optimal");
  });
  h.check("algorithm1.monotone_feasible_fixed_point", [] {
    Rng rng(52);
    for (int trial = 0; trial < 5; ++trial) {
      const DropContext ctx = small_drop(2, 3, 2, 1, 2, 100 + trial);
      CentralizedOptions opts;
      opts.tol = 1e-8;
      opts.max_outer = 40;
      auto [bf, rep] = run_centralized(ctx.csi, ctx.mask, ctx.p, opts);
      for (std::size_t i = 1; i < rep.objective_trace.size(); ++i)
        expect(rep.objective_trace[i] <=
                   rep.objective_trace[i - 1] + 1e-9 * std::abs(rep.objective_trace[i - 1]),
               "objective trace non-increasing");
      expect(bf.power_feasible(1e-9), "power feasible at the solution");
      // fixed point: re-running the closed-form updates barely moves mu/nu
      const MatC gains = compute_beam_gains(ctx.csi, ctx.mask, bf).flat;
      WmmseAux aux;
      aux.mu = update_mu(gains, ctx.csi);
      aux.nu = update_nu(aux, gains, ctx.csi);
      const VecC mu2 = update_mu(gains, ctx.csi);
      WmmseAux aux2{mu2, aux.nu};
      const VecD nu2 = update_nu(aux2, gains, ctx.csi);
      expect((aux.mu - mu2).norm() < 1e-8 && (aux.nu - nu2).norm() < 1e-8 * aux.nu.norm(),
             "mu/nu fixed point at convergence");
    }
  });
}

// ------------------------------------------------------------ decentralized

void register_decentralized(Harness& h) {
  h.check("topology.shapes_and_errors", [] {
    const IslTopology ring = build_topology(TopologyKind::kRing, 5);
    for (int s = 0; s < 5; ++s) expect(ring.degree(s) == 2, "ring degree 2");
    const IslTopology star = build_topology(TopologyKind::kStar, 5);
    expect(star.degree(0) == 4, "star hub degree 4");
    for (int s = 1; s < 5; ++s) expect(star.degree(s) == 1, "star leaf degree 1");
    const IslTopology mesh = build_topology(TopologyKind::kMesh, 5);
    for (int s = 0; s < 5; ++s) expect(mesh.degree(s) == 4, "mesh degree 4");
    try {
      build_topology(TopologyKind::kCustom, 4, {{0, 1}, {2, 3}});
      throw CheckFailure("disconnected graph accepted");
    } catch (const ConfigError&) {
    }
  });
  h.check("q_matrix.positive_definite_with_rho", [] {
    expect(q_matrix_positive_definite_check(1.0), "rho = 1 gives PD Q");
    expect(!q_matrix_positive_definite_check(0.0), "rho = 0 must fail the PD check");
  });
  h.check("duals.unchanged_at_consensus", [] {
    Rng rng(60);
    const StatisticalCsi csi = make_random_csi(2, 2, 2, rng);
    const SchedulingMask mask = SchedulingMask::from_served(2, {{0, 1}, {0, 1}}, 2);
    const IslTopology topo = build_topology(TopologyKind::kMesh, 2);
    std::vector<ConsensusState> states;
    for (int s = 0; s < 2; ++s)
      states.push_back(make_random_state(s, topo.neighbors[s], csi, mask, 1.0, rng));
    // force exact agreement of local copies and snapshots
    for (int s = 0; s < 2; ++s) {
      states[s].g_local = states[0].g_local;
      states[s].g_local.row(0).setZero();
      states[s].g_local.row(1).setZero();
      states[s].self_snapshot = states[s].g_local;
      for (auto& [j, snap] : states[s].snapshots) snap = states[s].g_local;
      states[s].self_dual.setZero();
      for (auto& [j, z] : states[s].duals) z.setZero();
    }
    // Eq. 21 with zero residual leaves the duals untouched
    for (int s = 0; s < 2; ++s) {
      MatC z = states[s].self_dual +
               states[s].rho_g * (states[s].g_local - states[s].self_snapshot);
      expect(z.cwiseAbs().maxCoeff() == 0.0, "dual unchanged at zero residual");
    }
  });
  h.check("overhead.formula_equals_counted", [] {
    const DropContext ctx = small_drop(3, 4, 2, 1, 2, 200);
    const IslTopology topo = build_topology(TopologyKind::kRing, 3);
    DecentralizedOptions opts;
    opts.max_outer = 3;
    opts.tol = 0.0;
    const DecentralizedResult res = run_decentralized(ctx.csi, ctx.mask, ctx.p, topo, opts);
    const auto rows = overhead_report(res.ledger, topo, ctx.mask);  // throws on mismatch
    for (const auto& row : rows)
      expect(row.formula_per_iter == 2LL * 2 * 3 * 4, "ring S=3, U=4, U_s=2 gives 48");
  });
  h.check("engine.scheduler_zeros_and_own_entry", [] {
    const DropContext ctx = small_drop(3, 4, 2, 1, 2, 201);
    const IslTopology topo = build_topology(TopologyKind::kRing, 3);
    DecentralizedOptions opts;
    opts.max_outer = 5;
    opts.tol = 0.0;
    std::vector<ConsensusState> states;
    for (int s = 0; s < 3; ++s)
      states.push_back(ConsensusState::init(s, 3, 4, opts.rho_g, topo.neighbors[s]));
    BeamformerSet bf = mrt_beamformers(ctx.csi, ctx.mask, ctx.p);
    for (int s = 0; s < 3; ++s)
      for (int l : ctx.mask.served[s])
        for (int u = 0; u < 4; ++u)
          states[s].g_local(s, gain_col(u, l, 4)) = transpose_dot(ctx.csi.b_at(s, u), bf.w[s][l]);
    OverheadLedger ledger;
    ledger.reset(3);
    for (int round = 0; round < 5; ++round) {
      for (auto& st : states) {
        st.mu = update_mu(st.g_local, ctx.csi);
        st.nu = update_nu(WmmseAux{st.mu, st.nu}, st.g_local, ctx.csi);
      }
      consensus_round(states, topo, ctx.csi, ctx.mask, ctx.p, bf, ledger);
      for (int s = 0; s < 3; ++s)
        for (int u = 0; u < 4; ++u)
          for (int l = 0; l < 4; ++l)
            for (int i = 0; i < 3; ++i)
              if (!ctx.mask.is_served(i, l))
                expect(states[s].g_local(i, gain_col(u, l, 4)) == Complex(0, 0),
                       "scheduler-forced zeros survive every round");
    }
  });
}

// ------------------------------------------------------- full-mode suites

void register_full(Harness& h) {
  h.check("full.cap_sampling_uniform", [] {
    GeometryConfig cfg = table_defaults();
    cfg.ut_count = 100000;
    Rng rng(70);
    const auto uts = drop_uts(cfg, rng);
    const Vec3 e3 = latlon_to_ecef(cfg.region_center_lat_deg, cfg.region_center_lon_deg, 1.0);
    const double theta_max = cfg.region_radius_km / cfg.earth_radius_km;
    // analytic mean geodesic distance over the cap
    const double mean_want = cfg.earth_radius_km *
                             (std::sin(theta_max) - theta_max * std::cos(theta_max)) /
                             (1.0 - std::cos(theta_max));
    double mean_got = 0.0;
    for (const auto& p : uts)
      mean_got += cfg.earth_radius_km * std::acos(std::clamp(p.normalized().dot(e3), -1.0, 1.0));
    mean_got /= uts.size();
    expect_near(mean_got, mean_want, 0.02 * mean_want, "cap mean geodesic distance within 2%");

    // chi-square over equal-area bins (cos(theta) x azimuth)
    const int kc = 10, kp = 8;
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(kc, kp);
    Vec3 ref = std::abs(e3.z()) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
    const Vec3 e1 = (ref - ref.dot(e3) * e3).normalized();
    const Vec3 e2 = e3.cross(e1);
    const double cmin = std::cos(theta_max);
    for (const auto& p : uts) {
      const Vec3 d = p.normalized();
      const double c = std::clamp(d.dot(e3), cmin, 1.0);
      const double phi = std::atan2(d.dot(e2), d.dot(e1));
      int ic = std::min(kc - 1, static_cast<int>((c - cmin) / (1.0 - cmin) * kc));
      int ip = std::min(kp - 1, static_cast<int>((phi + kPi) / (2.0 * kPi) * kp));
      counts(ic, ip) += 1.0;
    }
    const double expect_count = static_cast<double>(cfg.ut_count) / (kc * kp);
    double chi2 = 0.0;
    for (int i = 0; i < kc; ++i)
      for (int j = 0; j < kp; ++j)
        chi2 += (counts(i, j) - expect_count) * (counts(i, j) - expect_count) / expect_count;
    const double crit = chi2_quantile(kc * kp - 1, 2.3263478740408408);  // p = 0.01
    expect(chi2 < crit, "chi-square uniformity at p > 0.01");
  });
  h.check("full.alpha_moments_and_independence", [] {
    Rng rng(71);
    StatisticalCsi csi = make_random_csi(2, 2, 2, rng);
    const int n = 100000;
    Rng s(72);
    Complex mean00(0, 0);
    double pow00 = 0.0;
    Complex cross(0, 0);
    for (int i = 0; i < n; ++i) {
      const MatC a = sample_instant_alpha(csi, s);
      mean00 += a(0, 0);
      pow00 += std::norm(a(0, 0));
      cross += (a(0, 0) - csi.alpha_bar(0, 0) * Complex(1, 1)) *
               std::conj(a(1, 1) - csi.alpha_bar(1, 1) * Complex(1, 1));
    }
    mean00 /= n;
    pow00 /= n;
    cross /= n;
    expect_near(pow00, csi.gamma(0, 0), 0.01 * csi.gamma(0, 0), "E|alpha|^2 = gamma within 1%");
    expect(std::abs(mean00 - csi.alpha_bar(0, 0) * Complex(1, 1)) <
               4.0 * std::sqrt(2.0 * csi.beta(0, 0) / n),
           "E alpha = alpha_bar (1+j)");
    const double denom = 2.0 * std::sqrt(csi.beta(0, 0) * csi.beta(1, 1));
    expect(std::abs(cross) / denom < 0.02, "distinct links uncorrelated");
  });
  h.check("full.gamma_moments_match_eq9", [] {
    Rng rng(73);
    const StatisticalCsi csi = make_random_csi(3, 3, 2, rng);
    const SchedulingMask mask = make_random_mask(3, 3, 2, rng);
    BeamformerSet bf = BeamformerSet::zeros(3, 3, 2, VecD::Constant(3, 1.0));
    for (int s = 0; s < 3; ++s)
      for (int l : mask.served[s])
        for (int i = 0; i < 2; ++i) bf.w[s][l](i) = 0.5 * rng.normal_complex();
    const BeamGains g = compute_beam_gains(csi, mask, bf);
    const int n = 100000;
    Rng s(74);
    const Complex phase(1, 1);
    for (int u = 0; u < 3; ++u) {
      const Complex want_mean = mean_gain(g.flat, csi, u);
      double want_var = 0.0;
      for (int i = 0; i < 3; ++i) want_var += csi.beta(i, u) * std::norm(g.col(u, u)(i));
      Complex acc_mean(0, 0);
      double acc_var = 0.0, acc_var2 = 0.0;
      std::vector<double> acc_cross(3, 0.0), acc_cross2(3, 0.0);
      Rng ss(75 + u);
      for (int k = 0; k < n; ++k) {
        const MatC alpha = sample_instant_alpha(csi, ss);
        Complex guu(0, 0);
        for (int i = 0; i < 3; ++i) guu += (alpha(i, u) / phase) * g.col(u, u)(i);
        acc_mean += guu;
        const double dev = std::norm(guu - want_mean);
        acc_var += dev;
        acc_var2 += dev * dev;
        for (int l = 0; l < 3; ++l) {
          if (l == u) continue;
          Complex gul(0, 0);
          for (int i = 0; i < 3; ++i) gul += (alpha(i, u) / phase) * g.col(u, l)(i);
          acc_cross[l] += std::norm(gul);
          acc_cross2[l] += std::norm(gul) * std::norm(gul);
        }
      }
      acc_mean /= n;
      const double var_mean = acc_var / n;
      const double var_se = std::sqrt(std::max(0.0, acc_var2 / n - var_mean * var_mean) / n);
      expect(std::abs(acc_mean - want_mean) <= 3.0 * std::sqrt(want_var / n) + 1e-12,
             "E Gamma_uu matches Eq. 9a within 3 SE");
      expect(std::abs(var_mean - want_var) <= 3.0 * var_se + 1e-12,
             "V Gamma_uu matches Eq. 9b within 3 SE");
      const MatD t = csi.t_matrix(u);
      for (int l = 0; l < 3; ++l) {
        if (l == u) continue;
        const VecC gul = g.col(u, l);
        const double want_cross = quad_form(t, gul, gul).real();
        const double got = acc_cross[l] / n;
        const double se = std::sqrt(std::max(0.0, acc_cross2[l] / n - got * got) / n);
        expect(std::abs(got - want_cross) <= 3.0 * se + 1e-12,
               "E|Gamma_ul|^2 matches Eq. 9c within 3 SE");
      }
    }
  });
  h.check("full.hardening_bound_below_mc", [] {
    Rng rng(76);
    for (int trial = 0; trial < 3; ++trial) {
      const StatisticalCsi csi = make_random_csi(3, 4, 2, rng);
      const SchedulingMask mask = make_random_mask(3, 4, 2, rng);
      BeamformerSet bf = BeamformerSet::zeros(3, 4, 2, VecD::Constant(3, 1.0));
      for (int s = 0; s < 3; ++s)
        for (int l : mask.served[s])
          for (int i = 0; i < 2; ++i) bf.w[s][l](i) = 0.4 * rng.normal_complex();
      const VecD lb = rate_lower_bound(compute_beam_gains(csi, mask, bf).flat, csi);
      Rng mc(77 + trial);
      const MonteCarloRate est = monte_carlo_rate(csi, mask, bf, 20000, mc);
      for (int u = 0; u < 4; ++u)
        expect(lb(u) <= est.mean(u) + 3.0 * est.stderr_(u) + 1e-12,
               "Eq. 7 lower-bounds the Monte-Carlo rate");
    }
  });
  h.check("full.mc_rate_exact_when_beta_zero", [] {
    Rng rng(78);
    StatisticalCsi csi = make_random_csi(2, 3, 2, rng);
    csi.beta.setZero();
    csi.gamma = 2.0 * csi.alpha_bar.array().square();
    const SchedulingMask mask = make_random_mask(2, 3, 2, rng);
    BeamformerSet bf = BeamformerSet::zeros(2, 3, 2, VecD::Constant(2, 1.0));
    for (int s = 0; s < 2; ++s)
      for (int l : mask.served[s])
        for (int i = 0; i < 2; ++i) bf.w[s][l](i) = 0.4 * rng.normal_complex();
    const VecD lb = rate_lower_bound(compute_beam_gains(csi, mask, bf).flat, csi);
    Rng mc(79);
    const MonteCarloRate est = monte_carlo_rate(csi, mask, bf, 100, mc);
    for (int u = 0; u < 3; ++u) {
      expect(est.stderr_(u) < 1e-6 * std::max(1.0, est.mean(u)),
             "deterministic channel has (numerically) zero spread");
      expect_near(est.mean(u), lb(u), 1e-9 * std::max(1.0, lb(u)),
                  "estimate equals Eq. 7 when beta = 0");
    }
  });
  h.check("full.theorem1_hundred_instances", [] {
    Rng rng(80);
    for (int trial = 0; trial < 100; ++trial) {
      const int s_count = (trial % 3 == 0) ? 2 : (trial % 3 == 1 ? 3 : 5);
      const int u_count = (trial % 2) ? 2 : 4;
      const StatisticalCsi csi = make_random_csi(s_count, u_count, 2, rng);
      const SchedulingMask mask = make_random_mask(s_count, u_count, 2, rng);
      std::vector<int> neighbors;
      for (int i = 1; i < s_count; ++i) neighbors.push_back(i);
      const ConsensusState st =
          make_random_state(0, neighbors, csi, mask, rng.uniform(0.5, 2.0), rng);
      std::vector<VecC> w_row(u_count, VecC::Zero(2));
      for (auto& w : w_row)
        for (int i = 0; i < 2; ++i) w(i) = rng.normal_complex();
      const MatC g = eliminate_g(st, csi, mask, w_row);
      for (int u = 0; u < u_count; ++u)
        for (int l = 0; l < u_count; ++l) {
          const Complex own = mask.is_served(0, l) ? transpose_dot(csi.b_at(0, u), w_row[l])
                                                   : Complex(0, 0);
          std::vector<int> support;
          const VecC dense = oracle::dense_consensus_solve(st, csi, mask, u, l, own, &support);
          for (std::size_t i = 0; i < support.size(); ++i)
            expect(std::abs(g(support[i], gain_col(u, l, u_count)) - dense(i)) <=
                       1e-10 * std::max(1.0, std::abs(dense(i))),
                   "Theorem-1 stationarity across 100 instances");
        }
    }
  });
  h.check("full.consensus_small_instance", [] {
    const DropContext ctx = small_drop(2, 3, 2, 1, 2, 300);
    const IslTopology topo = build_topology(TopologyKind::kMesh, 2);
    DecentralizedOptions opts;
    opts.max_outer = 400;
    opts.tol = 0.0;
    const DecentralizedResult res = run_decentralized(ctx.csi, ctx.mask, ctx.p, topo, opts);
    expect(res.report.residual_trace.back() < 1e-4, "S=2 mesh consensus below 1e-4");
  });
}

}  // namespace

bool q_matrix_positive_definite_check(double rho_g) {
  Rng rng(90);
  const StatisticalCsi csi = make_random_csi(4, 3, 2, rng);
  const SchedulingMask mask = make_random_mask(4, 3, 2, rng);
  const int deg = 2;
  const double ridge = rho_g * (deg + 1) / 2.0;
  for (int zero_mu = 0; zero_mu < 2; ++zero_mu)
    for (int u = 0; u < 3; ++u) {
      const double a = zero_mu ? 0.0 : 0.7;
      const MatD t = csi.t_matrix(u);
      MatD q = a * t.block(1, 1, 3, 3);
      q.diagonal().array() += ridge;
      const Eigen::LLT<MatD> llt(q);
      if (llt.info() != Eigen::Success) return false;
      Eigen::SelfAdjointEigenSolver<MatD> es(q);
      if (es.eigenvalues().minCoeff() <= 0.0) return false;
    }
  return true;
}

std::vector<CheckResult> run_validation(bool full) {
  Harness h;
  register_geometry(h);
  register_channel(h);
  register_rates(h);
  register_scheduling(h);
  register_ball(h);
  register_local(h);
  register_centralized(h);
  register_decentralized(h);
  if (full) register_full(h);
  return h.results;
}

}  // namespace leobf
