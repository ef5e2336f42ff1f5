#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "leobf/channel.hpp"

using namespace leobf;

TEST_CASE("build_csi satisfies the statistical identities exactly") {
  const DropContext ctx = test::scene(4, 6, 2, 2, 3, 31);
  CHECK_NOTHROW(ctx.csi.validate());
  ChannelConfig cfg;
  cfg.array.n_h = 2;
  cfg.array.n_v = 2;
  for (int s = 0; s < 4; ++s)
    for (int u = 0; u < 6; ++u) {
      // kappa drawn inside the configured dB range
      const double kdb = 10.0 * std::log10(ctx.csi.kappa(s, u));
      CHECK(kdb >= cfg.kappa_db_min - 1e-9);
      CHECK(kdb <= cfg.kappa_db_max + 1e-9);
      // b = G(off-boresight) * a(az, el)
      const VecC want = radiation_gain(ctx.aods.off_boresight(s, u)) *
                        steering_vector(ctx.aods.az(s, u), ctx.aods.el(s, u), cfg.array);
      CHECK((ctx.csi.b_at(s, u) - want).norm() == 0.0);
    }
  CHECK(ctx.csi.noise_power == noise_power_w(cfg.noise_psd_dbm_hz, cfg.bandwidth_hz,
                                             cfg.noise_figure_db));
}

TEST_CASE("instant channel sampling tracks gamma") {
  Rng rng(32);
  const StatisticalCsi csi = make_random_csi(2, 2, 2, rng);
  Rng s(33);
  const int n = 20000;
  double pow_acc = 0.0;
  for (int i = 0; i < n; ++i) pow_acc += std::norm(sample_instant_alpha(csi, s)(0, 0));
  CHECK(std::abs(pow_acc / n - csi.gamma(0, 0)) < 0.03 * csi.gamma(0, 0));
}

TEST_CASE("array config validation") {
  ArrayConfig arr;
  arr.n_h = 0;
  CHECK_THROWS_AS(arr.validate(), ConfigError);
  arr = ArrayConfig{};
  arr.spacing_over_lambda = 0.0;
  CHECK_THROWS_AS(steering_vector(0.1, 0.2, arr), ConfigError);
}

TEST_CASE("steering vector matches the Kronecker ramp layout") {
  ArrayConfig arr;
  arr.n_h = 3;
  arr.n_v = 2;
  const double az = 0.4, el = 0.3;
  const VecC a = steering_vector(az, el, arr);
  const double ph = 0.5 * std::cos(az) * std::cos(el);
  const double pv = 0.5 * std::sin(az) * std::cos(el);
  for (int k = 0; k < 3; ++k)
    for (int m = 0; m < 2; ++m) {
      const Complex want = std::polar(1.0, -2.0 * kPi * (ph * k + pv * m));
      CHECK(std::abs(a(k * 2 + m) - want) < 1e-15);
    }
}
