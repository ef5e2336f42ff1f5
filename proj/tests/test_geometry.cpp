#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "leobf/geometry.hpp"

using namespace leobf;

TEST_CASE("config validation names the offending field") {
  GeometryConfig cfg;
  cfg.planes = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("planes"), ConfigError);
  cfg = GeometryConfig{};
  cfg.region_radius_km = 0.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("region_radius_km"), ConfigError);
  cfg = GeometryConfig{};
  cfg.serving_count = 2000;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("serving_count"), ConfigError);
  cfg = GeometryConfig{};
  cfg.ut_count = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("ut_count"), ConfigError);
}

TEST_CASE("walker output is bit-identical across calls") {
  GeometryConfig cfg;
  cfg.planes = 4;
  cfg.sats_per_plane = 9;
  const Constellation a = build_walker_delta(cfg);
  const Constellation b = build_walker_delta(cfg);
  REQUIRE(a.positions.size() == 36);
  for (std::size_t i = 0; i < a.positions.size(); ++i) {
    CHECK(a.positions[i] == b.positions[i]);
    CHECK(a.velocity_dirs[i] == b.velocity_dirs[i]);
    CHECK(std::abs(a.velocity_dirs[i].norm() - 1.0) < 1e-12);
    // circular orbit: velocity orthogonal to position
    CHECK(std::abs(a.velocity_dirs[i].dot(a.positions[i].normalized())) < 1e-12);
  }
}

TEST_CASE("UT drops stay inside the cap") {
  GeometryConfig cfg;
  cfg.ut_count = 500;
  Rng rng(77);
  const auto uts = drop_uts(cfg, rng);
  const Vec3 cdir = latlon_to_ecef(cfg.region_center_lat_deg, cfg.region_center_lon_deg, 1.0);
  const double theta_max = cfg.region_radius_km / cfg.earth_radius_km;
  for (const auto& p : uts) {
    CHECK(std::abs(p.norm() - cfg.earth_radius_km) < 1e-6 * cfg.earth_radius_km);
    CHECK(std::acos(std::clamp(p.normalized().dot(cdir), -1.0, 1.0)) <= theta_max + 1e-12);
  }
}

TEST_CASE("sparse constellation far from the region is infeasible") {
  GeometryConfig cfg;
  cfg.planes = 1;
  cfg.sats_per_plane = 2;
  cfg.serving_count = 2;
  cfg.region_center_lat_deg = 0.0;
  cfg.region_center_lon_deg = 90.0;  // quarter turn from both satellites
  const Constellation c = build_walker_delta(cfg);
  Rng rng(3);
  const auto uts = drop_uts(cfg, rng);
  CHECK_THROWS_AS(select_serving_sats(cfg, c, uts), InfeasibleSceneError);
}

TEST_CASE("degenerate geometry error when a UT coincides with a satellite") {
  DropContext ctx = test::scene(2, 2, 2, 2, 2, 5);
  SceneGeometry bad = ctx.scene;
  bad.ut_positions[0] = bad.sat_positions[0];
  CHECK_THROWS_AS(compute_aods(bad), InfeasibleSceneError);
}

TEST_CASE("serving-scene AoDs lie in the forward hemisphere") {
  const DropContext ctx = test::scene(5, 8, 2, 2, 4, 21);
  for (int s = 0; s < 5; ++s)
    for (int u = 0; u < 8; ++u) {
      CHECK(ctx.aods.el(s, u) > 0.0);
      CHECK(ctx.aods.el(s, u) <= kPi / 2.0 + 1e-12);
      CHECK(ctx.aods.off_boresight(s, u) == kPi / 2.0 - ctx.aods.el(s, u));
    }
}

TEST_CASE("velocity direction projects into the frame x axis") {
  const DropContext ctx = test::scene(3, 2, 2, 2, 2, 9);
  for (int s = 0; s < 3; ++s) {
    const Mat3& f = ctx.scene.local_frames[s];
    // x axis is the along-track direction projected off the radial
    CHECK(f.col(0).dot(ctx.scene.sat_velocity_dirs[s]) > 0.99);
    CHECK(std::abs(f.col(2).dot(ctx.scene.sat_positions[s].normalized()) + 1.0) < 1e-12);
  }
}
