#include "leobf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace leobf {

void GeometryConfig::validate() const {
  if (!(earth_radius_km > 0.0)) throw ConfigError("geometry.earth_radius_km must be positive");
  if (!(altitude_km > 0.0)) throw ConfigError("geometry.altitude_km must be positive");
  if (planes < 1) throw ConfigError("geometry.planes must be >= 1");
  if (sats_per_plane < 1) throw ConfigError("geometry.sats_per_plane must be >= 1");
  if (!(region_radius_km > 0.0) || region_radius_km >= kPi * earth_radius_km)
    throw ConfigError("geometry.region_radius_km must lie in (0, pi*earth_radius_km)");
  if (region_center_lat_deg < -90.0 || region_center_lat_deg > 90.0)
    throw ConfigError("geometry.region_center_lat_deg must lie in [-90, 90]");
  if (serving_count < 1 || serving_count > planes * sats_per_plane)
    throw ConfigError("geometry.serving_count must lie in [1, planes*sats_per_plane]");
  if (ut_count < 1) throw ConfigError("geometry.ut_count must be >= 1");
}

Vec3 latlon_to_ecef(double lat_deg, double lon_deg, double radius_km) {
  const double lat = deg2rad(lat_deg);
  const double lon = deg2rad(lon_deg);
  return radius_km * Vec3(std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat));
}

Constellation build_walker_delta(const GeometryConfig& cfg) {
  cfg.validate();
  const double r = cfg.earth_radius_km + cfg.altitude_km;
  const double inc = deg2rad(cfg.inclination_deg);
  const double ci = std::cos(inc);
  const double si = std::sin(inc);

  Constellation out;
  out.positions.reserve(static_cast<std::size_t>(cfg.planes) * cfg.sats_per_plane);
  out.velocity_dirs.reserve(out.positions.capacity());
  for (int p = 0; p < cfg.planes; ++p) {
    const double raan = 2.0 * kPi * p / cfg.planes;
    const double co = std::cos(raan);
    const double so = std::sin(raan);
    for (int k = 0; k < cfg.sats_per_plane; ++k) {
      const double u = 2.0 * kPi * k / cfg.sats_per_plane;  // argument of latitude
      const double cu = std::cos(u);
      const double su = std::sin(u);
      out.positions.emplace_back(r * (co * cu - so * su * ci), r * (so * cu + co * su * ci),
                                 r * (su * si));
      // Circular orbit: d/du of the position direction, already unit length.
      out.velocity_dirs.emplace_back(-co * su - so * cu * ci, -so * su + co * cu * ci, cu * si);
    }
  }
  return out;
}

std::vector<Vec3> drop_uts(const GeometryConfig& cfg, Rng& rng) {
  cfg.validate();
  const double theta_max = cfg.region_radius_km / cfg.earth_radius_km;
  const Vec3 center = latlon_to_ecef(cfg.region_center_lat_deg, cfg.region_center_lon_deg, 1.0);

  // Orthonormal basis with e3 = cap center.
  const Vec3 e3 = center.normalized();
  Vec3 ref = std::abs(e3.z()) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
  const Vec3 e1 = (ref - ref.dot(e3) * e3).normalized();
  const Vec3 e2 = e3.cross(e1);

  std::vector<Vec3> uts;
  uts.reserve(cfg.ut_count);
  const double cmin = std::cos(theta_max);
  for (int u = 0; u < cfg.ut_count; ++u) {
    // Area-uniform on the cap: cos(theta) uniform in [cos(theta_max), 1].
    const double c = cmin + (1.0 - cmin) * rng.uniform();
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double phi = 2.0 * kPi * rng.uniform();
    const Vec3 dir = s * std::cos(phi) * e1 + s * std::sin(phi) * e2 + c * e3;
    uts.push_back(cfg.earth_radius_km * dir);
  }
  return uts;
}

double elevation_angle(const Vec3& ground, const Vec3& sat) {
  const Vec3 up = ground.normalized();
  const Vec3 v = sat - ground;
  return std::asin(std::clamp(up.dot(v) / v.norm(), -1.0, 1.0));
}

SceneGeometry select_serving_sats(const GeometryConfig& cfg, const Constellation& constellation,
                                  const std::vector<Vec3>& ut_positions) {
  cfg.validate();
  const int total = static_cast<int>(constellation.positions.size());
  if (total < cfg.serving_count) throw InfeasibleSceneError("fewer satellites than serving_count");

  const Vec3 center = latlon_to_ecef(cfg.region_center_lat_deg, cfg.region_center_lon_deg,
                                     cfg.earth_radius_km);
  const Vec3 cdir = center.normalized();

  // Geodesic distance of the sub-satellite point to the region center is
  // monotone in the central angle, so rank by descending dot product.
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dots(total);
  for (int i = 0; i < total; ++i) dots[i] = cdir.dot(constellation.positions[i].normalized());
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (dots[a] != dots[b]) return dots[a] > dots[b];
    return a < b;  // tie by ascending satellite index
  });

  int visible = 0;
  for (int i = 0; i < total; ++i)
    if (elevation_angle(center, constellation.positions[i]) > kMinVisibilityElevationRad) ++visible;
  if (visible < cfg.serving_count)
    throw InfeasibleSceneError("fewer than serving_count satellites above 10 deg elevation at region center");

  SceneGeometry scene;
  scene.ut_positions = ut_positions;
  for (int rank = 0; rank < cfg.serving_count; ++rank) {
    const int idx = order[rank];
    const Vec3& pos = constellation.positions[idx];
    const Vec3 z = (-pos).normalized();  // boresight toward Earth center
    Vec3 x = constellation.velocity_dirs[idx];
    x = (x - x.dot(z) * z).normalized();
    const Vec3 y = z.cross(x);
    Mat3 frame;
    frame.col(0) = x;
    frame.col(1) = y;
    frame.col(2) = z;
    scene.sat_positions.push_back(pos);
    scene.sat_velocity_dirs.push_back(constellation.velocity_dirs[idx]);
    scene.local_frames.push_back(frame);
  }
  return scene;
}

AodSet compute_aods(const SceneGeometry& scene) {
  const int s_count = scene.num_sats();
  const int u_count = scene.num_uts();
  AodSet aod;
  aod.az.resize(s_count, u_count);
  aod.el.resize(s_count, u_count);
  aod.off_boresight.resize(s_count, u_count);
  for (int s = 0; s < s_count; ++s) {
    const Mat3& frame = scene.local_frames[s];
    for (int u = 0; u < u_count; ++u) {
      const Vec3 d = scene.ut_positions[u] - scene.sat_positions[s];
      const double n = d.norm();
      if (n == 0.0) throw InfeasibleSceneError("degenerate geometry: UT coincides with satellite");
      const Vec3 v = frame.transpose() * (d / n);
      aod.az(s, u) = std::atan2(v.y(), v.x());
      aod.el(s, u) = std::asin(std::clamp(v.z(), -1.0, 1.0));
      aod.off_boresight(s, u) = kPi / 2.0 - aod.el(s, u);
    }
  }
  return aod;
}

}  // namespace leobf
