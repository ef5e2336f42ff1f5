#pragma once

#include <vector>

#include "leobf/rng.hpp"
#include "leobf/types.hpp"

namespace leobf {

struct GeometryConfig {
  double earth_radius_km = 6371.0;
  double altitude_km = 550.0;
  int planes = 28;
  int sats_per_plane = 60;
  double inclination_deg = 53.0;
  double region_center_lat_deg = 20.0;
  double region_center_lon_deg = 40.0;
  double region_radius_km = 800.0;
  int serving_count = 5;  // S
  int ut_count = 32;      // U

  void validate() const;  // throws ConfigError naming the offending field
};

/// Full constellation snapshot at t = 0 (no orbit propagation).
struct Constellation {
  std::vector<Vec3> positions;      // ECEF km
  std::vector<Vec3> velocity_dirs;  // unit vectors, along-track
};

struct SceneGeometry {
  std::vector<Vec3> sat_positions;      // ECEF km, length S
  std::vector<Vec3> sat_velocity_dirs;  // unit, length S
  std::vector<Vec3> ut_positions;       // ECEF km, length U
  // Columns are the local axes (x along-track, y = z cross x, z boresight
  // toward the Earth center); orthonormal and right-handed.
  std::vector<Mat3> local_frames;

  int num_sats() const { return static_cast<int>(sat_positions.size()); }
  int num_uts() const { return static_cast<int>(ut_positions.size()); }
};

struct AodSet {
  MatD az;             // S x U, radians
  MatD el;             // elevation from the array plane; boresight is pi/2
  MatD off_boresight;  // pi/2 - el
};

/// Walker-Delta constellation: RAAN evenly spaced over 2*pi across planes,
/// mean anomaly evenly spaced within each plane. Deterministic.
Constellation build_walker_delta(const GeometryConfig& cfg);

/// U points uniform over the spherical cap of geodesic radius
/// region_radius_km centered at (lat, lon).
std::vector<Vec3> drop_uts(const GeometryConfig& cfg, Rng& rng);

/// Picks the serving_count satellites whose sub-satellite points are nearest
/// the region center (ties by ascending index) and builds their local frames.
/// Throws InfeasibleSceneError if fewer than serving_count satellites are
/// above 10 degrees elevation as seen from the region center.
SceneGeometry select_serving_sats(const GeometryConfig& cfg, const Constellation& constellation,
                                  const std::vector<Vec3>& ut_positions);

/// Azimuth/elevation of each satellite->UT ray in the satellite's frame.
AodSet compute_aods(const SceneGeometry& scene);

Vec3 latlon_to_ecef(double lat_deg, double lon_deg, double radius_km);

/// Elevation angle (rad) of a satellite above the local horizon at `ground`.
double elevation_angle(const Vec3& ground, const Vec3& sat);

inline constexpr double kMinVisibilityElevationRad = 10.0 * kPi / 180.0;

}  // namespace leobf
