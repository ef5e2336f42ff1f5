#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace leobf {

using Complex = std::complex<double>;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;
using VecD = Eigen::VectorXd;
using MatD = Eigen::MatrixXd;
using MatI = Eigen::MatrixXi;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Unconjugated inner product b^T w. Beam-domain gains use the transpose
/// convention throughout, so every caller must go through this one helper
/// to keep bit-identical results between producers and checks.
inline Complex transpose_dot(const VecC& b, const VecC& w) {
  Complex acc(0.0, 0.0);
  for (Eigen::Index i = 0; i < b.size(); ++i) acc += b(i) * w(i);
  return acc;
}

/// x^H T y for real symmetric T and complex x, y.
inline Complex quad_form(const MatD& t, const VecC& x, const VecC& y) {
  Complex acc(0.0, 0.0);
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    Complex row(0.0, 0.0);
    for (Eigen::Index j = 0; j < t.cols(); ++j) row += t(i, j) * y(j);
    acc += std::conj(x(i)) * row;
  }
  return acc;
}

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InfeasibleSceneError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace leobf
