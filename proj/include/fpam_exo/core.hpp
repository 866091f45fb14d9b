#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace fpam_exo {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kPascalPerKilopascal = 1000.0;
inline constexpr double kStandardGravity = 9.81;
inline constexpr int kNumChannels = 5;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Input violates a documented precondition (negative pressure, bad length, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Actuator routing collapses to a zero-length segment.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration (suit file, controller sets, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Principal head rotation axes: flexion-extension (body x), lateral
/// deviation (body y) and axial rotation (body z).
enum class Axis { FE = 0, LD = 1, AR = 2 };

inline constexpr std::array<Axis, 3> kAllAxes{Axis::FE, Axis::LD, Axis::AR};

inline constexpr int axis_index(Axis a) { return static_cast<int>(a); }

inline std::string_view axis_name(Axis a) {
  switch (a) {
    case Axis::FE: return "FE";
    case Axis::LD: return "LD";
    case Axis::AR: return "AR";
  }
  return "?";
}

inline Axis parse_axis(std::string_view s) {
  if (s == "FE" || s == "fe") return Axis::FE;
  if (s == "LD" || s == "ld") return Axis::LD;
  if (s == "AR" || s == "ar") return Axis::AR;
  throw DomainError("unknown axis '" + std::string(s) + "' (expected FE, LD or AR)");
}

/// Closed biological range of motion per axis in degrees.
struct AngleRange {
  double min_deg;
  double max_deg;
  double length() const { return max_deg - min_deg; }
  bool contains(double deg) const { return deg >= min_deg && deg <= max_deg; }
};

inline constexpr AngleRange biological_range(Axis a) {
  switch (a) {
    case Axis::FE: return {-59.5, 73.7};
    case Axis::LD: return {-40.9, 43.1};
    case Axis::AR: return {-80.8, 77.7};
  }
  return {0.0, 0.0};
}

}  // namespace fpam_exo
