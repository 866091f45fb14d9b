#pragma once

// Head pose, actuator routing and the per-pose force Jacobian.
//
// Frames: the torso frame has its origin at the neck joint centre with x
// towards the right shoulder, y forward and z up. The head frame coincides
// with it at the neutral pose. Orientation is a body-fixed x-y-z Euler
// sequence, R = Rx(theta_x) Ry(theta_y) Rz(theta_z), mapping head-frame
// vectors into the torso frame. Flexion is negative theta_x, rightward
// lateral deviation positive theta_y, a right turn negative theta_z.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fpam_exo/core.hpp"
#include "fpam_exo/fpam_model.hpp"

namespace fpam_exo {

struct HeadPose {
  double theta_x_deg = 0.0;  // flexion-extension
  double theta_y_deg = 0.0;  // lateral deviation
  double theta_z_deg = 0.0;  // axial rotation

  double angle(Axis a) const {
    switch (a) {
      case Axis::FE: return theta_x_deg;
      case Axis::LD: return theta_y_deg;
      case Axis::AR: return theta_z_deg;
    }
    return 0.0;
  }

  static HeadPose along(Axis a, double deg) {
    HeadPose p;
    switch (a) {
      case Axis::FE: p.theta_x_deg = deg; break;
      case Axis::LD: p.theta_y_deg = deg; break;
      case Axis::AR: p.theta_z_deg = deg; break;
    }
    return p;
  }

  void validate() const {
    for (double v : {theta_x_deg, theta_y_deg, theta_z_deg}) {
      if (!std::isfinite(v) || v <= -180.0 || v > 180.0)
        throw DomainError("pose angle outside (-180, 180] degrees: " + std::to_string(v));
    }
  }

  bool operator==(const HeadPose&) const = default;
};

enum class ActuatorGroup { front_long, front_short, back_middle, back_cross_left, back_cross_right };

inline std::string_view to_string(ActuatorGroup g) {
  switch (g) {
    case ActuatorGroup::front_long: return "front_long";
    case ActuatorGroup::front_short: return "front_short";
    case ActuatorGroup::back_middle: return "back_middle";
    case ActuatorGroup::back_cross_left: return "back_cross_left";
    case ActuatorGroup::back_cross_right: return "back_cross_right";
  }
  return "?";
}

inline ActuatorGroup parse_actuator_group(std::string_view s) {
  for (auto g : {ActuatorGroup::front_long, ActuatorGroup::front_short, ActuatorGroup::back_middle,
                 ActuatorGroup::back_cross_left, ActuatorGroup::back_cross_right})
    if (to_string(g) == s) return g;
  throw ConfigError("unknown actuator group '" + std::string(s) + "'");
}

/// Straight-line route from a vest anchor, through fixed routing points, to a
/// mount on the head. Only the final segment (head mount to the nearest fixed
/// point) sets the line of action; the others contribute length.
struct ActuatorPath {
  Vec3 head_mount = Vec3::Zero();        // head frame
  std::vector<Vec3> waypoints;           // torso frame, ordered vest -> head
  Vec3 vest_mount = Vec3::Zero();        // torso frame
  int channel = 1;                       // pressure channel, 1-based
  ActuatorGroup group = ActuatorGroup::front_long;

  const Vec3& last_fixed_point() const {
    return waypoints.empty() ? vest_mount : waypoints.back();
  }
};

struct BodyParams {
  double mass_kg = 4.6;
  Vec3 com_offset_m{0.0, 0.0, 0.17};
  double gravity = kStandardGravity;

  void validate() const {
    if (!(mass_kg > 0.0)) throw ConfigError("body mass must be positive");
    if (!(gravity >= 0.0)) throw ConfigError("gravity must be non-negative");
  }
};

struct Actuator {
  ActuatorPath path;
  FpamParams fpam;
};

struct SuitConfig {
  std::string name = "suit";
  BodyParams body;
  std::vector<Actuator> actuators;

  std::size_t size() const { return actuators.size(); }

  void validate() const {
    body.validate();
    for (std::size_t i = 0; i < actuators.size(); ++i) {
      const auto& a = actuators[i];
      if (a.path.channel < 1 || a.path.channel > kNumChannels)
        throw ConfigError("actuator " + std::to_string(i) + " has channel outside 1..5");
      if (a.path.head_mount.norm() == 0.0)
        throw ConfigError("actuator " + std::to_string(i) + " head mount is at the joint centre");
      a.fpam.validate();
    }
  }
};

using Jacobian = Eigen::Matrix<double, 3, Eigen::Dynamic>;

inline Mat3 rot_x(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 m;
  m << 1, 0, 0, 0, c, -s, 0, s, c;
  return m;
}

inline Mat3 rot_y(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 m;
  m << c, 0, s, 0, 1, 0, -s, 0, c;
  return m;
}

inline Mat3 rot_z(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}

/// Head-to-torso rotation for a body-fixed x-y-z Euler triple.
inline Mat3 rotation(const HeadPose& pose) {
  return rot_x(deg2rad(pose.theta_x_deg)) * rot_y(deg2rad(pose.theta_y_deg)) *
         rot_z(deg2rad(pose.theta_z_deg));
}

/// Inverse of rotation(): extracts the x-y-z Euler triple. Requires
/// |R(0,2)| < 1 (theta_y away from +-90 degrees).
inline HeadPose euler_xyz(const Mat3& R) {
  const double sy = std::clamp(R(0, 2), -1.0, 1.0);
  HeadPose p;
  p.theta_y_deg = rad2deg(std::asin(sy));
  p.theta_x_deg = rad2deg(std::atan2(-R(1, 2), R(2, 2)));
  p.theta_z_deg = rad2deg(std::atan2(-R(0, 1), R(0, 0)));
  return p;
}

struct ActuatorState {
  double length_m;
  double eps;
  Vec3 moment_arm;   // (R b) x c_hat, metres
  Vec3 direction;    // c_hat, unit, from head mount towards the last fixed point
  Vec3 head_point;   // R b in the torso frame
};

namespace detail {

inline ActuatorState actuator_state_rotated(const ActuatorPath& path, const FpamParams& params,
                                            const Mat3& R) {
  const Vec3 head = R * path.head_mount;
  const Vec3& anchor = path.last_fixed_point();
  const Vec3 last = anchor - head;
  const double last_len = last.norm();
  if (!(last_len > 1e-12))
    throw GeometryError("head mount coincides with its nearest routing point");

  double length = last_len;
  Vec3 prev = path.vest_mount;
  for (const auto& w : path.waypoints) {
    length += (w - prev).norm();
    prev = w;
  }
  ActuatorState st;
  st.length_m = length;
  st.eps = contraction(params, length);
  st.direction = last / last_len;
  st.moment_arm = head.cross(st.direction);
  st.head_point = head;
  return st;
}

}  // namespace detail

inline ActuatorState actuator_state(const ActuatorPath& path, const FpamParams& params,
                                    const HeadPose& pose) {
  pose.validate();
  return detail::actuator_state_rotated(path, params, rotation(pose));
}

inline std::vector<ActuatorState> actuator_states(const SuitConfig& suit, const Mat3& R) {
  std::vector<ActuatorState> out;
  out.reserve(suit.size());
  for (const auto& a : suit.actuators)
    out.push_back(detail::actuator_state_rotated(a.path, a.fpam, R));
  return out;
}

/// 3 x N matrix whose columns are b_i x c_i; torque = J * tensions.
inline Jacobian jacobian(const SuitConfig& suit, const HeadPose& pose) {
  pose.validate();
  const Mat3 R = rotation(pose);
  Jacobian J(3, static_cast<Eigen::Index>(suit.size()));
  for (std::size_t i = 0; i < suit.size(); ++i)
    J.col(static_cast<Eigen::Index>(i)) =
        detail::actuator_state_rotated(suit.actuators[i].path, suit.actuators[i].fpam, R).moment_arm;
  return J;
}

inline Vec3 gravity_torque(const BodyParams& body, const Mat3& R) {
  return (R * body.com_offset_m).cross(Vec3(0.0, 0.0, -body.mass_kg * body.gravity));
}

inline Vec3 gravity_torque(const BodyParams& body, const HeadPose& pose) {
  return gravity_torque(body, rotation(pose));
}

/// Reflection across the sagittal (y-z) plane.
inline Vec3 mirror_x(const Vec3& v) { return {-v.x(), v.y(), v.z()}; }

inline ActuatorPath mirror_path(const ActuatorPath& path) {
  ActuatorPath m = path;
  m.head_mount = mirror_x(path.head_mount);
  m.vest_mount = mirror_x(path.vest_mount);
  for (auto& w : m.waypoints) w = mirror_x(w);
  return m;
}

}  // namespace fpam_exo
