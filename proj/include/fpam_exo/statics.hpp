#pragma once

// Quasi-static torque balance on the head: actuator tensions, the Jacobian
// torque they produce, the elastic (zero-pressure) part of it, gravity, and
// the compression force the tensions press along the neck.

#include <array>
#include <vector>

#include "fpam_exo/geometry.hpp"

namespace fpam_exo {

/// Regulator pressures in kPa, one per channel (channel k at index k-1).
using PressureVector = std::array<double, kNumChannels>;

inline PressureVector uniform_pressure(double kpa) {
  PressureVector p;
  p.fill(kpa);
  return p;
}

using CoefficientMatrix = Eigen::Matrix<double, 3, kNumChannels>;

struct StaticsBreakdown {
  Vec3 tau_fpam = Vec3::Zero();
  Vec3 tau_elastic = Vec3::Zero();
  Vec3 tau_gravity = Vec3::Zero();
  /// Newtons; positive when the tensions press the head towards the torso.
  double compression_n = 0.0;
  std::vector<double> tensions;
  std::vector<double> epsilons;
};

enum class PressureCheck { enforce_limits, unchecked };

/// Unit vector from the joint towards the head CoM in the torso frame.
inline Vec3 neck_axis(const BodyParams& body, const Mat3& R) {
  const double d = body.com_offset_m.norm();
  if (d == 0.0) return R.col(2);
  return R * body.com_offset_m / d;
}

/// Compression along the neck: -sum_i F_i (c_i . u). The tensions point from
/// the head mounts towards the torso, so downward pulls count positive.
inline double compression_force(const std::vector<ActuatorState>& states,
                                const std::vector<double>& tensions, const Vec3& neck_dir) {
  double c = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i)
    c -= tensions[i] * states[i].direction.dot(neck_dir);
  return c;
}

namespace detail {

inline double channel_pressure(const Actuator& a, const PressureVector& p, PressureCheck check) {
  const double v = p[static_cast<std::size_t>(a.path.channel - 1)];
  if (!std::isfinite(v) || v < 0.0)
    throw DomainError("channel " + std::to_string(a.path.channel) + " pressure must be >= 0 kPa");
  if (check == PressureCheck::enforce_limits && v > a.fpam.P_max_kpa)
    throw DomainError("channel " + std::to_string(a.path.channel) + " pressure " +
                      std::to_string(v) + " kPa exceeds P_max");
  return v;
}

}  // namespace detail

inline StaticsBreakdown evaluate(const SuitConfig& suit, const HeadPose& pose,
                                 const PressureVector& pressures,
                                 PressureCheck check = PressureCheck::enforce_limits) {
  pose.validate();
  const Mat3 R = rotation(pose);
  const auto states = actuator_states(suit, R);

  StaticsBreakdown out;
  out.tensions.resize(suit.size());
  out.epsilons.resize(suit.size());
  for (std::size_t i = 0; i < suit.size(); ++i) {
    const auto& act = suit.actuators[i];
    const double p = detail::channel_pressure(act, pressures, check);
    const double f = force(act.fpam, states[i].eps, p);
    const double f_el = elastic_force(act.fpam, states[i].eps);
    out.tensions[i] = f;
    out.epsilons[i] = states[i].eps;
    out.tau_fpam += states[i].moment_arm * f;
    out.tau_elastic += states[i].moment_arm * f_el;
  }
  out.tau_gravity = gravity_torque(suit.body, R);
  out.compression_n = compression_force(states, out.tensions, neck_axis(suit.body, R));
  return out;
}

/// Maps channel pressures (kPa) to the pressure-driven torque:
/// tau_fpam - tau_elastic = A p.
inline CoefficientMatrix coefficient_matrix(const SuitConfig& suit, const std::vector<ActuatorState>& states) {
  CoefficientMatrix A = CoefficientMatrix::Zero();
  for (std::size_t i = 0; i < suit.size(); ++i) {
    const auto& act = suit.actuators[i];
    const double gain = ideal_force_coefficient(act.fpam, states[i].eps) * kPascalPerKilopascal;
    A.col(act.path.channel - 1) += states[i].moment_arm * gain;
  }
  return A;
}

inline CoefficientMatrix coefficient_matrix(const SuitConfig& suit, const HeadPose& pose) {
  pose.validate();
  return coefficient_matrix(suit, actuator_states(suit, rotation(pose)));
}

}  // namespace fpam_exo
