#pragma once

// Per-pose gravity-compensation pressure solve and the three feasibility
// conditions: reachable (no actuator over-stretched), gravity compensation
// within tolerance and pressure limits, and limited neck compression.

#include <algorithm>
#include <limits>
#include <optional>

#include "fpam_exo/nnls.hpp"
#include "fpam_exo/statics.hpp"

namespace fpam_exo {

struct GravityCompOptions {
  double omega = 0.06;
  double relative_tolerance = 0.25;
  double absolute_tolerance_nm = 0.01;
};

enum class LimitingCondition { none, reach, torque_error, pressure_limit, solver };

inline std::string_view to_string(LimitingCondition c) {
  switch (c) {
    case LimitingCondition::none: return "none";
    case LimitingCondition::reach: return "reach";
    case LimitingCondition::torque_error: return "torque_error";
    case LimitingCondition::pressure_limit: return "pressure_limit";
    case LimitingCondition::solver: return "solver";
  }
  return "?";
}

struct FeasibilityReport {
  HeadPose pose;
  bool reachable = false;
  bool grav_ok = false;
  std::optional<PressureVector> pressures;
  Vec3 torque_error = Vec3::Zero();
  Vec3 tau_gravity = Vec3::Zero();
  /// ||torque_error|| / ||tau_gravity||; infinity when gravity torque is zero.
  double relative_error = std::numeric_limits<double>::infinity();
  double compression_n = 0.0;
  double min_eps = 0.0;
  /// First failing condition (reach before torque before pressure).
  LimitingCondition limiting_condition = LimitingCondition::none;
};

/// Channel ceiling: the smallest P_max among the actuators on that channel.
inline PressureVector channel_limits(const SuitConfig& suit) {
  PressureVector lim;
  lim.fill(std::numeric_limits<double>::infinity());
  for (const auto& a : suit.actuators) {
    auto& l = lim[static_cast<std::size_t>(a.path.channel - 1)];
    l = std::min(l, a.fpam.P_max_kpa);
  }
  return lim;
}

inline FeasibilityReport solve_pose(const SuitConfig& suit, const HeadPose& pose,
                                    const GravityCompOptions& opt = {}) {
  pose.validate();
  const Mat3 R = rotation(pose);
  const auto states = actuator_states(suit, R);

  FeasibilityReport rep;
  rep.pose = pose;
  rep.min_eps = std::numeric_limits<double>::infinity();
  Vec3 tau_elastic = Vec3::Zero();
  for (std::size_t i = 0; i < suit.size(); ++i) {
    rep.min_eps = std::min(rep.min_eps, states[i].eps);
    tau_elastic += states[i].moment_arm * elastic_force(suit.actuators[i].fpam, states[i].eps);
  }
  rep.reachable = rep.min_eps >= 0.0;
  rep.tau_gravity = gravity_torque(suit.body, R);

  nnls::Problem prob;
  prob.A = coefficient_matrix(suit, states);
  prob.b = -tau_elastic - rep.tau_gravity;
  prob.omega = opt.omega;
  const auto sol = nnls::solve(prob);

  std::vector<double> tensions(suit.size());
  const Vec3 u = neck_axis(suit.body, R);
  if (sol.converged) {
    PressureVector p;
    for (int k = 0; k < kNumChannels; ++k) p[static_cast<std::size_t>(k)] = sol.x(k);
    rep.pressures = p;
    rep.torque_error = prob.A * sol.x - prob.b;
    for (std::size_t i = 0; i < suit.size(); ++i) {
      const auto& act = suit.actuators[i];
      tensions[i] = force(act.fpam, states[i].eps, p[static_cast<std::size_t>(act.path.channel - 1)]);
    }
  } else {
    rep.torque_error = tau_elastic + rep.tau_gravity;
    for (std::size_t i = 0; i < suit.size(); ++i)
      tensions[i] = elastic_force(suit.actuators[i].fpam, states[i].eps);
  }
  rep.compression_n = compression_force(states, tensions, u);

  const double grav_norm = rep.tau_gravity.norm();
  const double err_norm = rep.torque_error.norm();
  if (grav_norm > 0.0) rep.relative_error = err_norm / grav_norm;
  const bool torque_ok =
      sol.converged && (rep.relative_error <= opt.relative_tolerance || err_norm <= opt.absolute_tolerance_nm);
  bool pressure_ok = false;
  if (rep.pressures) {
    const auto lim = channel_limits(suit);
    pressure_ok = true;
    for (int k = 0; k < kNumChannels; ++k)
      if ((*rep.pressures)[static_cast<std::size_t>(k)] > lim[static_cast<std::size_t>(k)]) pressure_ok = false;
  }
  rep.grav_ok = torque_ok && pressure_ok;

  if (!rep.reachable)
    rep.limiting_condition = LimitingCondition::reach;
  else if (!sol.converged)
    rep.limiting_condition = LimitingCondition::solver;
  else if (!torque_ok)
    rep.limiting_condition = LimitingCondition::torque_error;
  else if (!pressure_ok)
    rep.limiting_condition = LimitingCondition::pressure_limit;
  return rep;
}

struct ConditionTriple {
  bool reachable;
  bool grav_ok;
  bool compression_ok;
};

inline ConditionTriple classify(const FeasibilityReport& rep, std::optional<double> compression_limit_n) {
  return {rep.reachable, rep.grav_ok,
          !compression_limit_n || rep.compression_n <= *compression_limit_n};
}

inline ConditionTriple classify(const SuitConfig& suit, const HeadPose& pose,
                                std::optional<double> compression_limit_n,
                                const GravityCompOptions& opt = {}) {
  return classify(solve_pose(suit, pose, opt), compression_limit_n);
}

}  // namespace fpam_exo
