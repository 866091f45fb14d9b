#pragma once

// Closed-loop simulation: the head as a 3-DoF rigid body on a spherical
// joint, driven by fPAM torques with first-order pneumatic lag, under an
// antagonistic per-axis feedback controller.

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "fpam_exo/metrics.hpp"
#include "fpam_exo/statics.hpp"

namespace fpam_exo {

class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlantParams {
  /// About the joint, head frame. x/y: 4.6 kg point mass at 0.17 m.
  Mat3 inertia = Eigen::Vector3d(0.133, 0.133, 0.02).asDiagonal();
  Vec3 damping{0.5, 0.5, 0.5};  // N*m*s/rad, body axes
  double pneumatic_time_constant_s = 0.3;
  double timestep_s = 0.005;
  /// Constant torque in the torso frame (test loads).
  Vec3 external_torque = Vec3::Zero();

  void validate() const {
    if (!(timestep_s > 0.0)) throw ConfigError("plant timestep must be positive");
    if (!(pneumatic_time_constant_s > 0.0)) throw ConfigError("pneumatic time constant must be positive");
    Eigen::SelfAdjointEigenSolver<Mat3> es(inertia);
    if (!(es.eigenvalues().minCoeff() > 0.0) || !inertia.isApprox(inertia.transpose()))
      throw ConfigError("plant inertia must be symmetric positive definite");
    if (!(damping.minCoeff() >= 0.0)) throw ConfigError("plant damping must be non-negative");
  }
};

struct PlantState {
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();  // head -> torso
  Vec3 angular_velocity = Vec3::Zero();  // rad/s, head frame
  PressureVector pressures{};            // actual regulator output, kPa
  double time_s = 0.0;

  HeadPose pose() const { return euler_xyz(orientation.toRotationMatrix()); }
};

namespace detail {

struct Derivative {
  Eigen::Vector4d dq;  // w, x, y, z
  Vec3 domega;
  PressureVector dp;
};

inline Derivative plant_derivative(const Eigen::Quaterniond& q, const Vec3& w, const PressureVector& p,
                                   const PressureVector& cmd, const PlantParams& plant, const SuitConfig& suit) {
  const Eigen::Quaterniond qn = q.normalized();
  const Mat3 R = qn.toRotationMatrix();
  Vec3 tau = gravity_torque(suit.body, R) + plant.external_torque;
  for (const auto& a : suit.actuators) {
    const auto st = detail::actuator_state_rotated(a.path, a.fpam, R);
    const double pk = std::max(0.0, p[static_cast<std::size_t>(a.path.channel - 1)]);
    tau += st.moment_arm * force(a.fpam, st.eps, pk);
  }
  const Vec3 tau_body = R.transpose() * tau - plant.damping.cwiseProduct(w);
  Derivative d;
  d.domega = plant.inertia.ldlt().solve(tau_body - w.cross(plant.inertia * w));
  const Eigen::Quaterniond wq(0.0, w.x(), w.y(), w.z());
  const Eigen::Quaterniond qd = q * wq;
  d.dq = 0.5 * Eigen::Vector4d(qd.w(), qd.x(), qd.y(), qd.z());
  for (std::size_t k = 0; k < p.size(); ++k) d.dp[k] = (cmd[k] - p[k]) / plant.pneumatic_time_constant_s;
  return d;
}

}  // namespace detail

/// One fixed RK4 step of length plant.timestep_s with the commanded pressures
/// held constant; the orientation is renormalised afterwards.
inline PlantState step(const PlantState& s, const PressureVector& commanded, const PlantParams& plant,
                       const SuitConfig& suit) {
  const double h = plant.timestep_s;
  auto qvec = [](const Eigen::Quaterniond& q) { return Eigen::Vector4d(q.w(), q.x(), q.y(), q.z()); };
  auto quat = [](const Eigen::Vector4d& v) { return Eigen::Quaterniond(v(0), v(1), v(2), v(3)); };
  auto add_p = [](const PressureVector& p, const PressureVector& d, double k) {
    PressureVector r;
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i] + k * d[i];
    return r;
  };

  const Eigen::Vector4d q0 = qvec(s.orientation);
  auto deriv = [&](const Eigen::Quaterniond& q, const Vec3& w, const PressureVector& p) {
    try {
      return detail::plant_derivative(q, w, p, commanded, plant, suit);
    } catch (const GeometryError& e) {
      throw SimulationFault(std::string(e.what()) + " at t = " + std::to_string(s.time_s) + " s");
    }
  };
  const auto k1 = deriv(s.orientation, s.angular_velocity, s.pressures);
  const auto k2 = deriv(quat(q0 + 0.5 * h * k1.dq), s.angular_velocity + 0.5 * h * k1.domega,
                        add_p(s.pressures, k1.dp, 0.5 * h));
  const auto k3 = deriv(quat(q0 + 0.5 * h * k2.dq), s.angular_velocity + 0.5 * h * k2.domega,
                        add_p(s.pressures, k2.dp, 0.5 * h));
  const auto k4 = deriv(quat(q0 + h * k3.dq), s.angular_velocity + h * k3.domega,
                        add_p(s.pressures, k3.dp, h));

  PlantState n;
  const Eigen::Vector4d q1 = q0 + (h / 6.0) * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
  n.orientation = quat(q1).normalized();
  n.angular_velocity = s.angular_velocity + (h / 6.0) * (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega);
  for (std::size_t k = 0; k < n.pressures.size(); ++k)
    n.pressures[k] = s.pressures[k] + (h / 6.0) * (k1.dp[k] + 2.0 * k2.dp[k] + 2.0 * k3.dp[k] + k4.dp[k]);
  n.time_s = s.time_s + h;

  if (!q1.allFinite() || !n.angular_velocity.allFinite() ||
      !std::all_of(n.pressures.begin(), n.pressures.end(), [](double v) { return std::isfinite(v); }))
    throw SimulationFault("non-finite plant state at t = " + std::to_string(n.time_s) + " s");
  return n;
}

/// Feedback loop for one axis. Positive error (reference above measurement)
/// raises the agonist channels and lowers the antagonist channels.
struct AxisLoop {
  Axis axis = Axis::FE;
  double kp_kpa_per_deg = 0.0;
  double ki_kpa_per_deg_s = 0.0;
  std::vector<int> agonist;     // channels, 1-based
  std::vector<int> antagonist;  // channels, 1-based
};

struct ControllerConfig {
  std::vector<AxisLoop> loops;
  double initial_pressure_kpa = 34.5;
  double min_pressure_kpa = 0.0;
  double max_pressure_kpa = 138.0;
  double rate_hz = 100.0;

  void validate() const {
    if (loops.empty()) throw ConfigError("controller has no active axes");
    if (!(rate_hz > 0.0)) throw ConfigError("controller rate must be positive");
    if (!(min_pressure_kpa >= 0.0 && max_pressure_kpa > min_pressure_kpa))
      throw ConfigError("controller pressure bounds are invalid");
    std::set<int> claimed;
    std::set<Axis> axes;
    for (const auto& l : loops) {
      if (!axes.insert(l.axis).second)
        throw ConfigError("axis " + std::string(axis_name(l.axis)) + " has more than one loop");
      for (const auto* set : {&l.agonist, &l.antagonist}) {
        for (int ch : *set) {
          if (ch < 1 || ch > kNumChannels) throw ConfigError("controller channel outside 1..5");
          if (!claimed.insert(ch).second)
            throw ConfigError("channel " + std::to_string(ch) + " receives input from more than one loop");
        }
      }
    }
  }
};

/// Integral accumulators, one per loop, in degree-seconds.
struct ControllerState {
  std::vector<double> integral;
};

/// Antagonistic feedback law. Pass a ControllerState and the update interval
/// to accumulate integral action; without one the law is purely proportional.
inline PressureVector antagonistic_controller(const HeadPose& reference, const HeadPose& measured,
                                              const ControllerConfig& config, ControllerState* state = nullptr,
                                              double dt_s = 0.0) {
  config.validate();
  PressureVector p = uniform_pressure(config.initial_pressure_kpa);
  if (state && state->integral.size() != config.loops.size()) state->integral.assign(config.loops.size(), 0.0);
  for (std::size_t i = 0; i < config.loops.size(); ++i) {
    const auto& l = config.loops[i];
    const double e = reference.angle(l.axis) - measured.angle(l.axis);
    double u = l.kp_kpa_per_deg * e;
    if (state) {
      state->integral[i] += e * dt_s;
      u += l.ki_kpa_per_deg_s * state->integral[i];
    }
    for (int ch : l.agonist) p[static_cast<std::size_t>(ch - 1)] += u;
    for (int ch : l.antagonist) p[static_cast<std::size_t>(ch - 1)] -= u;
  }
  for (double& v : p) v = std::clamp(v, config.min_pressure_kpa, config.max_pressure_kpa);
  return p;
}

struct TrajectorySpec {
  Axis axis = Axis::FE;
  double amplitude_deg = 20.0;
  double period_s = 25.0;
  int cycles = 4;

  double reference(double t) const { return amplitude_deg * std::sin(2.0 * kPi * t / period_s); }
};

struct TrajectoryResult {
  Axis axis = Axis::FE;
  double sample_interval_s = 0.0;
  std::vector<double> time_s;
  std::vector<double> reference_deg;
  std::vector<double> measured_deg;
  std::vector<HeadPose> poses;
  std::vector<PressureVector> commanded_kpa;
  std::vector<PressureVector> actual_kpa;
  TrackingMetrics metrics;
};

class TrackingFault : public SimulationFault {
 public:
  TrackingFault(const std::string& what, TrajectoryResult partial)
      : SimulationFault(what), partial_(std::move(partial)) {}
  const TrajectoryResult& partial() const { return partial_; }

 private:
  TrajectoryResult partial_;
};

/// Runs the reference trajectory from the neutral pose with every channel at
/// the controller's initial pressure. Samples are recorded at each controller
/// update.
inline TrajectoryResult track(const SuitConfig& suit, const PlantParams& plant, const ControllerConfig& controller,
                              const TrajectorySpec& spec) {
  plant.validate();
  controller.validate();
  if (!(spec.period_s > 0.0) || spec.cycles < 1) throw ConfigError("trajectory period and cycles must be positive");

  const double control_dt = 1.0 / controller.rate_hz;
  const long substeps = std::max(1L, std::lround(control_dt / plant.timestep_s));
  PlantParams p = plant;
  p.timestep_s = control_dt / static_cast<double>(substeps);
  const long updates = std::lround(spec.period_s * spec.cycles / control_dt);

  TrajectoryResult r;
  r.axis = spec.axis;
  r.sample_interval_s = control_dt;
  PlantState s;
  s.pressures = uniform_pressure(controller.initial_pressure_kpa);
  ControllerState cs;
  try {
    for (long k = 0; k <= updates; ++k) {
      const double t = static_cast<double>(k) * control_dt;
      const HeadPose measured = s.pose();
      const HeadPose reference = HeadPose::along(spec.axis, spec.reference(t));
      const PressureVector cmd = antagonistic_controller(reference, measured, controller, &cs, k == 0 ? 0.0 : control_dt);
      r.time_s.push_back(t);
      r.reference_deg.push_back(reference.angle(spec.axis));
      r.measured_deg.push_back(measured.angle(spec.axis));
      r.poses.push_back(measured);
      r.commanded_kpa.push_back(cmd);
      r.actual_kpa.push_back(s.pressures);
      if (k == updates) break;
      for (long j = 0; j < substeps; ++j) s = step(s, cmd, p, suit);
      s.time_s = static_cast<double>(k + 1) * control_dt;
    }
  } catch (const SimulationFault& e) {
    throw TrackingFault(e.what(), std::move(r));
  }
  r.metrics = metrics(r.reference_deg, r.measured_deg, control_dt, spec.period_s);
  return r;
}

}  // namespace fpam_exo
