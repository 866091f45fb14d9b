#pragma once

// Torque-profile comparison of actuator placement variants on the right side
// of the head:
//   1  two front actuators (long + short)      evaluated on FE and LD
//   2  one front actuator (long)               evaluated on FE and LD
//   3  crossed back actuator, vest anchor back evaluated on AR
//   4  "V" back actuator (head mid-point), back
//   5  crossed, vest routing/anchor mirrored to the front
//   6  "V", front

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "fpam_exo/statics.hpp"

namespace fpam_exo {

struct PlacementConfig {
  int id = 0;
  std::string label;
  std::vector<Actuator> actuators;
  std::vector<Axis> axes;
};

/// Direction in which each evaluated axis is "promoted" by right-side
/// placements: flexion (-x), rightward lateral deviation (+y), right turn (-z).
inline double promoting_sign(Axis a) {
  switch (a) {
    case Axis::FE: return -1.0;
    case Axis::LD: return 1.0;
    case Axis::AR: return -1.0;
  }
  return 1.0;
}

struct TorqueProfile {
  int config_id = 0;
  Axis axis = Axis::FE;
  double pressure_kpa = 0.0;
  std::vector<double> angles_deg;
  std::vector<double> torque_nm;  // signed component along the axis
  std::vector<bool> valid;        // all config actuators at eps >= 0
  /// Trapezoid integral of max(0, sign * torque) over the valid set, N*m*deg,
  /// with valid-set boundaries located by bisection.
  double integral_nm_deg = 0.0;
  double angle_range_deg = 0.0;
  double torque_at_zero_nm = 0.0;
  bool valid_at_zero = false;

  double promoting_at_zero() const {
    return std::max(0.0, promoting_sign(axis) * torque_at_zero_nm);
  }
};

namespace detail {

struct AxisSample {
  double torque;
  double min_eps;
};

inline AxisSample sample_config(const std::vector<Actuator>& acts, Axis axis, double deg, double pressure_kpa) {
  const Mat3 R = rotation(HeadPose::along(axis, deg));
  Vec3 tau = Vec3::Zero();
  double min_eps = std::numeric_limits<double>::infinity();
  for (const auto& a : acts) {
    const auto st = detail::actuator_state_rotated(a.path, a.fpam, R);
    tau += st.moment_arm * force(a.fpam, st.eps, pressure_kpa);
    min_eps = std::min(min_eps, st.eps);
  }
  return {tau(axis_index(axis)), min_eps};
}

// Locate the angle between a valid and an invalid sample where min eps = 0.
inline double valid_boundary(const std::vector<Actuator>& acts, Axis axis, double valid_deg,
                             double invalid_deg, double pressure_kpa) {
  double good = valid_deg, bad = invalid_deg;
  for (int i = 0; i < 80 && std::abs(bad - good) > 1e-12; ++i) {
    const double mid = 0.5 * (good + bad);
    if (sample_config(acts, axis, mid, pressure_kpa).min_eps >= 0.0) good = mid;
    else bad = mid;
  }
  return good;
}

}  // namespace detail

inline TorqueProfile torque_profile(const PlacementConfig& config, Axis axis, double pressure_kpa,
                                    double resolution_deg) {
  if (!(resolution_deg > 0.0)) throw DomainError("resolution must be positive");
  if (!(pressure_kpa >= 0.0)) throw DomainError("pressure must be non-negative");
  const AngleRange bio = biological_range(axis);
  const auto n = static_cast<std::size_t>(std::llround(bio.length() / resolution_deg)) + 1;

  TorqueProfile prof;
  prof.config_id = config.id;
  prof.axis = axis;
  prof.pressure_kpa = pressure_kpa;
  const double sgn = promoting_sign(axis);
  for (std::size_t i = 0; i < std::max<std::size_t>(n, 2); ++i) {
    const double a = bio.min_deg + bio.length() * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n, 2) - 1);
    const auto s = detail::sample_config(config.actuators, axis, a, pressure_kpa);
    prof.angles_deg.push_back(a);
    prof.torque_nm.push_back(s.torque);
    prof.valid.push_back(s.min_eps >= 0.0);
  }

  auto promoting = [&](double t) { return std::max(0.0, sgn * t); };
  const std::size_t m = prof.angles_deg.size();
  std::size_t i = 0;
  while (i < m) {
    if (!prof.valid[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < m && prof.valid[j + 1]) ++j;
    std::vector<std::pair<double, double>> pts;
    if (i > 0) {
      const double b = detail::valid_boundary(config.actuators, axis, prof.angles_deg[i], prof.angles_deg[i - 1], pressure_kpa);
      pts.emplace_back(b, detail::sample_config(config.actuators, axis, b, pressure_kpa).torque);
    }
    for (std::size_t k = i; k <= j; ++k) pts.emplace_back(prof.angles_deg[k], prof.torque_nm[k]);
    if (j + 1 < m) {
      const double b = detail::valid_boundary(config.actuators, axis, prof.angles_deg[j], prof.angles_deg[j + 1], pressure_kpa);
      pts.emplace_back(b, detail::sample_config(config.actuators, axis, b, pressure_kpa).torque);
    }
    for (std::size_t k = 1; k < pts.size(); ++k)
      prof.integral_nm_deg += 0.5 * (promoting(pts[k - 1].second) + promoting(pts[k].second)) *
                              (pts[k].first - pts[k - 1].first);
    prof.angle_range_deg += pts.back().first - pts.front().first;
    i = j + 1;
  }

  const auto zero = detail::sample_config(config.actuators, axis, 0.0, pressure_kpa);
  prof.torque_at_zero_nm = zero.torque;
  prof.valid_at_zero = zero.min_eps >= 0.0;
  return prof;
}

namespace detail {

inline const Actuator* find_right(const SuitConfig& suit, ActuatorGroup g) {
  const Actuator* best = nullptr;
  for (const auto& a : suit.actuators)
    if (a.path.group == g && a.path.head_mount.x() >= 0.0 && !best) best = &a;
  return best;
}

inline double neutral_length(const ActuatorPath& p) {
  FpamParams unit;
  unit.L0_m = 1.0;
  return detail::actuator_state_rotated(p, unit, Mat3::Identity()).length_m;
}

// Keep the base actuator's neutral contraction when its route changes; each
// fabricated actuator is cut to length for its placement.
inline Actuator rerouted(const Actuator& base, ActuatorPath path) {
  const double eps0 = contraction(base.fpam, neutral_length(base.path));
  Actuator a{std::move(path), base.fpam};
  a.fpam.L0_m = neutral_length(a.path) / (1.0 - eps0);
  return a;
}

inline ActuatorPath mirror_frontal(ActuatorPath p) {
  p.vest_mount.y() = -p.vest_mount.y();
  for (auto& w : p.waypoints) w.y() = -w.y();
  return p;
}

inline ActuatorPath to_midpoint(ActuatorPath p) {
  const Vec3 b = p.head_mount;
  p.head_mount = Vec3(0.0, -std::hypot(b.x(), b.y()), b.z());
  return p;
}

}  // namespace detail

/// The six standard placements derived from the right-side actuators of `suit`.
/// The crossed back actuator used is the one mounted on the right of the head
/// (group back_cross_right), which pulls towards the left of the vest.
inline std::vector<PlacementConfig> standard_placements(const SuitConfig& suit) {
  const Actuator* fl = detail::find_right(suit, ActuatorGroup::front_long);
  const Actuator* fs = detail::find_right(suit, ActuatorGroup::front_short);
  const Actuator* bx = detail::find_right(suit, ActuatorGroup::back_cross_right);
  if (!fl || !fs || !bx)
    throw ConfigError("suit lacks right-side front_long, front_short or back_cross_right actuators");

  std::vector<PlacementConfig> out;
  out.push_back({1, "two front actuators", {*fl, *fs}, {Axis::FE, Axis::LD}});
  out.push_back({2, "one front actuator", {*fl}, {Axis::FE, Axis::LD}});
  out.push_back({3, "crossed back, anchored back", {*bx}, {Axis::AR}});
  out.push_back({4, "V back, anchored back", {detail::rerouted(*bx, detail::to_midpoint(bx->path))}, {Axis::AR}});
  out.push_back({5, "crossed back, anchored front", {detail::rerouted(*bx, detail::mirror_frontal(bx->path))}, {Axis::AR}});
  out.push_back({6, "V back, anchored front",
                 {detail::rerouted(*bx, detail::mirror_frontal(detail::to_midpoint(bx->path)))}, {Axis::AR}});
  return out;
}

inline double default_design_pressure(const PlacementConfig& c) {
  double p = std::numeric_limits<double>::infinity();
  for (const auto& a : c.actuators) p = std::min(p, a.fpam.P_max_kpa);
  return std::isfinite(p) ? p : 0.0;
}

struct ComparisonRow {
  TorqueProfile profile;
  int rank = 0;  // 1 = best within its axis
};

/// Profiles for every (config, axis) pair, ranked within each axis by the
/// promoting torque at 0 degrees, then by torque integral, then by id.
inline std::vector<ComparisonRow> compare(const std::vector<PlacementConfig>& configs,
                                          double resolution_deg = 0.25,
                                          std::optional<double> pressure_kpa = std::nullopt) {
  std::vector<ComparisonRow> rows;
  for (const auto& c : configs)
    for (Axis ax : c.axes)
      rows.push_back({torque_profile(c, ax, pressure_kpa.value_or(default_design_pressure(c)), resolution_deg), 0});

  std::sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    const auto& pa = a.profile;
    const auto& pb = b.profile;
    if (pa.axis != pb.axis) return axis_index(pa.axis) < axis_index(pb.axis);
    if (pa.promoting_at_zero() != pb.promoting_at_zero()) return pa.promoting_at_zero() > pb.promoting_at_zero();
    if (pa.integral_nm_deg != pb.integral_nm_deg) return pa.integral_nm_deg > pb.integral_nm_deg;
    return pa.config_id < pb.config_id;
  });
  std::map<Axis, int> next;
  for (auto& r : rows) r.rank = ++next[r.profile.axis];
  return rows;
}

}  // namespace fpam_exo
