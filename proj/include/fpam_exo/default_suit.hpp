#pragma once

// Shipped seven-actuator suit. Mount coordinates are a plausible symmetric
// layout (head ring radius ~9 cm, shoulders ~40 cm apart), not measured data:
//
//   ch 1  right front pair: long (routed over the chest) + short (to shoulder)
//   ch 2  left front pair
//   ch 3  back middle
//   ch 4  crossed back, head mount right -> vest left (turns the head right)
//   ch 5  crossed back, head mount left  -> vest right (turns the head left)
//
// Each actuator's L0 is set from a target contraction at the neutral pose,
// standing in for the pretension adjusted when the suit is fitted.

#include <vector>

#include "fpam_exo/geometry.hpp"
#include "fpam_exo/simulation.hpp"

namespace fpam_exo {

struct RouteSpec {
  ActuatorPath path;
  double neutral_eps;
};

/// Fully stretched length that puts `path` at contraction `neutral_eps` when
/// the head is at the neutral pose.
inline double stretched_length_for(const ActuatorPath& path, double neutral_eps) {
  FpamParams unit;
  unit.L0_m = 1.0;
  const double len = detail::actuator_state_rotated(path, unit, Mat3::Identity()).length_m;
  return len / (1.0 - neutral_eps);
}

inline std::vector<RouteSpec> default_right_side_routes() {
  ActuatorPath front_long;
  front_long.head_mount = {0.055, 0.070, 0.110};
  front_long.waypoints = {{0.090, 0.140, -0.060}};
  front_long.vest_mount = {0.090, 0.130, -0.280};
  front_long.channel = 1;
  front_long.group = ActuatorGroup::front_long;

  ActuatorPath front_short;
  front_short.head_mount = {0.085, 0.030, 0.100};
  front_short.vest_mount = {0.170, 0.040, -0.040};
  front_short.channel = 1;
  front_short.group = ActuatorGroup::front_short;

  ActuatorPath back_middle;
  back_middle.head_mount = {0.0, -0.085, 0.110};
  back_middle.waypoints = {{0.0, -0.140, -0.060}};
  back_middle.vest_mount = {0.0, -0.140, -0.300};
  back_middle.channel = 3;
  back_middle.group = ActuatorGroup::back_middle;

  ActuatorPath cross_right;
  cross_right.head_mount = {0.060, -0.065, 0.110};
  cross_right.waypoints = {{-0.090, -0.140, -0.060}};
  cross_right.vest_mount = {-0.110, -0.140, -0.280};
  cross_right.channel = 4;
  cross_right.group = ActuatorGroup::back_cross_right;

  return {{front_long, 0.15}, {front_short, 0.15}, {back_middle, 0.15}, {cross_right, 0.15}};
}

/// Builds the symmetric suit from right-side routes; front and crossed routes
/// are mirrored across the sagittal plane onto the paired channel.
inline SuitConfig build_symmetric_suit(const std::vector<RouteSpec>& right, const FpamParams& base,
                                       std::string name) {
  SuitConfig suit;
  suit.name = std::move(name);
  auto add = [&](const ActuatorPath& path, double eps) {
    Actuator a{path, base};
    a.fpam.L0_m = stretched_length_for(path, eps);
    suit.actuators.push_back(std::move(a));
  };
  auto mirrored = [](const ActuatorPath& p, int channel, ActuatorGroup group) {
    ActuatorPath m = mirror_path(p);
    m.channel = channel;
    m.group = group;
    return m;
  };
  const RouteSpec* fl = nullptr;
  const RouteSpec* fs = nullptr;
  const RouteSpec* bm = nullptr;
  const RouteSpec* cr = nullptr;
  for (const auto& r : right) {
    switch (r.path.group) {
      case ActuatorGroup::front_long: fl = &r; break;
      case ActuatorGroup::front_short: fs = &r; break;
      case ActuatorGroup::back_middle: bm = &r; break;
      case ActuatorGroup::back_cross_right: cr = &r; break;
      default: break;
    }
  }
  if (!fl || !fs || !bm || !cr) throw ConfigError("symmetric suit needs front_long, front_short, back_middle and back_cross_right routes");
  add(fl->path, fl->neutral_eps);
  add(fs->path, fs->neutral_eps);
  add(mirrored(fl->path, 2, ActuatorGroup::front_long), fl->neutral_eps);
  add(mirrored(fs->path, 2, ActuatorGroup::front_short), fs->neutral_eps);
  add(bm->path, bm->neutral_eps);
  add(cr->path, cr->neutral_eps);
  add(mirrored(cr->path, 5, ActuatorGroup::back_cross_left), cr->neutral_eps);
  return suit;
}

inline FpamParams default_suit_fpam() {
  FpamParams p;
  p.sign_convention = SignConvention::flipped_ideal_term;
  return p;
}

inline SuitConfig default_suit() {
  return build_symmetric_suit(default_right_side_routes(), default_suit_fpam(), "default_suit");
}

inline PlantParams default_plant() { return {}; }

// Proportional only. The FE gain sits below the ~0.75 kPa/deg point where the
// pneumatic lag destabilises the loop on the default plant.
inline ControllerConfig default_controller(Axis axis) {
  ControllerConfig c;
  switch (axis) {
    case Axis::FE:
      c.loops = {{Axis::FE, 0.5, 0.0, {3, 4, 5}, {1, 2}}};
      break;
    case Axis::AR:
      // FE held by the back-middle and front pairs while the crossed pair turns.
      c.loops = {{Axis::FE, 0.5, 0.0, {3}, {1, 2}}, {Axis::AR, 3.0, 0.0, {5}, {4}}};
      break;
    case Axis::LD:
      c.loops = {{Axis::LD, 1.5, 0.0, {1}, {2}}};
      break;
  }
  return c;
}

}  // namespace fpam_exo
