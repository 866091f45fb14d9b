#pragma once

// Range-of-motion scans along the principal axes and the visual-target
// workspace grid.

#include <optional>
#include <vector>

#include "fpam_exo/gravity_comp.hpp"

namespace fpam_exo {

/// Head orientation that points the forward (y) axis at a target at
/// `horizontal_deg` azimuth (positive = to the right) and `vertical_deg`
/// elevation (positive = up), with no roll about the line of sight:
/// R = Rz(-horizontal) Rx(vertical), re-expressed as x-y-z Euler angles.
inline HeadPose target_to_pose(double horizontal_deg, double vertical_deg) {
  if (!std::isfinite(horizontal_deg) || std::abs(horizontal_deg) > 180.0)
    throw DomainError("horizontal target angle must lie in [-180, 180] degrees");
  if (!std::isfinite(vertical_deg) || std::abs(vertical_deg) >= 90.0)
    throw DomainError("vertical target angle must lie in (-90, 90) degrees");
  const Mat3 R = rot_z(deg2rad(-horizontal_deg)) * rot_x(deg2rad(vertical_deg));
  HeadPose p = euler_xyz(R);
  // atan2 returns -180 for a half turn; the pose range is (-180, 180].
  for (double* a : {&p.theta_x_deg, &p.theta_y_deg, &p.theta_z_deg})
    if (*a <= -180.0) *a += 360.0;
  return p;
}

enum class Condition { reachable = 0, grav_ok = 1, compression_ok = 2 };

struct RomInterval {
  bool empty = true;
  double min_deg = 0.0;
  double max_deg = 0.0;
  double percent = 0.0;
};

struct RomSample {
  double angle_deg;
  bool reachable;
  bool grav_ok;
  bool compression_ok;
  double compression_n;
  std::optional<PressureVector> pressures;

  bool flag(Condition c) const {
    switch (c) {
      case Condition::reachable: return reachable;
      case Condition::grav_ok: return grav_ok;
      case Condition::compression_ok: return compression_ok;
    }
    return false;
  }
};

struct RomScan {
  Axis axis = Axis::FE;
  AngleRange biological{};
  std::vector<RomSample> samples;
  RomInterval reachable;
  RomInterval grav_ok;
  RomInterval compression_ok;

  const RomInterval& interval(Condition c) const {
    switch (c) {
      case Condition::reachable: return reachable;
      case Condition::grav_ok: return grav_ok;
      case Condition::compression_ok: return compression_ok;
    }
    return reachable;
  }
};

/// Contiguous flagged run containing the sample nearest 0 degrees.
inline RomInterval rom_interval(const std::vector<RomSample>& s, Condition c, const AngleRange& bio) {
  RomInterval out;
  if (s.empty()) return out;
  std::size_t centre = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs(s[i].angle_deg) < std::abs(s[centre].angle_deg)) centre = i;
  if (!s[centre].flag(c)) return out;
  std::size_t lo = centre, hi = centre;
  while (lo > 0 && s[lo - 1].flag(c)) --lo;
  while (hi + 1 < s.size() && s[hi + 1].flag(c)) ++hi;
  out.empty = false;
  out.min_deg = s[lo].angle_deg;
  out.max_deg = s[hi].angle_deg;
  out.percent = 100.0 * (out.max_deg - out.min_deg) / bio.length();
  return out;
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = a;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i)
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

inline RomScan scan_rom(const SuitConfig& suit, Axis axis, std::size_t samples = 100,
                        std::optional<double> compression_limit_n = std::nullopt,
                        const GravityCompOptions& opt = {}) {
  if (samples < 2) throw DomainError("RoM scan needs at least 2 samples");
  RomScan scan;
  scan.axis = axis;
  scan.biological = biological_range(axis);
  for (double a : linspace(scan.biological.min_deg, scan.biological.max_deg, samples)) {
    const auto rep = solve_pose(suit, HeadPose::along(axis, a), opt);
    const auto cond = classify(rep, compression_limit_n);
    scan.samples.push_back({a, cond.reachable, cond.grav_ok, cond.compression_ok, rep.compression_n, rep.pressures});
  }
  scan.reachable = rom_interval(scan.samples, Condition::reachable, scan.biological);
  scan.grav_ok = rom_interval(scan.samples, Condition::grav_ok, scan.biological);
  scan.compression_ok = rom_interval(scan.samples, Condition::compression_ok, scan.biological);
  return scan;
}

struct WorkspaceCell {
  double h_deg;
  double v_deg;
  HeadPose pose;
  bool reachable;
  bool grav_ok;
  double compression_n;
  std::optional<PressureVector> pressures;
};

struct LimitCoverage {
  double limit_n;
  std::vector<bool> compression_ok;  // per cell
  double compression_percent;
  /// Cells meeting all three conditions.
  double all_percent;
};

struct WorkspaceGrid {
  static constexpr double kHorizontalMax = 90.0;
  static constexpr double kVerticalMax = 50.0;
  static constexpr double kStep = 2.5;
  static constexpr std::size_t kCols = 73;  // horizontal samples
  static constexpr std::size_t kRows = 41;  // vertical samples

  std::vector<WorkspaceCell> cells;  // horizontal-major
  double reachable_percent = 0.0;
  double grav_ok_percent = 0.0;
  double reachable_and_grav_percent = 0.0;
  std::vector<LimitCoverage> limits;

  static std::size_t index(std::size_t ih, std::size_t iv) { return ih * kRows + iv; }
  const WorkspaceCell& at(std::size_t ih, std::size_t iv) const { return cells[index(ih, iv)]; }
};

inline WorkspaceGrid scan_workspace(const SuitConfig& suit, const std::vector<double>& compression_limits_n,
                                    const GravityCompOptions& opt = {}) {
  WorkspaceGrid g;
  g.cells.reserve(WorkspaceGrid::kCols * WorkspaceGrid::kRows);
  for (std::size_t ih = 0; ih < WorkspaceGrid::kCols; ++ih) {
    const double h = -WorkspaceGrid::kHorizontalMax + WorkspaceGrid::kStep * static_cast<double>(ih);
    for (std::size_t iv = 0; iv < WorkspaceGrid::kRows; ++iv) {
      const double v = -WorkspaceGrid::kVerticalMax + WorkspaceGrid::kStep * static_cast<double>(iv);
      const HeadPose pose = target_to_pose(h, v);
      const auto rep = solve_pose(suit, pose, opt);
      g.cells.push_back({h, v, pose, rep.reachable, rep.grav_ok, rep.compression_n, rep.pressures});
    }
  }
  const double n = static_cast<double>(g.cells.size());
  std::size_t reach = 0, grav = 0, both = 0;
  for (const auto& c : g.cells) {
    reach += c.reachable;
    grav += c.grav_ok;
    both += c.reachable && c.grav_ok;
  }
  g.reachable_percent = 100.0 * static_cast<double>(reach) / n;
  g.grav_ok_percent = 100.0 * static_cast<double>(grav) / n;
  g.reachable_and_grav_percent = 100.0 * static_cast<double>(both) / n;
  for (double limit : compression_limits_n) {
    LimitCoverage lc{limit, {}, 0.0, 0.0};
    std::size_t ok = 0, all = 0;
    for (const auto& c : g.cells) {
      const bool cok = c.compression_n <= limit;
      lc.compression_ok.push_back(cok);
      ok += cok;
      all += cok && c.reachable && c.grav_ok;
    }
    lc.compression_percent = 100.0 * static_cast<double>(ok) / n;
    lc.all_percent = 100.0 * static_cast<double>(all) / n;
    g.limits.push_back(std::move(lc));
  }
  return g;
}

}  // namespace fpam_exo
