#pragma once

// Serialization: suit / plant / controller JSON documents, tensile-test CSV,
// and JSON views of reports. Numbers in CSV output use the shortest
// round-trip decimal form.

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fpam_exo/design_eval.hpp"
#include "fpam_exo/fpam_model.hpp"
#include "fpam_exo/gravity_comp.hpp"
#include "fpam_exo/simulation.hpp"

namespace fpam_exo::io {

using json = nlohmann::ordered_json;

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

namespace detail {

inline Vec3 vec3_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(what + " must be a 3-element array");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) throw ConfigError(what + " must contain numbers");
    v(i) = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

inline json vec3_to(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

template <typename T>
T required(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(ctx + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(ctx + ": '" + key + "' has the wrong type");
  }
}

}  // namespace detail

inline json to_json(const FpamParams& p) {
  return json{{"r0_m", p.r0_m},
              {"alpha0_deg", p.alpha0_deg},
              {"p", json::array({p.p[0], p.p[1], p.p[2], p.p[3]})},
              {"L0_m", p.L0_m},
              {"P_max_kpa", p.P_max_kpa},
              {"sign_convention", std::string(to_string(p.sign_convention))}};
}

inline FpamParams fpam_from_json(const json& j, const std::string& ctx) {
  FpamParams p;
  p.r0_m = detail::required<double>(j, "r0_m", ctx);
  p.alpha0_deg = detail::required<double>(j, "alpha0_deg", ctx);
  const auto coeffs = detail::required<std::vector<double>>(j, "p", ctx);
  if (coeffs.size() != 4) throw ConfigError(ctx + ": 'p' must hold 4 coefficients p0..p3");
  std::copy(coeffs.begin(), coeffs.end(), p.p.begin());
  p.L0_m = detail::required<double>(j, "L0_m", ctx);
  p.P_max_kpa = j.value("P_max_kpa", 138.0);
  p.sign_convention = parse_sign_convention(j.value("sign_convention", std::string("as_printed")));
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(ctx + ": " + e.what());
  }
  return p;
}

inline json to_json(const SuitConfig& s) {
  json acts = json::array();
  for (const auto& a : s.actuators) {
    json wps = json::array();
    for (const auto& w : a.path.waypoints) wps.push_back(detail::vec3_to(w));
    acts.push_back(json{{"head_mount_m", detail::vec3_to(a.path.head_mount)},
                        {"waypoints_m", wps},
                        {"vest_mount_m", detail::vec3_to(a.path.vest_mount)},
                        {"channel", a.path.channel},
                        {"group", std::string(to_string(a.path.group))},
                        {"fpam", to_json(a.fpam)}});
  }
  return json{{"name", s.name},
              {"body", {{"mass_kg", s.body.mass_kg}, {"com_m", detail::vec3_to(s.body.com_offset_m)}, {"gravity_mps2", s.body.gravity}}},
              {"actuators", acts}};
}

inline SuitConfig suit_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("suit config must be a JSON object");
  SuitConfig s;
  s.name = j.value("name", std::string("suit"));
  const json& body = j.contains("body") ? j.at("body") : throw ConfigError("suit config: missing 'body'");
  s.body.mass_kg = detail::required<double>(body, "mass_kg", "body");
  if (!body.contains("com_m")) throw ConfigError("body: missing 'com_m'");
  s.body.com_offset_m = detail::vec3_from(body.at("com_m"), "body.com_m");
  s.body.gravity = body.value("gravity_mps2", kStandardGravity);
  if (!j.contains("actuators") || !j.at("actuators").is_array())
    throw ConfigError("suit config: 'actuators' must be an array");
  std::size_t i = 0;
  for (const auto& a : j.at("actuators")) {
    const std::string ctx = "actuators[" + std::to_string(i++) + "]";
    Actuator act;
    if (!a.is_object()) throw ConfigError(ctx + " must be an object");
    if (!a.contains("head_mount_m") || !a.contains("vest_mount_m") || !a.contains("fpam"))
      throw ConfigError(ctx + ": needs head_mount_m, vest_mount_m and fpam");
    act.path.head_mount = detail::vec3_from(a.at("head_mount_m"), ctx + ".head_mount_m");
    act.path.vest_mount = detail::vec3_from(a.at("vest_mount_m"), ctx + ".vest_mount_m");
    if (a.contains("waypoints_m")) {
      if (!a.at("waypoints_m").is_array()) throw ConfigError(ctx + ".waypoints_m must be an array");
      for (const auto& w : a.at("waypoints_m")) act.path.waypoints.push_back(detail::vec3_from(w, ctx + ".waypoints_m"));
    }
    act.path.channel = detail::required<int>(a, "channel", ctx);
    act.path.group = parse_actuator_group(detail::required<std::string>(a, "group", ctx));
    act.fpam = fpam_from_json(a.at("fpam"), ctx + ".fpam");
    s.actuators.push_back(std::move(act));
  }
  s.validate();
  return s;
}

inline SuitConfig load_suit(const std::string& path) {
  try {
    return suit_from_json(json::parse(read_file(path)));
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline json to_json(const PlantParams& p) {
  return json{{"inertia_kgm2", {{p.inertia(0, 0), p.inertia(0, 1), p.inertia(0, 2)},
                                {p.inertia(1, 0), p.inertia(1, 1), p.inertia(1, 2)},
                                {p.inertia(2, 0), p.inertia(2, 1), p.inertia(2, 2)}}},
              {"damping_nms_per_rad", detail::vec3_to(p.damping)},
              {"pneumatic_time_constant_s", p.pneumatic_time_constant_s},
              {"timestep_s", p.timestep_s}};
}

inline PlantParams plant_from_json(const json& j) {
  PlantParams p;
  if (!j.is_object()) throw ConfigError("plant config must be a JSON object");
  if (j.contains("inertia_kgm2")) {
    const auto& m = j.at("inertia_kgm2");
    if (!m.is_array() || m.size() != 3) throw ConfigError("plant.inertia_kgm2 must be 3x3");
    for (int r = 0; r < 3; ++r) p.inertia.row(r) = detail::vec3_from(m[static_cast<std::size_t>(r)], "plant.inertia_kgm2").transpose();
  }
  if (j.contains("damping_nms_per_rad")) p.damping = detail::vec3_from(j.at("damping_nms_per_rad"), "plant.damping_nms_per_rad");
  p.pneumatic_time_constant_s = j.value("pneumatic_time_constant_s", p.pneumatic_time_constant_s);
  p.timestep_s = j.value("timestep_s", p.timestep_s);
  p.validate();
  return p;
}

inline json to_json(const ControllerConfig& c) {
  json loops = json::array();
  for (const auto& l : c.loops)
    loops.push_back(json{{"axis", std::string(axis_name(l.axis))},
                         {"kp_kpa_per_deg", l.kp_kpa_per_deg},
                         {"ki_kpa_per_deg_s", l.ki_kpa_per_deg_s},
                         {"agonist", l.agonist},
                         {"antagonist", l.antagonist}});
  return json{{"initial_pressure_kpa", c.initial_pressure_kpa},
              {"min_pressure_kpa", c.min_pressure_kpa},
              {"max_pressure_kpa", c.max_pressure_kpa},
              {"rate_hz", c.rate_hz},
              {"loops", loops}};
}

inline ControllerConfig controller_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("controller config must be a JSON object");
  ControllerConfig c;
  c.initial_pressure_kpa = j.value("initial_pressure_kpa", c.initial_pressure_kpa);
  c.min_pressure_kpa = j.value("min_pressure_kpa", c.min_pressure_kpa);
  c.max_pressure_kpa = j.value("max_pressure_kpa", c.max_pressure_kpa);
  c.rate_hz = j.value("rate_hz", c.rate_hz);
  if (!j.contains("loops") || !j.at("loops").is_array()) throw ConfigError("controller: 'loops' must be an array");
  for (const auto& l : j.at("loops")) {
    AxisLoop loop;
    try {
      loop.axis = parse_axis(detail::required<std::string>(l, "axis", "controller loop"));
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    loop.kp_kpa_per_deg = detail::required<double>(l, "kp_kpa_per_deg", "controller loop");
    loop.ki_kpa_per_deg_s = l.value("ki_kpa_per_deg_s", 0.0);
    loop.agonist = detail::required<std::vector<int>>(l, "agonist", "controller loop");
    loop.antagonist = detail::required<std::vector<int>>(l, "antagonist", "controller loop");
    c.loops.push_back(std::move(loop));
  }
  c.validate();
  return c;
}

/// Parses `pressure_kpa,length_m,force_n` CSV (columns in any order). Any bad
/// row rejects the whole file with its 1-based line number.
inline std::vector<TensileSample> parse_tensile_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  auto split = [&](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    header = split(t);
    break;
  }
  if (header.empty()) throw ConfigError("no samples");
  const char* names[3] = {"pressure_kpa", "length_m", "force_n"};
  std::size_t col[3];
  for (int k = 0; k < 3; ++k) {
    const auto it = std::find(header.begin(), header.end(), names[k]);
    if (it == header.end()) throw ConfigError(std::string("missing column '") + names[k] + "'");
    col[k] = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<TensileSample> out;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split(t);
    if (cells.size() != header.size())
      throw ConfigError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) + " fields");
    double v[3];
    for (int k = 0; k < 3; ++k) {
      const auto& c = cells[col[k]];
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v[k]);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size() || !std::isfinite(v[k]))
        throw ConfigError("line " + std::to_string(line_no) + ": invalid number '" + c + "' in " + names[k]);
    }
    if (v[0] < 0.0) throw ConfigError("line " + std::to_string(line_no) + ": negative pressure");
    if (v[1] <= 0.0) throw ConfigError("line " + std::to_string(line_no) + ": non-positive length");
    out.push_back({v[0], v[1], v[2]});
  }
  if (out.empty()) throw ConfigError("no samples");
  return out;
}

inline std::string tensile_csv(const std::vector<TensileSample>& samples) {
  std::string s = "pressure_kpa,length_m,force_n\n";
  for (const auto& t : samples)
    s += format_number(t.pressure_kpa) + "," + format_number(t.length_m) + "," + format_number(t.force_n) + "\n";
  return s;
}

inline json to_json(const FitReport& r) {
  json levels = json::array();
  for (const auto& l : r.per_level)
    levels.push_back(json{{"pressure_kpa", l.pressure_kpa}, {"samples", l.samples}, {"rmse_n", l.rmse_n}});
  return json{{"params", to_json(r.params)},
              {"geometric_identified", r.geometric_identified},
              {"rmse_n", r.rmse_n},
              {"per_level", levels},
              {"stage2_iterations", r.stage2_iterations},
              {"notes", r.notes}};
}

inline json to_json(const HeadPose& p) {
  return json{{"theta_x_deg", p.theta_x_deg}, {"theta_y_deg", p.theta_y_deg}, {"theta_z_deg", p.theta_z_deg}};
}

inline json to_json(const FeasibilityReport& r) {
  json j{{"pose", to_json(r.pose)},
         {"reachable", r.reachable},
         {"grav_ok", r.grav_ok},
         {"pressures_kpa", nullptr},
         {"torque_error_nm", detail::vec3_to(r.torque_error)},
         {"tau_gravity_nm", detail::vec3_to(r.tau_gravity)},
         {"relative_error", std::isfinite(r.relative_error) ? json(r.relative_error) : json(nullptr)},
         {"compression_n", r.compression_n},
         {"min_eps", r.min_eps},
         {"limiting_condition", std::string(to_string(r.limiting_condition))}};
  if (r.pressures) j["pressures_kpa"] = *r.pressures;
  return j;
}

inline json to_json(const StaticsBreakdown& b) {
  return json{{"tau_fpam_nm", detail::vec3_to(b.tau_fpam)},
              {"tau_elastic_nm", detail::vec3_to(b.tau_elastic)},
              {"tau_gravity_nm", detail::vec3_to(b.tau_gravity)},
              {"compression_n", b.compression_n},
              {"tensions_n", b.tensions},
              {"epsilons", b.epsilons}};
}

/// Benchtop reference forces per (config, axis); shipped for side-by-side
/// reports only.
struct MeasuredReference {
  int config_id;
  Axis axis;
  double force_n;
};

inline std::vector<MeasuredReference> parse_measured_reference(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<MeasuredReference> out;
  bool header = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ss(line);
    std::string id, axis, force;
    if (!std::getline(ss, id, ',') || !std::getline(ss, axis, ',') || !std::getline(ss, force, ','))
      throw ConfigError("measured reference line " + std::to_string(line_no) + " is malformed");
    try {
      out.push_back({std::stoi(id), parse_axis(axis), std::stod(force)});
    } catch (const std::exception&) {
      throw ConfigError("measured reference line " + std::to_string(line_no) + " is malformed");
    }
  }
  return out;
}

}  // namespace fpam_exo::io
