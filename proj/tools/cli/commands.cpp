#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#ifdef FPAM_EXO_CLI11_SINGLE_HEADER
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "fpam_exo/fpam_exo.hpp"

#ifndef FPAM_EXO_VERSION
#define FPAM_EXO_VERSION "unknown"
#endif
#ifndef FPAM_EXO_DEFAULT_MEASURED
#define FPAM_EXO_DEFAULT_MEASURED "data/measured_forces.csv"
#endif

namespace fpam_exo::cli {

namespace fs = std::filesystem;
using io::format_number;
using io::json;

namespace {

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InputDoc {
  std::string role;
  std::string path;
  std::string content;
};

const char* const kUnits =
    "Units at every interface: angles in degrees, pressures in kPa, forces in N, torques in N*m, lengths in m.";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

RunManifest make_manifest(const CLI::App& sub, const std::vector<InputDoc>& inputs, const std::string& out_dir) {
  RunManifest m;
  m.command = sub.get_name();
  m.out_dir = out_dir;
  m.tool_version = FPAM_EXO_VERSION;
  std::uint64_t h = fnv1a64(m.command);
  for (const auto& in : inputs) {
    m.config_paths.emplace_back(in.role, in.path);
    h = fnv1a64(in.role, h);
    h = fnv1a64(std::string_view("\0", 1), h);
    h = fnv1a64(in.content, h);
  }
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name();
    if (opt->count() == 0 || name == "--help" || name == "--out" || opt->get_group() == "Inputs") continue;
    const std::string value = join(opt->results(), ",");
    m.overrides.emplace_back(name, value);
    h = fnv1a64(name + "=" + value, h);
    h = fnv1a64(std::string_view("\0", 1), h);
  }
  m.input_hash = hex64(h);
  return m;
}

InputDoc suit_input(const std::string& path, SuitConfig& suit) {
  if (path.empty()) {
    suit = default_suit();
    return {"suit", "builtin:default_suit", io::to_json(suit).dump()};
  }
  std::string text = io::read_file(path);
  try {
    suit = io::suit_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
  return {"suit", path, std::move(text)};
}

template <class T, class Parse>
InputDoc json_input(const std::string& role, const std::string& path, const T& builtin, const std::string& builtin_name,
                    T& value, Parse parse) {
  if (path.empty()) {
    value = builtin;
    return {role, "builtin:" + builtin_name, io::to_json(builtin).dump()};
  }
  std::string text = io::read_file(path);
  try {
    value = parse(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
  return {role, path, std::move(text)};
}

std::string dump(json j) { return j.dump(2) + "\n"; }

json with_manifest(const RunManifest& m, json body) {
  json j{{"manifest", m.to_json()}};
  for (auto& [k, v] : body.items()) j[k] = v;
  return j;
}

HeadPose parse_pose(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("pose '" + s + "' must be three numbers fe,ld,ar");
    }
  }
  if (v.size() != 3) throw ConfigError("pose '" + s + "' must be three numbers fe,ld,ar");
  HeadPose p{v[0], v[1], v[2]};
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return p;
}

Axis parse_axis_flag(const std::string& s) {
  try {
    return parse_axis(s);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

std::string pressure_fields(const std::optional<PressureVector>& p) {
  std::string s;
  for (std::size_t k = 0; k < kNumChannels; ++k) s += "," + (p ? format_number((*p)[k]) : std::string());
  return s;
}

const char* flag(bool b) { return b ? "1" : "0"; }

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string data, sign = "as_printed";
  double L0 = 0.0;
};

OutputSet cmd_fit(const CLI::App& sub, const FitArgs& a, const std::string& out_dir, std::ostream& out) {
  const std::string text = io::read_file(a.data);
  const RunManifest m = make_manifest(sub, {{"tensile_data", a.data, text}}, out_dir);
  const auto samples = io::parse_tensile_csv(text);
  FitOptions opt;
  opt.sign_convention = parse_sign_convention(a.sign);
  const FitReport rep = fit_params(samples, a.L0, opt);
  out << "fit: rmse " << format_number(rep.rmse_n) << " N over " << samples.size() << " samples\n";
  OutputSet o;
  o.add("fit.json", dump(with_manifest(m, {{"fit", io::to_json(rep)}})));
  return o;
}

struct SynthArgs {
  std::uint64_t seed = 1;
  double noise = 0.0, L0 = 0.30;
  std::string sign = "as_printed";
};

// Synthetic tensile sweep from the nominal parameters: four pressure levels,
// contraction 0..0.30, optional Gaussian force noise.
OutputSet cmd_synth(const CLI::App& sub, const SynthArgs& a, const std::string& out_dir, std::ostream& out) {
  if (!(a.noise >= 0.0)) throw ConfigError("--noise must be non-negative");
  if (!(a.L0 > 0.0)) throw ConfigError("--L0 must be positive");
  const RunManifest m = make_manifest(sub, {}, out_dir);
  FpamParams p;
  p.L0_m = a.L0;
  p.sign_convention = parse_sign_convention(a.sign);
  std::mt19937_64 rng(a.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<TensileSample> samples;
  for (double kpa : {0.0, 34.5, 68.9, 103.4})
    for (double eps : linspace(0.0, 0.30, 16)) {
      const double f = force(p, eps, kpa) + (a.noise > 0.0 ? a.noise * noise(rng) : 0.0);
      samples.push_back({kpa, a.L0 * (1.0 - eps), f});
    }
  out << "synth: " << samples.size() << " samples\n";
  OutputSet o;
  o.add("tensile.csv", m.csv_comment() + io::tensile_csv(samples));
  return o;
}

struct SolveArgs {
  std::string config, pose, poses;
};

OutputSet cmd_solve(const CLI::App& sub, const SolveArgs& a, const std::string& out_dir, std::ostream& out) {
  SuitConfig suit;
  std::vector<InputDoc> inputs{suit_input(a.config, suit)};
  if (a.pose.empty() == a.poses.empty()) throw ConfigError("give exactly one of --pose or --poses");
  OutputSet o;
  if (!a.pose.empty()) {
    const RunManifest m = make_manifest(sub, inputs, out_dir);
    const HeadPose pose = parse_pose(a.pose);
    const auto rep = solve_pose(suit, pose);
    if (!rep.pressures)
      throw NonConvergence("gravity-compensation solver did not converge at pose " + a.pose);
    json body{{"result", io::to_json(rep)}};
    body["statics"] = io::to_json(evaluate(suit, pose, *rep.pressures, PressureCheck::unchecked));
    out << "solve: reachable " << rep.reachable << " grav_ok " << rep.grav_ok << " ("
        << to_string(rep.limiting_condition) << ")\n";
    o.add("solve.json", dump(with_manifest(m, body)));
    return o;
  }
  std::string text = io::read_file(a.poses);
  inputs.push_back({"poses", a.poses, text});
  const RunManifest m = make_manifest(sub, inputs, out_dir);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0, n = 0, ok = 0;
  bool header = true;
  std::string csv = m.csv_comment() +
                    "theta_x,theta_y,theta_z,reachable,grav_ok,compression_n,p1,p2,p3,p4,p5,limiting_condition\n";
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line != "theta_x,theta_y,theta_z")
        throw ConfigError("'" + a.poses + "' line " + std::to_string(line_no) +
                          ": expected header theta_x,theta_y,theta_z");
      continue;
    }
    HeadPose pose;
    try {
      pose = parse_pose(line);
    } catch (const ConfigError& e) {
      throw ConfigError("'" + a.poses + "' line " + std::to_string(line_no) + ": " + e.what());
    }
    const auto rep = solve_pose(suit, pose);
    ++n;
    ok += rep.grav_ok;
    csv += format_number(pose.theta_x_deg) + "," + format_number(pose.theta_y_deg) + "," +
           format_number(pose.theta_z_deg) + "," + flag(rep.reachable) + "," + flag(rep.grav_ok) + "," +
           format_number(rep.compression_n) + pressure_fields(rep.pressures) + "," +
           std::string(to_string(rep.limiting_condition)) + "\n";
  }
  if (n == 0) throw ConfigError("'" + a.poses + "' contains no poses");
  out << "solve: " << ok << " of " << n << " poses grav_ok\n";
  o.add("solve.csv", csv);
  return o;
}

json interval_json(const RomInterval& r) {
  if (r.empty) return json{{"empty", true}, {"percent", 0.0}};
  return json{{"empty", false}, {"min_deg", r.min_deg}, {"max_deg", r.max_deg}, {"percent", r.percent}};
}

struct RomArgs {
  std::string config, axis;
  std::size_t samples = 100;
  std::optional<double> limit;
};

OutputSet cmd_rom(const CLI::App& sub, const RomArgs& a, const std::string& out_dir, std::ostream& out) {
  SuitConfig suit;
  const RunManifest m = make_manifest(sub, {suit_input(a.config, suit)}, out_dir);
  std::vector<Axis> axes(kAllAxes.begin(), kAllAxes.end());
  if (!a.axis.empty()) axes = {parse_axis_flag(a.axis)};
  if (a.samples < 2) throw ConfigError("--samples must be at least 2");
  OutputSet o;
  json summary = json::array();
  for (Axis ax : axes) {
    const RomScan scan = scan_rom(suit, ax, a.samples, a.limit);
    std::string csv = m.csv_comment() + "angle_deg,reachable,grav_ok,compression_ok,compression_n,p1,p2,p3,p4,p5\n";
    for (const auto& s : scan.samples)
      csv += format_number(s.angle_deg) + "," + flag(s.reachable) + "," + flag(s.grav_ok) + "," +
             flag(s.compression_ok) + "," + format_number(s.compression_n) + pressure_fields(s.pressures) + "\n";
    o.add("rom_" + std::string(axis_name(ax)) + ".csv", csv);
    summary.push_back(json{{"axis", std::string(axis_name(ax))},
                           {"biological_min_deg", scan.biological.min_deg},
                           {"biological_max_deg", scan.biological.max_deg},
                           {"samples", scan.samples.size()},
                           {"reachable", interval_json(scan.reachable)},
                           {"grav_ok", interval_json(scan.grav_ok)},
                           {"compression_ok", interval_json(scan.compression_ok)}});
    out << "rom " << axis_name(ax) << ": reachable " << format_number(scan.reachable.percent) << "%, grav_ok "
        << format_number(scan.grav_ok.percent) << "%\n";
  }
  json body{{"compression_limit_n", a.limit ? json(*a.limit) : json(nullptr)}, {"axes", summary}};
  o.add("rom_summary.json", dump(with_manifest(m, body)));
  return o;
}

struct WorkspaceArgs {
  std::string config;
  std::vector<double> limits{50.0, 100.0, 150.0, 200.0};
};

OutputSet cmd_workspace(const CLI::App& sub, const WorkspaceArgs& a, const std::string& out_dir, std::ostream& out) {
  SuitConfig suit;
  const RunManifest m = make_manifest(sub, {suit_input(a.config, suit)}, out_dir);
  for (double l : a.limits)
    if (!std::isfinite(l)) throw ConfigError("compression limits must be finite");
  const WorkspaceGrid g = scan_workspace(suit, a.limits);
  std::string csv = m.csv_comment() + "h_deg,v_deg,theta_x,theta_y,theta_z,reachable,grav_ok,compression_n,p1,p2,p3,p4,p5";
  for (double l : a.limits) csv += ",compression_ok_" + format_number(l);
  csv += "\n";
  for (std::size_t i = 0; i < g.cells.size(); ++i) {
    const auto& c = g.cells[i];
    csv += format_number(c.h_deg) + "," + format_number(c.v_deg) + "," + format_number(c.pose.theta_x_deg) + "," +
           format_number(c.pose.theta_y_deg) + "," + format_number(c.pose.theta_z_deg) + "," + flag(c.reachable) +
           "," + flag(c.grav_ok) + "," + format_number(c.compression_n) + pressure_fields(c.pressures);
    for (const auto& lc : g.limits) csv += std::string(",") + flag(lc.compression_ok[i]);
    csv += "\n";
  }
  json limits = json::array();
  for (const auto& lc : g.limits)
    limits.push_back(json{{"limit_n", lc.limit_n},
                          {"compression_percent", lc.compression_percent},
                          {"all_conditions_percent", lc.all_percent}});
  json body{{"grid", {{"horizontal_cells", WorkspaceGrid::kCols},
                      {"vertical_cells", WorkspaceGrid::kRows},
                      {"step_deg", WorkspaceGrid::kStep}}},
            {"reachable_percent", g.reachable_percent},
            {"grav_ok_percent", g.grav_ok_percent},
            {"reachable_and_grav_ok_percent", g.reachable_and_grav_percent},
            {"compression_limits", limits}};
  out << "workspace: reachable " << format_number(g.reachable_percent) << "%, grav_ok "
      << format_number(g.grav_ok_percent) << "%\n";
  OutputSet o;
  o.add("workspace_grid.csv", csv);
  o.add("workspace_summary.json", dump(with_manifest(m, body)));
  return o;
}

struct DesignArgs {
  std::string config, measured;
  std::vector<int> ids{1, 2, 3, 4, 5, 6};
  double resolution = 0.25;
  std::optional<double> pressure;
};

OutputSet cmd_design(const CLI::App& sub, const DesignArgs& a, const std::string& out_dir, std::ostream& out) {
  SuitConfig suit;
  std::vector<InputDoc> inputs{suit_input(a.config, suit)};
  // the built-in reference is optional (installed binaries may not have it); an explicit one is not
  const std::string measured_path = a.measured.empty() ? std::string(FPAM_EXO_DEFAULT_MEASURED) : a.measured;
  std::vector<io::MeasuredReference> measured;
  if (!a.measured.empty() || std::filesystem::exists(measured_path)) {
    std::string measured_text = io::read_file(measured_path);
    measured = io::parse_measured_reference(measured_text);
    inputs.push_back({"measured_reference", measured_path, std::move(measured_text)});
  }
  const RunManifest m = make_manifest(sub, inputs, out_dir);

  if (!(a.resolution > 0.0)) throw ConfigError("--resolution must be positive");
  const auto all = standard_placements(suit);
  std::vector<PlacementConfig> chosen;
  for (int id : a.ids) {
    auto it = std::find_if(all.begin(), all.end(), [&](const PlacementConfig& c) { return c.id == id; });
    if (it == all.end()) throw ConfigError("unknown placement config id " + std::to_string(id) + " (valid: 1-6)");
    if (std::none_of(chosen.begin(), chosen.end(), [&](const PlacementConfig& c) { return c.id == id; }))
      chosen.push_back(*it);
  }
  auto rows = compare(chosen, a.resolution, a.pressure);
  std::stable_sort(rows.begin(), rows.end(), [](const ComparisonRow& x, const ComparisonRow& y) {
    if (x.profile.axis != y.profile.axis) return axis_index(x.profile.axis) < axis_index(y.profile.axis);
    return x.profile.config_id < y.profile.config_id;
  });

  auto measured_for = [&](const TorqueProfile& p) -> std::optional<double> {
    for (const auto& r : measured)
      if (r.config_id == p.config_id && r.axis == p.axis) return r.force_n;
    return std::nullopt;
  };

  std::string table = m.csv_comment() + "quantity";
  for (const auto& r : rows) table += "," + std::to_string(r.profile.config_id) + "_" + std::string(axis_name(r.profile.axis));
  table += "\n";
  auto table_row = [&](const std::string& name, auto value) {
    table += name;
    for (const auto& r : rows) table += "," + value(r);
    table += "\n";
  };
  table_row("pressure_kpa", [](const ComparisonRow& r) { return format_number(r.profile.pressure_kpa); });
  table_row("torque_integral_nm_deg", [](const ComparisonRow& r) { return format_number(r.profile.integral_nm_deg); });
  table_row("angle_range_deg", [](const ComparisonRow& r) { return format_number(r.profile.angle_range_deg); });
  table_row("torque_at_zero_nm", [](const ComparisonRow& r) { return format_number(r.profile.promoting_at_zero()); });
  table_row("signed_torque_at_zero_nm", [](const ComparisonRow& r) { return format_number(r.profile.torque_at_zero_nm); });
  table_row("rank", [](const ComparisonRow& r) { return std::to_string(r.rank); });
  table_row("measured_force_n", [&](const ComparisonRow& r) {
    const auto f = measured_for(r.profile);
    return f ? format_number(*f) : std::string();
  });

  std::string profiles = m.csv_comment() + "config_id,axis,angle_deg,torque_nm,valid\n";
  json comparison = json::array();
  for (const auto& r : rows) {
    const auto& p = r.profile;
    for (std::size_t i = 0; i < p.angles_deg.size(); ++i)
      profiles += std::to_string(p.config_id) + "," + std::string(axis_name(p.axis)) + "," +
                  format_number(p.angles_deg[i]) + "," + format_number(p.torque_nm[i]) + "," + flag(p.valid[i]) + "\n";
    const auto f = measured_for(p);
    comparison.push_back(json{{"config_id", p.config_id},
                              {"axis", std::string(axis_name(p.axis))},
                              {"pressure_kpa", p.pressure_kpa},
                              {"torque_integral_nm_deg", p.integral_nm_deg},
                              {"angle_range_deg", p.angle_range_deg},
                              {"torque_at_zero_nm", p.promoting_at_zero()},
                              {"signed_torque_at_zero_nm", p.torque_at_zero_nm},
                              {"valid_at_zero", p.valid_at_zero},
                              {"rank", r.rank},
                              {"measured_force_n", f ? json(*f) : json(nullptr)}});
    out << "design " << p.config_id << " " << axis_name(p.axis) << ": |tau(0)| " << format_number(p.promoting_at_zero())
        << " N*m, integral " << format_number(p.integral_nm_deg) << " N*m*deg, rank " << r.rank << "\n";
  }
  json labels = json::array();
  for (const auto& c : chosen) labels.push_back(json{{"id", c.id}, {"label", c.label}});
  OutputSet o;
  o.add("design_table.csv", table);
  o.add("design_profiles.csv", profiles);
  o.add("design_summary.json",
        dump(with_manifest(m, {{"resolution_deg", a.resolution}, {"configs", labels}, {"comparison", comparison}})));
  return o;
}

struct TrackArgs {
  std::string config, plant, controller, axis = "FE";
  double amplitude = 20.0, period = 25.0;
  int cycles = 4;
};

OutputSet cmd_track(const CLI::App& sub, const TrackArgs& a, const std::string& out_dir, std::ostream& out) {
  const Axis axis = parse_axis_flag(a.axis);
  SuitConfig suit;
  PlantParams plant;
  ControllerConfig controller;
  std::vector<InputDoc> inputs{suit_input(a.config, suit)};
  inputs.push_back(json_input("plant", a.plant, default_plant(), "default_plant", plant, io::plant_from_json));
  inputs.push_back(json_input("controller", a.controller, default_controller(axis),
                              "default_controller_" + std::string(axis_name(axis)), controller,
                              io::controller_from_json));
  const RunManifest m = make_manifest(sub, inputs, out_dir);
  TrajectorySpec spec;
  spec.axis = axis;
  spec.amplitude_deg = a.amplitude;
  spec.period_s = a.period;
  spec.cycles = a.cycles;
  if (!std::isfinite(a.amplitude)) throw ConfigError("--amplitude must be finite");

  TrajectoryResult r;
  try {
    r = track(suit, plant, controller, spec);
  } catch (const TrackingFault& e) {
    throw NonConvergence(std::string("simulation diverged: ") + e.what());
  }
  const std::string name = "track_" + std::string(axis_name(axis));
  std::string csv = m.csv_comment() + "t_s,ref_deg,meas_deg,p1,p2,p3,p4,p5\n";
  double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin;
  for (std::size_t i = 0; i < r.time_s.size(); ++i) {
    csv += format_number(r.time_s[i]) + "," + format_number(r.reference_deg[i]) + "," + format_number(r.measured_deg[i]) +
           pressure_fields(r.actual_kpa[i]) + "\n";
    for (double p : r.actual_kpa[i]) {
      pmin = std::min(pmin, p);
      pmax = std::max(pmax, p);
    }
  }
  json body{{"axis", std::string(axis_name(axis))},
            {"amplitude_deg", spec.amplitude_deg},
            {"period_s", spec.period_s},
            {"cycles", spec.cycles},
            {"sample_interval_s", r.sample_interval_s},
            {"samples", r.time_s.size()},
            {"delay_s", r.metrics.delay_s ? json(*r.metrics.delay_s) : json(nullptr)},
            {"rmse_deg", r.metrics.rmse_deg},
            {"lag_samples", r.metrics.lag_samples},
            {"pressure_min_kpa", pmin},
            {"pressure_max_kpa", pmax},
            {"note", r.metrics.note}};
  out << "track " << axis_name(axis) << ": rmse " << format_number(r.metrics.rmse_deg) << " deg, delay "
      << (r.metrics.delay_s ? format_number(*r.metrics.delay_s) + " s" : std::string("undefined")) << "\n";
  OutputSet o;
  o.add(name + ".csv", csv);
  o.add(name + "_metrics.json", dump(with_manifest(m, body)));
  return o;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data, std::uint64_t hash) {
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

io::json RunManifest::to_json() const {
  json paths = json::object(), over = json::object();
  for (const auto& [k, v] : config_paths) paths[k] = v;
  for (const auto& [k, v] : overrides) over[k] = v;
  return json{{"command", command},   {"config_paths", paths},        {"overrides", over},
              {"out_dir", out_dir},   {"tool_version", tool_version}, {"input_hash", input_hash}};
}

std::string RunManifest::csv_comment() const { return "# manifest: " + to_json().dump() + "\n"; }

void commit(const std::string& dir, const OutputSet& outputs) {
  fs::create_directories(dir);
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& [tmp, dst] : staged) fs::remove(tmp, ec);
  };
  for (const auto& [name, content] : outputs.files) {
    const fs::path dst = fs::path(dir) / name;
    const fs::path tmp = fs::path(dir) / ("." + name + ".tmp");
    staged.emplace_back(tmp, dst);
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) {
      cleanup();
      throw ConfigError("cannot write '" + tmp.string() + "'");
    }
  }
  for (const auto& [tmp, dst] : staged) fs::rename(tmp, dst);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{std::string("fpamexo: fPAM head-neck exosuit modelling toolkit.\n") + kUnits, "fpamexo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FPAM_EXO_VERSION);

  std::string out_dir = ".";
  auto add_out = [&](CLI::App* s) { s->add_option("--out", out_dir, "Output directory")->capture_default_str(); };
  auto add_suit = [](CLI::App* s, std::string& path) {
    s->add_option("--config", path, "Suit config JSON (default: built-in suit)")->group("Inputs");
  };

  FitArgs fit_a;
  auto* fit = app.add_subcommand("fit", "Calibrate the force law from tensile-test CSV (pressure_kpa,length_m,force_n)");
  fit->add_option("--data", fit_a.data, "Tensile-test CSV")->required()->group("Inputs");
  fit->add_option("--L0", fit_a.L0, "Fully stretched length of the tested actuator, m")->required();
  fit->add_option("--sign-convention", fit_a.sign, "as_printed | flipped_ideal_term")
      ->check(CLI::IsMember({"as_printed", "flipped_ideal_term"}))
      ->capture_default_str();
  add_out(fit);

  SynthArgs synth_a;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic tensile-test CSV from the nominal force law");
  synth->add_option("--seed", synth_a.seed, "RNG seed for the force noise")->capture_default_str();
  synth->add_option("--noise", synth_a.noise, "Force noise standard deviation, N")->capture_default_str();
  synth->add_option("--L0", synth_a.L0, "Fully stretched length, m")->capture_default_str();
  synth->add_option("--sign-convention", synth_a.sign, "as_printed | flipped_ideal_term")
      ->check(CLI::IsMember({"as_printed", "flipped_ideal_term"}))
      ->capture_default_str();
  add_out(synth);

  SolveArgs solve_a;
  auto* solve = app.add_subcommand("solve", "Gravity-compensation pressures at one pose or a CSV of poses");
  add_suit(solve, solve_a.config);
  solve->add_option("--pose", solve_a.pose, "Pose as fe,ld,ar in degrees (use --pose=-30,0,0 for negatives)");
  solve->add_option("--poses", solve_a.poses, "CSV with header theta_x,theta_y,theta_z")->group("Inputs");
  add_out(solve);

  RomArgs rom_a;
  auto* rom = app.add_subcommand("rom", "Range-of-motion scans along the principal axes");
  add_suit(rom, rom_a.config);
  rom->add_option("--axis", rom_a.axis, "FE, LD or AR (default: all three)");
  rom->add_option("--samples", rom_a.samples, "Samples across the biological range")->capture_default_str();
  rom->add_option("--limit", rom_a.limit, "Compression-force limit, N");
  add_out(rom);

  WorkspaceArgs ws_a;
  auto* ws = app.add_subcommand("workspace", "Visual-target workspace grid (73 x 41, 2.5 deg steps)");
  add_suit(ws, ws_a.config);
  ws->add_option("--limits", ws_a.limits, "Compression-force limits, N")->delimiter(',')->capture_default_str();
  add_out(ws);

  DesignArgs design_a;
  auto* design = app.add_subcommand("design", "Torque comparison of actuator placement configurations");
  add_suit(design, design_a.config);
  design->add_option("--ids", design_a.ids, "Config ids")->delimiter(',')->capture_default_str();
  design->add_option("--resolution", design_a.resolution, "Angle sweep resolution, deg")->capture_default_str();
  design->add_option("--pressure", design_a.pressure, "Pressure on the evaluated actuators, kPa");
  design->add_option("--measured", design_a.measured, "Measured-force reference CSV")->group("Inputs");
  add_out(design);

  TrackArgs track_a;
  auto* trk = app.add_subcommand("track", "Closed-loop sinusoid tracking simulation");
  add_suit(trk, track_a.config);
  trk->add_option("--plant", track_a.plant, "Plant config JSON (default: built-in)")->group("Inputs");
  trk->add_option("--controller", track_a.controller, "Controller config JSON (default: built-in for the axis)")
      ->group("Inputs");
  trk->add_option("--axis", track_a.axis, "FE, LD or AR")->capture_default_str();
  trk->add_option("--amplitude", track_a.amplitude, "Reference amplitude, deg")->capture_default_str();
  trk->add_option("--period", track_a.period, "Reference period, s")->capture_default_str();
  trk->add_option("--cycles", track_a.cycles, "Number of periods")->capture_default_str();
  add_out(trk);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    OutputSet o;
    if (*fit) o = cmd_fit(*fit, fit_a, out_dir, out);
    else if (*synth) o = cmd_synth(*synth, synth_a, out_dir, out);
    else if (*solve) o = cmd_solve(*solve, solve_a, out_dir, out);
    else if (*rom) o = cmd_rom(*rom, rom_a, out_dir, out);
    else if (*ws) o = cmd_workspace(*ws, ws_a, out_dir, out);
    else if (*design) o = cmd_design(*design, design_a, out_dir, out);
    else if (*trk) o = cmd_track(*trk, track_a, out_dir, out);
    commit(out_dir, o);
    for (const auto& f : o.files) out << "wrote " << (fs::path(out_dir) / f.first).string() << "\n";
    return kExitOk;
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const SimulationFault& e) {
    err << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    // Config, domain, fit and geometry errors are all problems with the input.
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace fpam_exo::cli
