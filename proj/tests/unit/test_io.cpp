#include <gtest/gtest.h>

#include "fpam_exo/default_suit.hpp"
#include "fpam_exo/io.hpp"

using namespace fpam_exo;
using io::json;

namespace {

std::string source_path(const std::string& rel) { return std::string(FPAM_EXO_SOURCE_DIR) + "/" + rel; }

json load(const std::string& rel) { return json::parse(io::read_file(source_path(rel))); }

template <class F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Io, SuitRoundTrip) {
  const auto suit = default_suit();
  const json j = io::to_json(suit);
  const auto back = io::suit_from_json(j);
  EXPECT_EQ(io::to_json(back), j);
  ASSERT_EQ(back.actuators.size(), suit.actuators.size());
  for (std::size_t i = 0; i < suit.actuators.size(); ++i) {
    EXPECT_EQ(back.actuators[i].path.head_mount, suit.actuators[i].path.head_mount);
    EXPECT_EQ(back.actuators[i].fpam.L0_m, suit.actuators[i].fpam.L0_m);
    EXPECT_EQ(back.actuators[i].fpam.sign_convention, suit.actuators[i].fpam.sign_convention);
  }
}

TEST(Io, PlantAndControllerRoundTrip) {
  EXPECT_EQ(io::to_json(io::plant_from_json(io::to_json(default_plant()))), io::to_json(default_plant()));
  for (Axis ax : {Axis::FE, Axis::LD, Axis::AR}) {
    const json j = io::to_json(default_controller(ax));
    EXPECT_EQ(io::to_json(io::controller_from_json(j)), j);
  }
}

TEST(Io, ShippedConfigsMatchBuiltInDefaults) {
  EXPECT_EQ(io::to_json(io::suit_from_json(load("configs/default_suit.json"))), io::to_json(default_suit()));
  EXPECT_EQ(io::to_json(io::plant_from_json(load("configs/plant.json"))), io::to_json(default_plant()));
  EXPECT_EQ(io::to_json(io::controller_from_json(load("configs/controller_fe.json"))),
            io::to_json(default_controller(Axis::FE)));
  EXPECT_EQ(io::to_json(io::controller_from_json(load("configs/controller_ld.json"))),
            io::to_json(default_controller(Axis::LD)));
  EXPECT_EQ(io::to_json(io::controller_from_json(load("configs/controller_ar.json"))),
            io::to_json(default_controller(Axis::AR)));
}

TEST(Io, SuitErrors) {
  json j = io::to_json(default_suit());
  j["actuators"][0].erase("channel");
  EXPECT_NE(error_of([&] { io::suit_from_json(j); }).find("actuators[0]"), std::string::npos);
  j = io::to_json(default_suit());
  j["actuators"][2]["channel"] = 9;
  EXPECT_THROW(io::suit_from_json(j), std::exception);
  j = io::to_json(default_suit());
  j.erase("body");
  EXPECT_THROW(io::suit_from_json(j), ConfigError);
  EXPECT_THROW(io::suit_from_json(json::array()), ConfigError);
  EXPECT_THROW(io::load_suit(source_path("no/such/file.json")), ConfigError);
}

TEST(Io, ControllerErrors) {
  json j = io::to_json(default_controller(Axis::AR));
  j["loops"][1]["agonist"] = {3};
  EXPECT_THROW(io::controller_from_json(j), ConfigError);
  j = io::to_json(default_controller(Axis::FE));
  j["loops"][0]["axis"] = "XY";
  EXPECT_THROW(io::controller_from_json(j), ConfigError);
}

TEST(Io, TensileCsvRoundTrip) {
  const std::vector<TensileSample> s{{0.0, 0.3, 1.5}, {34.5, 0.27, 40.125}, {138.0, 0.2551, -3.0}};
  const auto back = io::parse_tensile_csv(io::tensile_csv(s));
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(back[i].pressure_kpa, s[i].pressure_kpa);
    EXPECT_EQ(back[i].length_m, s[i].length_m);
    EXPECT_EQ(back[i].force_n, s[i].force_n);
  }
}

TEST(Io, TensileCsvColumnsAnyOrderWithComments) {
  const auto s = io::parse_tensile_csv("# bench run\nforce_n, length_m ,pressure_kpa\n10,0.29,68.9\n\n# end\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].pressure_kpa, 68.9);
  EXPECT_EQ(s[0].length_m, 0.29);
  EXPECT_EQ(s[0].force_n, 10.0);
}

TEST(Io, TensileCsvErrors) {
  EXPECT_EQ(error_of([] { io::parse_tensile_csv(""); }), "no samples");
  EXPECT_EQ(error_of([] { io::parse_tensile_csv("pressure_kpa,length_m,force_n\n"); }), "no samples");
  EXPECT_NE(error_of([] { io::parse_tensile_csv("pressure_kpa,force_n\n1,2\n"); }).find("'length_m'"),
            std::string::npos);
  const std::string bad = "pressure_kpa,length_m,force_n\n1,0.3,2\n1,abc,2\n";
  const auto msg = error_of([&] { io::parse_tensile_csv(bad); });
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("length_m"), std::string::npos) << msg;
  EXPECT_NE(error_of([] { io::parse_tensile_csv("pressure_kpa,length_m,force_n\n1,0.3\n"); }).find("line 2"),
            std::string::npos);
  EXPECT_NE(error_of([] { io::parse_tensile_csv("pressure_kpa,length_m,force_n\n-1,0.3,2\n"); }).find("negative"),
            std::string::npos);
  EXPECT_THROW(io::parse_tensile_csv("pressure_kpa,length_m,force_n\n1,0,2\n"), ConfigError);
  EXPECT_THROW(io::parse_tensile_csv("pressure_kpa,length_m,force_n\n1,0.3,nan\n"), ConfigError);
}

TEST(Io, MeasuredReference) {
  const auto m = io::parse_measured_reference(io::read_file(source_path("data/measured_forces.csv")));
  ASSERT_EQ(m.size(), 6u);
  EXPECT_EQ(m[0].config_id, 1);
  EXPECT_EQ(m[0].axis, Axis::LD);
  EXPECT_EQ(m[0].force_n, 22.6);
  EXPECT_EQ(m[4].config_id, 5);
  EXPECT_EQ(m[4].axis, Axis::AR);
  EXPECT_EQ(m[4].force_n, 23.2);
  EXPECT_THROW(io::parse_measured_reference("config_id,axis,force_n\n1,LD\n"), ConfigError);
}

TEST(Io, FormatNumberShortestRoundTrip) {
  EXPECT_EQ(io::format_number(0.1), "0.1");
  EXPECT_EQ(io::format_number(138.0), "138");
  EXPECT_EQ(io::format_number(std::nan("")), "nan");
  EXPECT_EQ(io::format_number(-std::numeric_limits<double>::infinity()), "-inf");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(io::format_number(x)), x);
}

TEST(Io, FeasibilityReportNullsWhenAbsent) {
  FeasibilityReport r;
  r.relative_error = std::numeric_limits<double>::infinity();
  const json j = io::to_json(r);
  EXPECT_TRUE(j["pressures_kpa"].is_null());
  EXPECT_TRUE(j["relative_error"].is_null());
}
