#include <gtest/gtest.h>

#include <random>
#include <set>

#include <Eigen/Geometry>

#include "fpam_exo/default_suit.hpp"
#include "fpam_exo/geometry.hpp"

using namespace fpam_exo;

namespace {

Mat3 angle_axis(double deg, const Vec3& axis) { return Eigen::AngleAxisd(deg * M_PI / 180.0, axis).toRotationMatrix(); }

HeadPose random_pose(std::mt19937_64& rng, double max_y = 85.0) {
  std::uniform_real_distribution<double> u(-179.0, 179.0), v(-max_y, max_y);
  return {u(rng), v(rng), u(rng)};
}

ActuatorPath simple_path(Vec3 head, Vec3 vest, std::vector<Vec3> waypoints = {}) {
  ActuatorPath p;
  p.head_mount = head;
  p.vest_mount = vest;
  p.waypoints = std::move(waypoints);
  return p;
}

FpamParams unit_length() {
  FpamParams p;
  p.L0_m = 1.0;
  return p;
}

}  // namespace

TEST(Rotation, IdentityAtNeutral) { EXPECT_TRUE(rotation(HeadPose{}).isApprox(Mat3::Identity(), 0.0)); }

TEST(Rotation, FlexionTiltsUpAxisForward) {
  const Vec3 v = rotation({-30.0, 0.0, 0.0}) * Vec3(0, 0, 1);
  EXPECT_NEAR(v.x(), 0.0, 1e-15);
  EXPECT_NEAR(v.y(), 0.5, 1e-15);
  EXPECT_NEAR(v.z(), std::sqrt(3.0) / 2.0, 1e-15);
}

TEST(Rotation, BodyFixedXYZComposition) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const HeadPose p = random_pose(rng, 179.0);
    const Mat3 oracle = angle_axis(p.theta_x_deg, Vec3::UnitX()) * angle_axis(p.theta_y_deg, Vec3::UnitY()) *
                        angle_axis(p.theta_z_deg, Vec3::UnitZ());
    const Mat3 R = rotation(p);
    EXPECT_LE((R - oracle).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(R.determinant(), 1.0, 1e-12);
  }
}

TEST(Rotation, EulerDecompositionRoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const HeadPose p = random_pose(rng);
    const HeadPose q = euler_xyz(rotation(p));
    EXPECT_NEAR(q.theta_x_deg, p.theta_x_deg, 1e-9);
    EXPECT_NEAR(q.theta_y_deg, p.theta_y_deg, 1e-9);
    EXPECT_NEAR(q.theta_z_deg, p.theta_z_deg, 1e-9);
  }
}

TEST(HeadPose, ValidateRange) {
  EXPECT_NO_THROW((HeadPose{180.0, 0.0, 0.0}.validate()));
  EXPECT_THROW((HeadPose{-180.0, 0.0, 0.0}.validate()), DomainError);
  EXPECT_THROW((HeadPose{0.0, 181.0, 0.0}.validate()), DomainError);
  EXPECT_THROW((HeadPose{0.0, 0.0, std::nan("")}.validate()), DomainError);
}

TEST(ActuatorState, ColinearSegment) {
  const auto st = actuator_state(simple_path({0.02, 0.03, 0.1}, {0.02, 0.03, -0.15}), unit_length(), HeadPose{});
  EXPECT_NEAR(st.length_m, 0.25, 1e-15);
  EXPECT_NEAR(st.direction.x(), 0.0, 1e-15);
  EXPECT_NEAR(st.direction.y(), 0.0, 1e-15);
  EXPECT_NEAR(st.direction.z(), -1.0, 1e-15);
}

TEST(ActuatorState, WaypointSegmentSum) {
  const auto path = simple_path({0, 0.05, 0.10}, {0, 0.09, -0.10}, {{0, 0.09, -0.02}});
  const auto st = actuator_state(path, unit_length(), HeadPose{});
  const double oracle = std::hypot(0.04, 0.12) + 0.08;
  EXPECT_NEAR(st.length_m, oracle, 1e-15);
  EXPECT_NEAR(st.length_m, 0.20649, 5e-6);
  // direction from the final segment only
  EXPECT_NEAR(st.direction.y(), 0.04 / std::hypot(0.04, 0.12), 1e-15);
  EXPECT_NEAR(st.direction.z(), -0.12 / std::hypot(0.04, 0.12), 1e-15);
}

TEST(ActuatorState, ContractionFromL0) {
  FpamParams p;
  p.L0_m = 0.30;
  const auto st = actuator_state(simple_path({0, 0, 0.1}, {0, 0, -0.17}), p, HeadPose{});
  EXPECT_NEAR(st.eps, 0.1, 1e-12);
}

TEST(ActuatorState, DegenerateFinalSegment) {
  EXPECT_THROW(actuator_state(simple_path({0, 0.05, 0.1}, {0, 0.05, 0.1}), unit_length(), HeadPose{}), GeometryError);
  EXPECT_THROW(actuator_state(simple_path({0, 0.05, 0.1}, {0, 0, -0.2}, {{0, 0.05, 0.1}}), unit_length(), HeadPose{}),
               GeometryError);
}

TEST(ActuatorState, UnitDirectionEverywhere) {
  const auto suit = default_suit();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Mat3 R = rotation(random_pose(rng, 60.0));
    for (const auto& st : actuator_states(suit, R)) EXPECT_NEAR(st.direction.norm(), 1.0, 1e-12);
  }
}

TEST(ActuatorState, LengthInvariantUnderTranslation) {
  const auto suit = default_suit();
  const Vec3 t(0.3, -1.2, 0.7);
  for (const auto& a : suit.actuators) {
    ActuatorPath moved = a.path;
    moved.head_mount += t;
    moved.vest_mount += t;
    for (auto& w : moved.waypoints) w += t;
    EXPECT_NEAR(actuator_state(moved, a.fpam, HeadPose{}).length_m, actuator_state(a.path, a.fpam, HeadPose{}).length_m,
                1e-14);
  }
}

TEST(ActuatorState, MirrorConjugation) {
  const auto suit = default_suit();
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const HeadPose p = random_pose(rng, 60.0);
    const HeadPose q{p.theta_x_deg, -p.theta_y_deg, -p.theta_z_deg};
    for (const auto& a : suit.actuators) {
      const auto s = actuator_state(a.path, a.fpam, p);
      const auto m = actuator_state(mirror_path(a.path), a.fpam, q);
      EXPECT_NEAR(m.moment_arm.x(), s.moment_arm.x(), 1e-14);
      EXPECT_NEAR(m.moment_arm.y(), -s.moment_arm.y(), 1e-14);
      EXPECT_NEAR(m.moment_arm.z(), -s.moment_arm.z(), 1e-14);
      EXPECT_NEAR(m.length_m, s.length_m, 1e-14);
    }
  }
}

// dL/dtheta = -c . (dR/dtheta b) against central differences.
TEST(ActuatorState, LengthDerivativeMatchesFiniteDifference) {
  const auto suit = default_suit();
  std::mt19937_64 rng(13);
  const double h = 1e-5;
  for (int i = 0; i < 30; ++i) {
    std::uniform_real_distribution<double> u(-40.0, 40.0);
    const HeadPose p{u(rng), u(rng), u(rng)};
    const double x = p.theta_x_deg * M_PI / 180.0, y = p.theta_y_deg * M_PI / 180.0, z = p.theta_z_deg * M_PI / 180.0;
    auto R_of = [](double a, double b, double c) -> Mat3 { return rot_x(a) * rot_y(b) * rot_z(c); };
    Mat3 dRx, dRy, dRz;
    {
      Mat3 Dx, Dy, Dz;
      Dx << 0, 0, 0, 0, -std::sin(x), -std::cos(x), 0, std::cos(x), -std::sin(x);
      Dy << -std::sin(y), 0, std::cos(y), 0, 0, 0, -std::cos(y), 0, -std::sin(y);
      Dz << -std::sin(z), -std::cos(z), 0, std::cos(z), -std::sin(z), 0, 0, 0, 0;
      dRx = Dx * rot_y(y) * rot_z(z);
      dRy = rot_x(x) * Dy * rot_z(z);
      dRz = rot_x(x) * rot_y(y) * Dz;
    }
    for (const auto& a : suit.actuators) {
      const auto st = detail::actuator_state_rotated(a.path, a.fpam, R_of(x, y, z));
      const Mat3* dR[3] = {&dRx, &dRy, &dRz};
      for (int k = 0; k < 3; ++k) {
        double plus[3] = {x, y, z}, minus[3] = {x, y, z};
        plus[k] += h;
        minus[k] -= h;
        const double fd =
            (detail::actuator_state_rotated(a.path, a.fpam, R_of(plus[0], plus[1], plus[2])).length_m -
             detail::actuator_state_rotated(a.path, a.fpam, R_of(minus[0], minus[1], minus[2])).length_m) /
            (2.0 * h);
        const double analytic = -st.direction.dot(*dR[k] * a.path.head_mount);
        EXPECT_LE(std::abs(fd - analytic), 1e-6 * std::max(1e-3, std::abs(analytic))) << "axis " << k;
      }
    }
  }
}

TEST(Jacobian, ColumnsAreMomentArms) {
  const auto suit = default_suit();
  const HeadPose p{-20.0, 10.0, 15.0};
  const Jacobian J = jacobian(suit, p);
  ASSERT_EQ(J.cols(), 7);
  for (std::size_t i = 0; i < suit.size(); ++i)
    EXPECT_TRUE(J.col(static_cast<Eigen::Index>(i)).isApprox(actuator_state(suit.actuators[i].path, suit.actuators[i].fpam, p).moment_arm, 0.0));
}

TEST(Jacobian, SymmetricPairsMirrorAtNeutral) {
  const auto suit = default_suit();
  const Jacobian J = jacobian(suit, HeadPose{});
  for (auto [r, l] : {std::pair{0, 2}, std::pair{1, 3}, std::pair{5, 6}}) {
    EXPECT_NEAR(J(0, l), J(0, r), 1e-15);
    EXPECT_NEAR(J(1, l), -J(1, r), 1e-15);
    EXPECT_NEAR(J(2, l), -J(2, r), 1e-15);
  }
  // back middle lies in the sagittal plane
  EXPECT_NEAR(J(1, 4), 0.0, 1e-15);
  EXPECT_NEAR(J(2, 4), 0.0, 1e-15);
}

TEST(Jacobian, ParallelLineOfActionGivesZeroColumn) {
  SuitConfig suit;
  suit.actuators.push_back({simple_path({0.03, 0.04, 0.1}, Vec3::Zero()), unit_length()});
  for (const HeadPose& p : {HeadPose{}, HeadPose{-30, 10, 20}})
    EXPECT_LE(jacobian(suit, p).col(0).norm(), 1e-15);
}

TEST(GravityTorque, Examples) {
  BodyParams b;
  EXPECT_TRUE(gravity_torque(b, HeadPose{}).isZero(0.0));
  const Vec3 t = gravity_torque(b, HeadPose{-30.0, 0.0, 0.0});
  const double oracle = -4.6 * 9.81 * 0.17 * 0.5;
  EXPECT_NEAR(t.x(), oracle, 1e-12);
  EXPECT_NEAR(t.x(), -3.836, 5e-4);
  EXPECT_NEAR(t.y(), 0.0, 1e-15);
  EXPECT_NEAR(t.z(), 0.0, 1e-15);
  for (double z : {-80.0, -10.0, 45.0, 170.0}) EXPECT_LE(gravity_torque(b, HeadPose{0, 0, z}).norm(), 1e-15);
}

TEST(GravityTorque, NoVerticalComponentForAxialCom) {
  BodyParams b;
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(gravity_torque(b, random_pose(rng)).z(), 0.0);
}

TEST(DefaultSuit, Structure) {
  const auto suit = default_suit();
  ASSERT_EQ(suit.size(), 7u);
  EXPECT_NO_THROW(suit.validate());
  std::set<int> channels;
  std::map<int, int> count;
  for (const auto& a : suit.actuators) {
    channels.insert(a.path.channel);
    ++count[a.path.channel];
  }
  EXPECT_EQ(channels.size(), 5u);
  EXPECT_EQ(count[1], 2);
  EXPECT_EQ(count[2], 2);
  EXPECT_EQ(suit.body.mass_kg, 4.6);
  EXPECT_EQ(suit.body.com_offset_m, Vec3(0, 0, 0.17));
  for (const auto& st : actuator_states(suit, Mat3::Identity())) EXPECT_NEAR(st.eps, 0.15, 1e-12);
}

TEST(DefaultSuit, CrossedActuatorsTurnTheHead) {
  const auto suit = default_suit();
  const Jacobian J = jacobian(suit, HeadPose{});
  EXPECT_LT(J(2, 5), 0.0);  // head mount right: right turn
  EXPECT_GT(J(2, 6), 0.0);
}
