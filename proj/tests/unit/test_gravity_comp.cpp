#include <gtest/gtest.h>

#include "fpam_exo/default_suit.hpp"
#include "fpam_exo/gravity_comp.hpp"

using namespace fpam_exo;

namespace {

SuitConfig zero_arm_suit() {
  SuitConfig suit;
  for (int ch = 1; ch <= 5; ++ch) {
    Actuator a;
    a.path.head_mount = {0.02 * ch - 0.06, 0.03, 0.1};
    a.path.vest_mount = Vec3::Zero();  // line of action through the joint
    a.path.channel = ch;
    a.fpam.L0_m = 0.2;
    suit.actuators.push_back(a);
  }
  return suit;
}

}  // namespace

TEST(SolvePose, NeutralDefaultSuit) {
  const auto suit = default_suit();
  const auto r = solve_pose(suit, HeadPose{});
  EXPECT_TRUE(r.tau_gravity.isZero(0.0));
  EXPECT_TRUE(r.reachable);
  ASSERT_TRUE(r.pressures.has_value());
  EXPECT_TRUE(r.grav_ok);
  EXPECT_LE(r.torque_error.norm(), 0.01);
  EXPECT_FALSE(std::isfinite(r.relative_error));
  EXPECT_EQ(r.limiting_condition, LimitingCondition::none);
}

TEST(SolvePose, ReachAndGravityAreIndependent) {
  const auto suit = default_suit();
  // deep flexion stretches the back actuators past L0
  const auto r = solve_pose(suit, HeadPose{-58.0, 0.0, 0.0});
  EXPECT_FALSE(r.reachable);
  EXPECT_LT(r.min_eps, 0.0);
  EXPECT_EQ(r.limiting_condition, LimitingCondition::reach);
  ASSERT_TRUE(r.pressures.has_value());
  EXPECT_TRUE(r.grav_ok);
}

TEST(SolvePose, ZeroMomentArmsCannotCompensate) {
  const auto r = solve_pose(zero_arm_suit(), HeadPose{-30.0, 0.0, 0.0});
  EXPECT_TRUE(r.reachable);
  EXPECT_FALSE(r.grav_ok);
  EXPECT_EQ(r.limiting_condition, LimitingCondition::torque_error);
  EXPECT_NEAR(r.relative_error, 1.0, 1e-9);
}

TEST(SolvePose, GravOkPressuresReproduceTorque) {
  const auto suit = default_suit();
  for (double fe = -50.0; fe <= 60.0; fe += 5.0) {
    for (double ar = -30.0; ar <= 30.0; ar += 10.0) {
      const HeadPose pose{fe, 0.0, ar};
      const auto r = solve_pose(suit, pose);
      if (!r.grav_ok) continue;
      const auto b = evaluate(suit, pose, *r.pressures);
      const double err = (b.tau_fpam + b.tau_gravity).norm();
      EXPECT_LE(err, std::max(0.25 * b.tau_gravity.norm(), 0.01) + 1e-12);
      EXPECT_NEAR(err, r.torque_error.norm(), 1e-9);
      for (double p : *r.pressures) {
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 138.0);
      }
    }
  }
}

TEST(SolvePose, CompressionAtSolvedPressures) {
  const auto suit = default_suit();
  const HeadPose pose{-20.0, 5.0, 0.0};
  const auto r = solve_pose(suit, pose);
  ASSERT_TRUE(r.pressures.has_value());
  EXPECT_NEAR(r.compression_n, evaluate(suit, pose, *r.pressures, PressureCheck::unchecked).compression_n, 1e-9);
}

TEST(SolvePose, PressureLimitFlagged) {
  auto suit = default_suit();
  for (auto& a : suit.actuators) a.fpam.P_max_kpa = 1.0;
  const auto r = solve_pose(suit, HeadPose{-40.0, 0.0, 0.0});
  ASSERT_TRUE(r.pressures.has_value());
  EXPECT_FALSE(r.grav_ok);
  EXPECT_EQ(r.limiting_condition, LimitingCondition::pressure_limit);
}

TEST(SolvePose, Deterministic) {
  const auto suit = default_suit();
  const HeadPose pose{-33.3, 7.1, -12.9};
  const auto a = solve_pose(suit, pose), b = solve_pose(suit, pose);
  EXPECT_EQ(*a.pressures, *b.pressures);
  EXPECT_EQ(a.torque_error, b.torque_error);
  EXPECT_EQ(a.compression_n, b.compression_n);
}

TEST(Classify, CompressionLimits) {
  const auto suit = default_suit();
  const HeadPose pose{-25.0, 0.0, 10.0};
  EXPECT_TRUE(classify(suit, pose, std::numeric_limits<double>::infinity()).compression_ok);
  EXPECT_TRUE(classify(suit, pose, std::nullopt).compression_ok);
  // the flag is compression <= limit
  const auto rep = solve_pose(suit, pose);
  EXPECT_TRUE(classify(rep, rep.compression_n).compression_ok);
  EXPECT_TRUE(classify(rep, rep.compression_n + 1.0).compression_ok);
  EXPECT_FALSE(classify(rep, rep.compression_n - 1.0).compression_ok);
}

TEST(Classify, MonotoneInLimit) {
  const auto suit = default_suit();
  const auto rep = solve_pose(suit, HeadPose{-35.0, 0.0, 0.0});
  bool prev = false;
  for (double limit = 0.0; limit <= 400.0; limit += 5.0) {
    const bool ok = classify(rep, limit).compression_ok;
    EXPECT_TRUE(ok || !prev);
    prev = ok;
  }
  EXPECT_TRUE(prev);
}
