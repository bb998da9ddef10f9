// Copyright 2026 The softgrasp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "softgrasp/contact.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace softgrasp {
namespace {

PlanarArm straight_arm(Side side, const Vec2& base, double orientation) {
  PlanarArm arm;
  arm.side = side;
  arm.base_position = base;
  arm.base_orientation = orientation;
  arm.link_lengths = {0.3, 0.25, 0.15};
  arm.link_radii = {0.08, 0.075, 0.07};
  arm.paw_radius = 0.075;
  for (auto& lim : arm.joint_limits) lim = {-M_PI, M_PI};
  return arm;
}

std::array<ChamberModel, kSensorsPerArm> default_chambers(const PlanarArm& arm) {
  std::array<ChamberModel, kSensorsPerArm> ch{};
  for (int s = 0; s < kSensorsPerArm; ++s) {
    auto& c = ch[static_cast<size_t>(s)];
    c.outer_radius = s == kPawSensor ? arm.paw_radius
                                     : arm.link_radii[static_cast<size_t>(s)];
    c.thickness = 0.035;
    c.patch_length = 0.3;
  }
  return ch;
}

TEST(DetectContacts, FarObjectYieldsEmptySet) {
  PlanarArm left = straight_arm(Side::Left, Vec2(-0.26, 0.0), M_PI / 2.0);
  PlanarArm right = straight_arm(Side::Right, Vec2(0.26, 0.0), M_PI / 2.0);
  ChestGeometry chest;
  Manipuland obj;
  obj.pose.p = Vec2(3.0, 3.0);
  obj.radius = 0.086;
  EXPECT_TRUE(detect_contacts(left, right, chest, obj, Mode::Soft).empty());
}

// Pot-B-sized circle squeezed by both upper links while resting against the
// chest: at least three independent contact regions.
TEST(DetectContacts, EnvelopedPotTouchesArmsAndChest) {
  ChestGeometry chest;
  Manipuland obj;
  obj.id = "potB";
  obj.radius = 0.086;
  obj.pose.p = Vec2(0.0, chest.forward_offset + obj.radius - 0.003);

  // Aim each upper link to pass the circle at 4 mm overlap.
  const double target = 0.08 + obj.radius - 0.004;
  auto aim = [&](Side side) {
    const double sx = side == Side::Left ? -1.0 : 1.0;
    const Vec2 base(sx * 0.26, -0.05);
    const Vec2 to_center = obj.pose.p - base;
    const double d = to_center.norm();
    const double tilt = std::asin(std::min(1.0, target / d));
    const double aim_angle =
        std::atan2(to_center.y(), to_center.x()) + (side == Side::Left ? -tilt : tilt);
    PlanarArm arm = straight_arm(side, base, 0.0);
    arm.base_orientation = aim_angle;
    return arm;
  };
  PlanarArm left = aim(Side::Left);
  PlanarArm right = aim(Side::Right);

  const ContactSet cs = detect_contacts(left, right, chest, obj, Mode::Soft);
  EXPECT_GE(cs.size(), 3u);

  // Penetration of the left upper link agrees with a sampled distance oracle.
  const LinkSegments segs = forward_kinematics(left);
  const double oracle_dist = oracles::segment_distance_sampled(
      segs.start(0), segs.end(0), obj.pose.p, obj.pose.p);
  bool found = false;
  for (const auto& cp : cs.points) {
    if (cp.source.kind == ContactSource::Kind::ArmSensor &&
        cp.source.side == Side::Left && cp.source.index == 0) {
      EXPECT_NEAR(cp.penetration, 0.08 + obj.radius - oracle_dist, 1e-7);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(DetectContacts, MirrorSymmetricSceneGivesMirrorSymmetricContacts) {
  ChestGeometry chest;
  PlanarArm left = straight_arm(Side::Left, Vec2(-0.26, 0.0), M_PI / 2.0);
  PlanarArm right = straight_arm(Side::Right, Vec2(0.26, 0.0), M_PI / 2.0);
  left.q = {-0.4, -0.3, -0.2};
  right.q = {-0.4, -0.3, -0.2};

  Manipuland obj;
  obj.shape = Manipuland::Shape::Rectangle;
  obj.half_extents = Vec2(0.21, 0.16);
  obj.pose.p = Vec2(0.0, 0.30);
  obj.pose.theta = 0.0;

  const ContactSet cs = detect_contacts(left, right, chest, obj, Mode::Soft);
  for (const auto& cp : cs.points) {
    if (cp.source.kind != ContactSource::Kind::ArmSensor) continue;
    // Find the partner on the other side.
    bool matched = false;
    for (const auto& other : cs.points) {
      if (other.source.kind != ContactSource::Kind::ArmSensor) continue;
      if (other.source.index != cp.source.index ||
          other.source.side == cp.source.side) {
        continue;
      }
      matched = true;
      EXPECT_NEAR(other.position.x(), -cp.position.x(), 1e-9);
      EXPECT_NEAR(other.position.y(), cp.position.y(), 1e-9);
      EXPECT_NEAR(other.penetration, cp.penetration, 1e-9);
    }
    EXPECT_TRUE(matched) << cp.source.label();
  }
}

TEST(ContactForces, NoPenetrationNoForce) {
  ContactSet cs;
  cs.mode = Mode::Soft;
  ContactParams params;
  const auto res = contact_forces(cs, params);
  EXPECT_TRUE(res.contacts.empty());
  for (double v : res.left_tactile.dp) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(ContactForces, SoftSingleContactMatchesClosedForm) {
  PlanarArm arm = straight_arm(Side::Left, Vec2(0, 0), 0.0);
  ContactParams params;
  params.chambers = default_chambers(arm);

  ContactSet cs;
  cs.mode = Mode::Soft;
  ContactPoint cp;
  cp.source = {ContactSource::Kind::ArmSensor, Side::Left, 1};
  cp.position = Vec2(0.4, 0.075);
  cp.normal = Vec2(0.0, 1.0);
  cp.penetration = 0.005;
  cp.feature = SurfaceFeature::Face;
  const ChamberModel& ch = params.chambers[1];
  cs.points.push_back(cp);

  const auto res = contact_forces(cs, params);

  // Recompute through the published model: lens chord, coverage-scaled
  // displaced volume, ideal-gas pressure, force = deltaP * chord * patch.
  const double chord = 2.0 * std::sqrt(0.005 * (2.0 * ch.outer_radius - 0.005));
  const double arc = 2.0 * M_PI * std::min(1.0, chord / ch.patch_length);
  const double vol = circular_segment_area(ch.outer_radius, 0.005) *
                     ch.patch_length * arc / (2.0 * M_PI);
  const double dp_hpa =
      ch.rest_pressure * (ch.rest_volume / (ch.rest_volume - vol) - 1.0) / 100.0;
  const double expected = dp_hpa * 100.0 * chord * ch.patch_length;

  EXPECT_NEAR(res.left_tactile.dp[1], dp_hpa, 1e-12);
  EXPECT_NEAR(res.contacts.points[0].normal_force, expected, 1e-9);
  EXPECT_GT(expected, 0.0);
}

TEST(ContactForces, HardModeIsLinearPenalty) {
  ContactSet cs;
  cs.mode = Mode::Hard;
  ContactPoint cp;
  cp.source = {ContactSource::Kind::ArmSensor, Side::Left, 0};
  cp.penetration = 0.005;
  cp.normal = Vec2(1.0, 0.0);
  cs.points.push_back(cp);
  ContactParams params;
  const auto res = contact_forces(cs, params);
  EXPECT_DOUBLE_EQ(res.contacts.points[0].normal_force, 500.0);
  for (double v : res.left_tactile.dp) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(ContactForces, SoftForceContinuousAtFirstTouch) {
  PlanarArm arm = straight_arm(Side::Left, Vec2(0, 0), 0.0);
  ContactParams params;
  params.chambers = default_chambers(arm);
  ContactSet cs;
  cs.mode = Mode::Soft;
  ContactPoint cp;
  cp.source = {ContactSource::Kind::ArmSensor, Side::Left, 0};
  cp.penetration = 1e-7;
  cp.normal = Vec2(1.0, 0.0);
  cp.feature = SurfaceFeature::Face;
  cs.points.push_back(cp);
  const auto res = contact_forces(cs, params);
  EXPECT_LT(res.contacts.points[0].normal_force, 1e-3);
}

TEST(VerticalLoadCapacity, EmptyAndArithmeticCases) {
  ContactSet cs;
  EXPECT_DOUBLE_EQ(vertical_load_capacity(cs, 0.8), 0.0);

  for (int i = 0; i < 2; ++i) {
    ContactPoint cp;
    cp.normal_force = 25.0;
    cp.normal = Vec2(1.0, 0.0);
    cs.points.push_back(cp);
  }
  EXPECT_DOUBLE_EQ(vertical_load_capacity(cs, 0.8), 40.0);
}

TEST(VerticalLoadCapacity, MatchesBruteForceSum) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> force(0.0, 50.0);
  std::uniform_real_distribution<double> mu_dist(0.0, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    ContactSet cs;
    const int n = static_cast<int>(rng() % 8);
    double expected = 0.0;
    const double mu = mu_dist(rng);
    for (int i = 0; i < n; ++i) {
      ContactPoint cp;
      cp.normal_force = force(rng);
      expected += mu * cp.normal_force;
      cs.points.push_back(cp);
    }
    EXPECT_NEAR(vertical_load_capacity(cs, mu), expected, 1e-12);
  }
}

TEST(VerticalLoadCapacity, MonotoneInPenetrationScale) {
  PlanarArm arm = straight_arm(Side::Left, Vec2(0, 0), 0.0);
  ContactParams params;
  params.chambers = default_chambers(arm);
  auto capacity_at = [&](double scale) {
    ContactSet cs;
    cs.mode = Mode::Soft;
    for (int s = 0; s < 3; ++s) {
      ContactPoint cp;
      cp.source = {ContactSource::Kind::ArmSensor, Side::Left, s};
      cp.penetration = scale * (0.004 + 0.002 * s);
      cp.normal = Vec2(1.0, 0.0);
      cp.feature = SurfaceFeature::Face;
      cs.points.push_back(cp);
    }
    return vertical_load_capacity(contact_forces(cs, params).contacts, 0.8);
  };
  double prev = 0.0;
  for (double scale = 0.2; scale <= 2.0; scale += 0.2) {
    const double cap = capacity_at(scale);
    EXPECT_GE(cap, prev - 1e-12);
    prev = cap;
  }
}

TEST(ContactForces, FrictionConeAndPositivityHold) {
  PlanarArm arm = straight_arm(Side::Left, Vec2(0, 0), 0.0);
  ContactParams params;
  params.chambers = default_chambers(arm);
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> pen(0.0, 0.02);
  for (int trial = 0; trial < 100; ++trial) {
    ContactSet cs;
    cs.mode = trial % 2 == 0 ? Mode::Soft : Mode::Hard;
    for (int s = 0; s < kSensorsPerArm; ++s) {
      ContactPoint cp;
      cp.source = {ContactSource::Kind::ArmSensor,
                   trial % 3 == 0 ? Side::Right : Side::Left, s};
      cp.penetration = pen(rng);
      cp.normal = Vec2(1.0, 0.0);
      cp.feature = SurfaceFeature::Face;
      cs.points.push_back(cp);
    }
    const auto res = contact_forces(cs, params);
    for (const auto& cp : res.contacts.points) {
      EXPECT_GE(cp.normal_force, 0.0);
      EXPECT_LE(std::abs(cp.tangent_force), 0.8 * cp.normal_force + 1e-12);
    }
  }
}

TEST(ArmJointTorques, SingleContactMatchesCrossProduct) {
  PlanarArm arm = straight_arm(Side::Left, Vec2(0.0, 0.0), 0.0);
  arm.q = {0.0, 0.0, 0.0};

  ContactSet cs;
  ContactPoint cp;
  cp.source = {ContactSource::Kind::ArmSensor, Side::Left, 1};  // forearm
  cp.position = Vec2(0.4, 0.075);
  cp.normal = Vec2(0.0, 1.0);  // pushes the object up; reaction pushes arm down
  cp.normal_force = 10.0;
  cs.points.push_back(cp);

  const auto tau = arm_joint_torques(arm, cs);
  // Reaction (0,-10) at x=0.4: torque about joint 0 (origin) and joint 1 (0.3,0).
  EXPECT_NEAR(tau[0], -4.0, 1e-12);
  EXPECT_NEAR(tau[1], -1.0, 1e-12);
  EXPECT_DOUBLE_EQ(tau[2], 0.0);
}

TEST(ArmJointTorques, RightArmSpinConvention) {
  PlanarArm arm = straight_arm(Side::Right, Vec2(0.0, 0.0), 0.0);
  arm.q = {0.0, 0.0, 0.0};
  ContactSet cs;
  ContactPoint cp;
  cp.source = {ContactSource::Kind::ArmSensor, Side::Right, 0};
  cp.position = Vec2(0.2, 0.08);
  cp.normal = Vec2(0.0, 1.0);
  cp.normal_force = 5.0;
  cs.points.push_back(cp);
  const auto tau = arm_joint_torques(arm, cs);
  // Same world torque as a Left arm, but reported in the mirrored convention.
  EXPECT_NEAR(tau[0], 1.0, 1e-12);
}

}  // namespace
}  // namespace softgrasp
