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

#include "softgrasp/engine.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace softgrasp {
namespace {

PlanarArm bar_arm(Side side, const Vec2& base, double orientation,
                  double radius = 0.08) {
  PlanarArm arm;
  arm.side = side;
  arm.base_position = base;
  arm.base_orientation = orientation;
  arm.link_lengths = {0.6, 0.1, 0.1};
  arm.link_radii = {radius, radius, radius};
  arm.paw_radius = radius * 0.8;
  for (auto& lim : arm.joint_limits) lim = {-M_PI, M_PI};
  return arm;
}

void fill_chambers(Scene* scene) {
  for (int s = 0; s < kSensorsPerArm; ++s) {
    auto& ch = scene->contact.chambers[static_cast<size_t>(s)];
    ch.outer_radius = s == kPawSensor
                          ? scene->left.paw_radius
                          : scene->left.link_radii[static_cast<size_t>(s)];
    ch.thickness = 0.035;
    ch.patch_length = 0.3;
    ch.rest_volume = 1.0e-3;
  }
}

/// Two long parallel vertical capsules pinching a circle, arms far enough
/// apart to leave `delta` of overlap on each side at x = 0.
Scene pinch_scene(double delta_left, double delta_right, double r, Mode mode) {
  Scene scene;
  scene.mode = mode;
  const double R = 0.08;
  scene.left = bar_arm(Side::Left, Vec2(-(R + r - delta_left), -0.4), M_PI / 2.0, R);
  scene.right = bar_arm(Side::Right, Vec2(R + r - delta_right, -0.4), M_PI / 2.0, R);
  scene.chest.forward_offset = -5.0;  // park the chest away from the pinch
  scene.object.id = "disc";
  scene.object.shape = Manipuland::Shape::Circle;
  scene.object.radius = r;
  scene.object.pose.p = Vec2(0.0, 0.0);
  scene.object.mass = 1.0;
  scene.object.mu = 0.8;
  fill_chambers(&scene);
  return scene;
}

SimConfig quick_cfg(Mode mode) {
  SimConfig cfg;
  cfg.mode = mode;
  cfg.timeout = 2.0;
  return cfg;
}

TEST(Settle, FreeObjectIsAlreadyInEquilibrium) {
  Scene scene = pinch_scene(0.001, 0.001, 0.05, Mode::Soft);
  scene.object.pose.p = Vec2(5.0, 5.0);  // far from everything
  const Pose2 before = scene.object.pose;
  const auto res = settle_object(&scene, quick_cfg(Mode::Soft));
  EXPECT_EQ(res.iterations, 0);
  EXPECT_DOUBLE_EQ(res.residual.force.norm(), 0.0);
  EXPECT_EQ(scene.object.pose.p, before.p);
}

TEST(Settle, SymmetricPinchSettlesOnAxis) {
  for (Mode mode : {Mode::Soft, Mode::Hard}) {
    Scene scene = pinch_scene(0.004, 0.004, 0.06, mode);
    scene.object.pose.p = Vec2(0.0015, 0.0);  // start slightly off axis
    const SimConfig cfg = quick_cfg(mode);
    settle_object(&scene, cfg);
    const auto ev =
        detect_contacts(scene.left, scene.right, scene.chest, scene.object, mode);
    const auto forces = contact_forces(ev, scene.contact);
    const Wrench w = net_object_wrench(forces.contacts, scene.object.pose.p);
    EXPECT_LT(w.force.norm(), cfg.equilibrium_tol_force);
    EXPECT_LT(std::abs(w.torque), cfg.equilibrium_tol_torque);
    EXPECT_EQ(forces.contacts.size(), 2u);
  }
}

TEST(Settle, WrenchNormIsNonincreasing) {
  Scene scene = pinch_scene(0.006, 0.001, 0.06, Mode::Soft);
  scene.object.pose.p = Vec2(0.004, 0.01);
  std::vector<double> norms;
  settle_object(&scene, quick_cfg(Mode::Soft), nullptr, &norms);
  ASSERT_GE(norms.size(), 2u);
  for (size_t i = 1; i < norms.size(); ++i) EXPECT_LE(norms[i], norms[i - 1] + 1e-15);
}

TEST(Settle, GridSearchOracleAgreement) {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int scenes_checked = 0;

  for (int trial = 0; trial < 24; ++trial) {
    const Mode mode = trial % 2 == 0 ? Mode::Hard : Mode::Soft;
    const bool two_contacts = trial >= 12;
    const double r = 0.05 + 0.04 * uni(rng);
    const double d1 = 0.001 + 0.004 * uni(rng);
    const double d2 = 0.001 + 0.004 * uni(rng);

    Scene scene = pinch_scene(d1, d2, r, mode);
    if (!two_contacts) {
      scene.right.base_position.x() += 1.0;  // single contact: left bar only
    }
    scene.object.pose.p = Vec2(0.0, 0.0);

    // Weak tether making the equilibrium unique and the energy well-posed.
    const double k_anchor = 40.0;
    const Vec2 anchor(0.02 * (uni(rng) - 0.5), 0.02 * (uni(rng) - 0.5));
    const ExternalForce tether = [&](const Pose2& pose) {
      return k_anchor * (anchor - pose.p);
    };

    SimConfig cfg = quick_cfg(mode);
    settle_object(&scene, cfg, tether);
    const Vec2 settled = scene.object.pose.p;

    // Independent route: dense grid argmin of tether energy plus contact
    // energy integrated numerically from the force law.
    const auto& left = scene.left;
    const auto& right = scene.right;
    const auto lsegs = forward_kinematics(left);
    const auto rsegs = forward_kinematics(right);
    const double R = left.link_radii[0];
    const ChamberModel& ch = scene.contact.chambers[0];

    // Textbook point-to-segment projection, local to the oracle.
    auto pen_against = [&](const Vec2& center, const LinkSegments& segs) {
      const Vec2 a = segs.start(0), b = segs.end(0);
      const Vec2 ab = b - a;
      const double t =
          std::clamp((center - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
      const double dist = (center - (a + t * ab)).norm();
      return std::max(0.0, R + r - dist);
    };
    auto contact_energy = [&](double pen) {
      if (pen <= 0.0) return 0.0;
      if (mode == Mode::Hard) return 0.5 * scene.contact.k_hard * pen * pen;
      // Soft: U = int_0^pen N(s) ds by Simpson on the published force law.
      const int n = 60;
      const double h = pen / n;
      auto soft_force = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double chord = 2.0 * std::sqrt(std::max(
                                 0.0, s * (2.0 * ch.outer_radius - s)));
        const double arc = 2.0 * M_PI * std::min(1.0, chord / ch.patch_length);
        const double vol = circular_segment_area(ch.outer_radius, s) *
                           ch.patch_length * arc / (2.0 * M_PI);
        const double dp_pa =
            ch.rest_pressure * (ch.rest_volume / (ch.rest_volume - vol) - 1.0);
        return dp_pa * chord * ch.patch_length;
      };
      double sum = soft_force(0.0) + soft_force(pen);
      for (int i = 1; i < n; ++i) sum += soft_force(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
      return sum * h / 3.0;
    };
    auto energy = [&](const Vec2& p) {
      double e = 0.5 * k_anchor * (p - anchor).squaredNorm();
      e += contact_energy(pen_against(p, lsegs));
      if (two_contacts) e += contact_energy(pen_against(p, rsegs));
      return e;
    };

    // Coarse-to-fine grid: 0.4 mm then 40 um resolution.
    Vec2 arg = oracles::grid_argmin(energy, Vec2(0.0, 0.0), 0.04, 200);
    arg = oracles::grid_argmin(energy, arg, 0.004, 200);

    EXPECT_LT((settled - arg).norm(), 1e-3)
        << "trial " << trial << " mode " << (mode == Mode::Hard ? "hard" : "soft");
    ++scenes_checked;
  }
  EXPECT_GE(scenes_checked, 20);
}

TEST(Settle, DeterministicAcrossCalls) {
  Scene a = pinch_scene(0.005, 0.002, 0.07, Mode::Soft);
  a.object.pose.p = Vec2(0.003, 0.02);
  Scene b = a;
  settle_object(&a, quick_cfg(Mode::Soft));
  settle_object(&b, quick_cfg(Mode::Soft));
  EXPECT_EQ(a.object.pose.p.x(), b.object.pose.p.x());
  EXPECT_EQ(a.object.pose.p.y(), b.object.pose.p.y());
}

TEST(Settle, NonConvergenceIsReportedNotSwallowed) {
  Scene scene = pinch_scene(0.006, 0.006, 0.06, Mode::Hard);
  scene.object.pose.p = Vec2(0.004, 0.0);
  SimConfig cfg = quick_cfg(Mode::Hard);
  cfg.max_relaxation_iters = 1;
  EXPECT_THROW(settle_object(&scene, cfg), NonConvergenceError);
}

GraspPolicyConfig test_policy() {
  GraspPolicyConfig policy;
  policy.pregrasp_q = {0.3, -0.7, -0.8};
  return policy;
}

TEST(RunGrasp, AbsentObjectTimesOutAtStageZero) {
  Scene scene = pinch_scene(0.004, 0.004, 0.06, Mode::Soft);
  scene.left.base_position = Vec2(-0.26, 0.0);
  scene.right.base_position = Vec2(0.26, 0.0);
  scene.left.base_orientation = M_PI / 2.0;
  scene.right.base_orientation = M_PI / 2.0;
  scene.object.pose.p = Vec2(0.0, 5.0);  // out of reach
  for (auto* arm : {&scene.left, &scene.right}) {
    arm->link_lengths = {0.3, 0.25, 0.15};
    arm->joint_limits = {std::pair{-1.2, 0.6}, std::pair{-1.5, 0.3},
                         std::pair{-1.6, 0.5}};
  }

  SimConfig cfg = quick_cfg(Mode::Soft);
  const GraspTrace trace = run_grasp(&scene, test_policy(), cfg);
  EXPECT_EQ(trace.status, RunStatus::Timeout);
  EXPECT_FALSE(trace.grasp_achieved);
  for (const auto& row : trace.rows) EXPECT_EQ(row.stage, 0);
  EXPECT_EQ(trace.invariant_violations, 0);
}

Scene grasp_scene(double object_x) {
  Scene scene;
  scene.mode = Mode::Soft;
  scene.left = bar_arm(Side::Left, Vec2(-0.26, 0.0), M_PI / 2.0, 0.07);
  scene.right = bar_arm(Side::Right, Vec2(0.26, 0.0), M_PI / 2.0, 0.07);
  for (auto* arm : {&scene.left, &scene.right}) {
    arm->link_lengths = {0.30, 0.24, 0.14};
    arm->link_radii = {0.075, 0.07, 0.065};
    arm->paw_radius = 0.06;
    arm->joint_limits = {std::pair{-1.2, 0.6}, std::pair{-1.6, 0.3},
                         std::pair{-1.8, 0.5}};
  }
  scene.object.id = "disc";
  scene.object.radius = 0.09;
  scene.object.pose.p = Vec2(object_x, 0.28);
  scene.object.mass = 0.8;
  scene.object.mu = 0.8;
  scene.object.taper = 0.5;
  fill_chambers(&scene);
  return scene;
}

TEST(RunGrasp, MirroredSceneGivesMirroredTraceAndSameOutcome) {
  Scene scene = grasp_scene(0.03);  // deliberately off axis
  Scene mirrored = mirror_scene(scene);

  SimConfig cfg = quick_cfg(Mode::Soft);
  cfg.timeout = 4.0;
  const GraspTrace a = run_grasp(&scene, test_policy(), cfg);
  const GraspTrace b = run_grasp(&mirrored, test_policy(), cfg);

  ASSERT_EQ(a.rows.size(), b.rows.size());
  EXPECT_EQ(a.grasp_achieved, b.grasp_achieved);
  EXPECT_EQ(a.steps_to_grasp, b.steps_to_grasp);
  for (size_t i = 0; i < a.rows.size(); ++i) {
    const TraceRow& ra = a.rows[i];
    const TraceRow& rb = b.rows[i];
    EXPECT_EQ(ra.stage, rb.stage);
    for (int j = 0; j < kNumJoints; ++j) {
      const auto js = static_cast<size_t>(j);
      EXPECT_NEAR(ra.q[js], rb.q[js + kNumJoints], 1e-9);
      EXPECT_NEAR(ra.q[js + kNumJoints], rb.q[js], 1e-9);
      EXPECT_NEAR(ra.qdot[js], rb.qdot[js + kNumJoints], 1e-9);
    }
    for (int s = 0; s < kSensorsPerArm; ++s) {
      const auto ss = static_cast<size_t>(s);
      EXPECT_NEAR(ra.dp[ss], rb.dp[ss + kSensorsPerArm], 1e-9);
    }
    EXPECT_NEAR(ra.capacity, rb.capacity, 1e-9);
  }
  // Mirrored object pose.
  EXPECT_NEAR(scene.object.pose.p.x(), -mirrored.object.pose.p.x(), 1e-9);
  EXPECT_NEAR(scene.object.pose.p.y(), mirrored.object.pose.p.y(), 1e-9);
}

TEST(RunGrasp, DeterministicTraces) {
  Scene a = grasp_scene(0.02);
  Scene b = grasp_scene(0.02);
  SimConfig cfg = quick_cfg(Mode::Soft);
  cfg.timeout = 3.0;
  const GraspTrace ta = run_grasp(&a, test_policy(), cfg);
  const GraspTrace tb = run_grasp(&b, test_policy(), cfg);
  ASSERT_EQ(ta.rows.size(), tb.rows.size());
  for (size_t i = 0; i < ta.rows.size(); ++i) {
    EXPECT_EQ(ta.rows[i].q, tb.rows[i].q);
    EXPECT_EQ(ta.rows[i].dp, tb.rows[i].dp);
    EXPECT_EQ(ta.rows[i].capacity, tb.rows[i].capacity);
  }
}

TEST(LoadTest, AmpleCapacityIsCleanSuccess) {
  Scene scene = pinch_scene(0.012, 0.012, 0.08, Mode::Soft);
  SimConfig cfg = quick_cfg(Mode::Soft);
  settle_object(&scene, cfg);
  GraspTrace trace;
  scene.object.mass = 0.2;
  const Outcome out = load_test(&scene, cfg, scene.object.mass, LoadProtocol{}, &trace);
  EXPECT_EQ(out.kind, OutcomeKind::Success);
  EXPECT_EQ(out.displacement_events, 0);
  EXPECT_NEAR(out.max_weight_held, 0.2 + 5.0 * kKgPerPound, 1e-12);
}

TEST(LoadTest, NoContactsFailAtSupportRemoval) {
  Scene scene = pinch_scene(0.004, 0.004, 0.06, Mode::Soft);
  scene.object.pose.p = Vec2(5.0, 5.0);
  SimConfig cfg = quick_cfg(Mode::Soft);
  GraspTrace trace;
  const Outcome out = load_test(&scene, cfg, 1.0, LoadProtocol{}, &trace);
  EXPECT_EQ(out.kind, OutcomeKind::Failure);
  EXPECT_DOUBLE_EQ(out.max_weight_held, 0.0);
  EXPECT_GE(out.slip_distance, LoadProtocol{}.max_slip - 1e-9);
}

TEST(LoadTest, TaperedObjectWedgesBackAsDisplacement) {
  // Marginal pinch: capacity below the weight at first, recovered by the
  // taper as the object slips.
  Scene scene = pinch_scene(0.0025, 0.0025, 0.08, Mode::Soft);
  scene.object.taper = 1.0;
  SimConfig cfg = quick_cfg(Mode::Soft);
  settle_object(&scene, cfg);

  GraspTrace trace;
  LoadProtocol proto;
  proto.max_added_kg = 0.0;  // single support-removal check
  const double chosen_mass = [&] {
    const auto ev = detect_contacts(scene.left, scene.right, scene.chest,
                                    scene.object, scene.mode, scene.slip);
    const double cap =
        vertical_load_capacity(contact_forces(ev, scene.contact).contacts, 0.8);
    return 1.15 * cap / kGravity;  // 15% over current capacity
  }();
  scene.object.mass = chosen_mass;

  const Outcome out = load_test(&scene, cfg, chosen_mass, proto, &trace);
  EXPECT_EQ(out.kind, OutcomeKind::Displacement);
  EXPECT_GE(out.displacement_events, 1);
  EXPECT_GT(out.slip_distance, 0.0);
  EXPECT_LT(out.slip_distance, proto.max_slip);
}

TEST(Classify, DeterministicMapping) {
  EXPECT_EQ(classify(0, 0.0, false, 1.0).kind, OutcomeKind::Success);
  EXPECT_EQ(classify(1, 0.01, false, 1.0).kind, OutcomeKind::Displacement);
  EXPECT_EQ(classify(2, 0.05, true, 1.0).kind, OutcomeKind::Failure);
}

TEST(SimConfig, ValidationRejectsBadValues) {
  SimConfig bad;
  bad.physics_substeps = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  SimConfig bad2;
  bad2.equilibrium_tol_force = 0.0;
  EXPECT_THROW(bad2.validate(), ConfigError);
  SimConfig ok;
  EXPECT_NO_THROW(ok.validate());
}

}  // namespace
}  // namespace softgrasp
