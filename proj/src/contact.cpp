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

#include <fmt/format.h>

#include <algorithm>

namespace softgrasp {

std::string ContactSource::label() const {
  if (kind == Kind::ChestColumn) return fmt::format("C{}", index);
  const char side_c = side == Side::Left ? 'L' : 'R';
  if (index == kPawSensor) return fmt::format("{}P", side_c);
  return fmt::format("{}{}", side_c, index);
}

namespace {

Overlap object_overlap(const Capsule& cap, const Manipuland& object, double slip) {
  if (object.shape == Manipuland::Shape::Circle) {
    return capsule_circle_overlap(cap, object.pose.p, object.effective_radius(slip));
  }
  return capsule_obb_overlap(cap, object.obb(slip));
}

void collect_arm_contacts(const PlanarArm& arm, const Manipuland& object,
                          double slip, ContactSet* out) {
  const auto caps = arm_capsules(arm);
  for (int s = 0; s < kSensorsPerArm; ++s) {
    const Overlap ov = object_overlap(caps[static_cast<size_t>(s)], object, slip);
    if (!ov.hit) continue;
    ContactPoint cp;
    cp.source = {ContactSource::Kind::ArmSensor, arm.side, s};
    cp.position = ov.point;
    cp.normal = ov.normal;
    cp.penetration = ov.penetration;
    cp.feature = ov.feature;
    cp.feature_radius = ov.feature_radius;
    out->points.push_back(cp);
  }
}

}  // namespace

ContactSet detect_contacts(const PlanarArm& left, const PlanarArm& right,
                           const ChestGeometry& chest, const Manipuland& object,
                           Mode mode, double slip) {
  ContactSet set;
  set.mode = mode;
  collect_arm_contacts(left, object, slip, &set);
  collect_arm_contacts(right, object, slip, &set);

  const auto cols = chest.column_capsules();
  for (int c = 0; c < chest.grid_cols; ++c) {
    const Overlap ov = object_overlap(cols[static_cast<size_t>(c)], object, slip);
    if (!ov.hit) continue;
    ContactPoint cp;
    cp.source = {ContactSource::Kind::ChestColumn, Side::Left, c};
    cp.position = ov.point;
    cp.normal = ov.normal;
    cp.penetration = ov.penetration;
    cp.feature = ov.feature;
    cp.feature_radius = ov.feature_radius;
    set.points.push_back(cp);
  }

  std::sort(set.points.begin(), set.points.end(),
            [](const ContactPoint& a, const ContactPoint& b) {
              return a.source.order_key() < b.source.order_key();
            });
  return set;
}

ForceResolution contact_forces(const ContactSet& contacts,
                               const ContactParams& params) {
  ForceResolution res;
  res.contacts = contacts;

  if (contacts.mode == Mode::Hard) {
    for (auto& cp : res.contacts.points) {
      cp.normal_force = params.k_hard * cp.penetration;
      cp.tangent_force = 0.0;
    }
    return res;
  }

  // Soft mode: chamber pressure from total displaced volume per sensor, then
  // force = deltaP * patch area per contact, plus a stiff core backstop for
  // penetration beyond the chamber travel.
  struct SensorAccum {
    double volume = 0.0;
    bool saturated = false;
  };
  std::array<std::array<SensorAccum, kSensorsPerArm>, 2> accum{};

  auto arm_idx = [](Side s) { return s == Side::Left ? 0u : 1u; };
  auto chord_and_arc = [&](const ContactPoint& cp, const ChamberModel& ch,
                           double* chord) {
    const double pen = std::min(cp.penetration, ch.thickness);
    *chord = lens_chord(ch.outer_radius, pen, cp.feature, cp.feature_radius);
    return 2.0 * M_PI * std::min(1.0, *chord / ch.patch_length);
  };

  for (const auto& cp : contacts.points) {
    if (cp.source.kind != ContactSource::Kind::ArmSensor) continue;
    const ChamberModel& ch = params.chambers[static_cast<size_t>(cp.source.index)];
    double chord = 0.0;
    const double arc = chord_and_arc(cp, ch, &chord);
    const DisplacedVolume dv =
        displaced_volume_from_penetration(ch, cp.penetration, arc);
    auto& acc = accum[arm_idx(cp.source.side)][static_cast<size_t>(cp.source.index)];
    acc.volume += dv.volume;
    acc.saturated = acc.saturated || dv.saturated;
  }

  std::array<TactileVector*, 2> tactile{&res.left_tactile, &res.right_tactile};
  for (size_t a = 0; a < 2; ++a) {
    for (int s = 0; s < kSensorsPerArm; ++s) {
      const auto& acc = accum[a][static_cast<size_t>(s)];
      tactile[a]->dp[static_cast<size_t>(s)] =
          chamber_pressure_hpa(params.chambers[static_cast<size_t>(s)], acc.volume);
      res.saturated = res.saturated || acc.saturated;
    }
  }

  for (auto& cp : res.contacts.points) {
    if (cp.source.kind == ContactSource::Kind::ChestColumn) {
      const double compression =
          std::min(cp.penetration, params.chest_foam_thickness);
      double f = params.chest_rows_engaged * params.k_foam * compression;
      if (cp.penetration > params.chest_foam_thickness) {
        f += params.k_hard * (cp.penetration - params.chest_foam_thickness);
      }
      cp.normal_force = f;
    } else {
      const ChamberModel& ch =
          params.chambers[static_cast<size_t>(cp.source.index)];
      const double dp_pa =
          100.0 *
          tactile[arm_idx(cp.source.side)]->dp[static_cast<size_t>(cp.source.index)];
      double chord = 0.0;
      chord_and_arc(cp, ch, &chord);
      double f = dp_pa * chord * ch.patch_length;
      if (cp.penetration > ch.thickness) {
        f += params.k_hard * (cp.penetration - ch.thickness);
      }
      cp.normal_force = f;
    }
    cp.tangent_force = 0.0;
  }
  return res;
}

double vertical_load_capacity(const ContactSet& contacts, double mu) {
  double cap = 0.0;
  for (const auto& cp : contacts.points) cap += mu * cp.normal_force;
  return cap;
}

std::array<double, kNumJoints> arm_joint_torques(const PlanarArm& arm,
                                                 const ContactSet& contacts) {
  std::array<double, kNumJoints> tau{};
  const LinkSegments segs = forward_kinematics(arm);
  const double s = arm.spin();
  for (const auto& cp : contacts.points) {
    if (cp.source.kind != ContactSource::Kind::ArmSensor ||
        cp.source.side != arm.side) {
      continue;
    }
    // Reaction on the arm is opposite the force applied to the object.
    const Vec2 f_on_arm = -cp.force();
    const int link = std::min(cp.source.index, kNumJoints - 1);
    for (int j = 0; j <= link; ++j) {
      tau[static_cast<size_t>(j)] +=
          s * cross2(cp.position - segs.start(j), f_on_arm);
    }
  }
  return tau;
}

Wrench net_object_wrench(const ContactSet& contacts, const Vec2& about) {
  Wrench w;
  for (const auto& cp : contacts.points) {
    const Vec2 f = cp.force();
    w.force += f;
    w.torque += cross2(cp.position - about, f);
  }
  return w;
}

}  // namespace softgrasp
