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

#include "softgrasp/kinematics.hpp"

#include <algorithm>

namespace softgrasp {

bool PlanarArm::well_formed() const {
  for (int k = 0; k < kNumJoints; ++k) {
    const auto ks = static_cast<size_t>(k);
    if (!(link_lengths[ks] > 0.0) || !(link_radii[ks] > 0.0)) return false;
    if (joint_limits[ks].first > joint_limits[ks].second) return false;
  }
  return paw_radius >= 0.0;
}

void PlanarArm::clamp_to_limits() {
  for (int k = 0; k < kNumJoints; ++k) {
    const auto ks = static_cast<size_t>(k);
    q[ks] = std::clamp(q[ks], joint_limits[ks].first, joint_limits[ks].second);
  }
}

LinkSegments forward_kinematics(const PlanarArm& arm) {
  LinkSegments out;
  out.points[0] = arm.base_position;
  const double s = arm.spin();
  double angle = arm.base_orientation;
  for (int k = 0; k < kNumJoints; ++k) {
    const auto ks = static_cast<size_t>(k);
    angle += s * arm.q[ks];
    out.points[ks + 1] =
        out.points[ks] + arm.link_lengths[ks] * Vec2(std::cos(angle), std::sin(angle));
  }
  return out;
}

std::vector<Capsule> arm_capsules(const PlanarArm& arm) {
  const LinkSegments segs = forward_kinematics(arm);
  std::vector<Capsule> caps;
  caps.reserve(kNumJoints + 1);
  for (int k = 0; k < kNumJoints; ++k) {
    caps.push_back({segs.start(k), segs.end(k), arm.link_radii[static_cast<size_t>(k)]});
  }
  caps.push_back({segs.tip(), segs.tip(), arm.paw_radius});
  return caps;
}

std::vector<Capsule> arm_core_capsules(const PlanarArm& arm) {
  const LinkSegments segs = forward_kinematics(arm);
  std::vector<Capsule> caps;
  caps.reserve(kNumJoints + 1);
  for (int k = 0; k < kNumJoints; ++k) {
    const auto ks = static_cast<size_t>(k);
    const double r = arm.core_radii[ks] > 0.0 ? arm.core_radii[ks] : arm.link_radii[ks];
    caps.push_back({segs.start(k), segs.end(k), r});
  }
  const double pr = arm.paw_core_radius > 0.0 ? arm.paw_core_radius : arm.paw_radius;
  caps.push_back({segs.tip(), segs.tip(), pr});
  return caps;
}

std::vector<Capsule> ChestGeometry::column_capsules() const {
  const double w = width / grid_cols;
  const double step = M_PI - slat_angle;  // turn between adjacent plates
  const double y0 = forward_offset - foam_thickness;
  const int half_cols = grid_cols / 2;

  // Vertex chain from the middle plate outward, right side then mirrored.
  std::vector<Vec2> right_chain{Vec2(w / 2.0, y0)};
  double angle = 0.0;
  for (int i = 0; i < half_cols; ++i) {
    angle -= step;
    right_chain.push_back(right_chain.back() +
                          w * Vec2(std::cos(angle), std::sin(angle)));
  }

  std::vector<Capsule> cols(static_cast<size_t>(grid_cols));
  const int mid = half_cols;
  cols[static_cast<size_t>(mid)] = {Vec2(-w / 2.0, y0), Vec2(w / 2.0, y0),
                                    foam_thickness};
  for (int i = 0; i < half_cols; ++i) {
    const Vec2 a = right_chain[static_cast<size_t>(i)];
    const Vec2 b = right_chain[static_cast<size_t>(i) + 1];
    cols[static_cast<size_t>(mid + 1 + i)] = {a, b, foam_thickness};
    cols[static_cast<size_t>(mid - 1 - i)] = {Vec2(-a.x(), a.y()),
                                              Vec2(-b.x(), b.y()), foam_thickness};
  }
  return cols;
}

Vec2 ChestGeometry::column_inward_normal(int k) const {
  const auto cols = column_capsules();
  const Capsule& c = cols[static_cast<size_t>(k)];
  Vec2 t = c.b - c.a;
  if (t.norm() == 0.0) return Vec2(0.0, -1.0);
  t.normalize();
  Vec2 n(-t.y(), t.x());
  if (n.y() > 0.0) n = -n;  // chest faces +y; inward is -y-ish
  return n;
}

SelfCollisionResult self_collision_check(const PlanarArm& left,
                                         const PlanarArm& right,
                                         const ChestGeometry& chest,
                                         double clearance_threshold) {
  const auto lcaps = arm_core_capsules(left);
  const auto rcaps = arm_core_capsules(right);
  const auto chest_cols = chest.column_capsules();

  SelfCollisionResult res;
  auto track = [&res](double d) { res.min_clearance = std::min(res.min_clearance, d); };

  for (const auto& lc : lcaps)
    for (const auto& rc : rcaps) track(capsule_capsule_distance(lc, rc));

  // Within-arm interference is left to the joint limits; this check guards
  // the arm-arm and arm-chest pairs the low-level loop can actually prevent.
  for (const auto& caps : {lcaps, rcaps}) {
    // The first link is mounted flush with the chest frame; only the distal
    // links can meaningfully collide with the chest surface.
    for (size_t k = 1; k < caps.size(); ++k) {
      for (const auto& cc : chest_cols) track(capsule_capsule_distance(caps[k], cc));
    }
  }

  res.collision = res.min_clearance < clearance_threshold;
  return res;
}

}  // namespace softgrasp
