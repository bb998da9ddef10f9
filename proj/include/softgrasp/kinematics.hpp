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

#ifndef SOFTGRASP_KINEMATICS_HPP_
#define SOFTGRASP_KINEMATICS_HPP_

#include <array>
#include <vector>

#include "softgrasp/geometry.hpp"

namespace softgrasp {

inline constexpr int kNumJoints = 3;

enum class Side { Left, Right };

/// 3-joint planar chain with capsule links.
///
/// Joint angles q are stored in the arm's own convention: a Right arm
/// composes world link angles with negated q so that identical q vectors on
/// a mirrored base pose produce mirror-image geometry, and one commanded
/// joint velocity closes both arms of a symmetric pair inward.
struct PlanarArm {
  Side side{Side::Left};
  Vec2 base_position{0.0, 0.0};
  double base_orientation{0.0};                       // rad
  std::array<double, kNumJoints> link_lengths{};      // m
  std::array<double, kNumJoints> link_radii{};        // m, capsule half-width
  // Hard-structure radii used for self-collision monitoring; the compliant
  // sleeves above them are allowed to touch. Zero entries fall back to
  // link_radii (an uncovered arm).
  std::array<double, kNumJoints> core_radii{};
  std::array<std::pair<double, double>, kNumJoints> joint_limits{};  // rad
  std::array<double, kNumJoints> q{};                 // rad

  double paw_radius{0.0};       // end-effector disk at the chain tip, m
  double paw_core_radius{0.0};  // rigid paw mount; 0 falls back to paw_radius

  /// +1 for Left, -1 for Right (mirror convention).
  double spin() const { return side == Side::Left ? 1.0 : -1.0; }

  bool well_formed() const;
  void clamp_to_limits();
};

/// Link segments in world coordinates; segment k starts where k-1 ends.
struct LinkSegments {
  std::array<Vec2, kNumJoints + 1> points;  // joints[0..2] then tip
  Vec2 start(int k) const { return points[static_cast<size_t>(k)]; }
  Vec2 end(int k) const { return points[static_cast<size_t>(k) + 1]; }
  Vec2 tip() const { return points[kNumJoints]; }
};

LinkSegments forward_kinematics(const PlanarArm& arm);

/// Capsules for the three links plus the paw disk at the tip.
std::vector<Capsule> arm_capsules(const PlanarArm& arm);

/// Same chain with the hard-structure radii (self-collision geometry).
std::vector<Capsule> arm_core_capsules(const PlanarArm& arm);

/// Convex chest approximated by an in-plane polyline of sensor columns.
/// Adjacent plates meet at `slat_angle` (reflex, 170 deg default), and the
/// apex of the middle plate sits `forward_offset` ahead of the shoulder line.
struct ChestGeometry {
  double width{0.285};
  double forward_offset{0.08};
  int grid_rows{4};
  int grid_cols{5};
  double slat_angle{170.0 * M_PI / 180.0};
  double foam_thickness{0.0127};

  /// One capsule per column; radius is the foam thickness, so penetration
  /// into the capsule equals foam compression.
  std::vector<Capsule> column_capsules() const;
  /// Inward unit normal of column k (toward the body).
  Vec2 column_inward_normal(int k) const;
};

struct BodyFrame {
  double shoulder_width{0.52};
  double shoulder_angle{M_PI / 2.0};
  double base_height{0.90};  // lift setting; bookkeeping only
};

struct SelfCollisionResult {
  bool collision{false};
  double min_clearance{std::numeric_limits<double>::infinity()};
};

/// Capsule-capsule and capsule-chest clearance check between the two arms.
/// Adjacent links of the same arm are excluded (they share a joint).
SelfCollisionResult self_collision_check(const PlanarArm& left,
                                         const PlanarArm& right,
                                         const ChestGeometry& chest,
                                         double clearance_threshold = 0.005);

}  // namespace softgrasp

#endif  // SOFTGRASP_KINEMATICS_HPP_
