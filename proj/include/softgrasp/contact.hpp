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

#ifndef SOFTGRASP_CONTACT_HPP_
#define SOFTGRASP_CONTACT_HPP_

#include <string>
#include <vector>

#include "softgrasp/kinematics.hpp"
#include "softgrasp/manipuland.hpp"
#include "softgrasp/tactile.hpp"

namespace softgrasp {

enum class Mode { Soft, Hard };

struct ContactSource {
  enum class Kind { ArmSensor, ChestColumn };
  Kind kind{Kind::ArmSensor};
  Side side{Side::Left};  // ArmSensor only
  int index{0};           // sensor index 0..3 (3 = paw) or chest column

  std::string label() const;
  // Deterministic ordering: left sensors, right sensors, chest columns.
  int order_key() const {
    if (kind == Kind::ChestColumn) return 100 + index;
    return (side == Side::Left ? 0 : 10) + index;
  }
};

struct ContactPoint {
  ContactSource source;
  Vec2 position{0.0, 0.0};
  Vec2 normal{0.0, 0.0};  // unit, from robot surface into the object
  double penetration{0.0};
  double normal_force{0.0};
  double tangent_force{0.0};  // in-plane; the solver leaves contacts sticking
  SurfaceFeature feature{SurfaceFeature::Circle};
  double feature_radius{0.0};

  Vec2 force() const { return normal_force * normal; }
};

struct ContactSet {
  Mode mode{Mode::Soft};
  std::vector<ContactPoint> points;

  bool empty() const { return points.empty(); }
  size_t size() const { return points.size(); }
};

/// Material and stiffness knobs shared by force resolution.
struct ContactParams {
  double k_hard{1.0e5};        // N/m, rigid-mode penalty and soft core backstop
  double k_foam{8000.0};       // N/m per chest module
  int chest_rows_engaged{4};   // rows a desk-scale object spans
  double chest_foam_thickness{0.0127};  // m
  std::array<ChamberModel, kSensorsPerArm> chambers{};  // shared by both arms
};

/// Geometric overlaps between the body (arm capsules, paw disks, chest
/// columns) and the object; one contact per overlapping pair, ordered by
/// source. No forces yet.
ContactSet detect_contacts(const PlanarArm& left, const PlanarArm& right,
                           const ChestGeometry& chest, const Manipuland& object,
                           Mode mode, double slip = 0.0);

struct ForceResolution {
  ContactSet contacts;
  TactileVector left_tactile;
  TactileVector right_tactile;
  bool saturated{false};  // some chamber was compressed past its travel
};

/// Assign normal forces. Soft mode derives them from chamber pressure times
/// the contact patch area, so sensing and mechanics stay consistent by
/// construction; penetration beyond the chamber travel rides on a stiff core
/// backstop. Hard mode is a plain stiff penalty. Chest columns respond as
/// spring plates (all engaged rows of a column act together).
ForceResolution contact_forces(const ContactSet& contacts,
                               const ContactParams& params);

/// Out-of-plane friction budget available to carry weight: sum of mu * N.
double vertical_load_capacity(const ContactSet& contacts, double mu);

/// Joint torques induced on one arm by the contact forces acting on its
/// links (Jacobian-transpose), in the arm's own joint convention.
std::array<double, kNumJoints> arm_joint_torques(const PlanarArm& arm,
                                                 const ContactSet& contacts);

/// Net in-plane wrench on the object about its pose origin.
struct Wrench {
  Vec2 force{0.0, 0.0};
  double torque{0.0};
};

Wrench net_object_wrench(const ContactSet& contacts, const Vec2& about);

}  // namespace softgrasp

#endif  // SOFTGRASP_CONTACT_HPP_
