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

#ifndef SOFTGRASP_MANIPULAND_HPP_
#define SOFTGRASP_MANIPULAND_HPP_

#include <stdexcept>
#include <string>

#include "softgrasp/geometry.hpp"

namespace softgrasp {

/// Rigid planar object being grasped.
///
/// `taper` couples the out-of-plane slip coordinate back into the grasp
/// plane: real pots and hampers widen toward the rim, so a grasped object
/// that slips downward presents a larger cross-section and can wedge itself
/// back into the grasp. Effective in-plane size is scaled by
/// (1 + taper * slip).
struct Manipuland {
  enum class Shape { Circle, Rectangle };

  std::string id;
  Shape shape{Shape::Circle};
  double radius{0.05};          // Circle
  Vec2 half_extents{0.1, 0.1};  // Rectangle
  Pose2 pose;
  double mass{1.0};  // kg
  double mu{0.8};
  double taper{0.0};  // relative cross-section growth per meter of slip

  bool well_formed() const {
    if (!(mass > 0.0) || mu < 0.0) return false;
    if (shape == Shape::Circle) return radius > 0.0;
    return half_extents.x() > 0.0 && half_extents.y() > 0.0;
  }

  double size_scale(double slip) const { return 1.0 + taper * slip; }

  double effective_radius(double slip) const { return radius * size_scale(slip); }
  Vec2 effective_half_extents(double slip) const {
    return half_extents * size_scale(slip);
  }

  Obb obb(double slip = 0.0) const {
    return Obb{pose, effective_half_extents(slip)};
  }
};

}  // namespace softgrasp

#endif  // SOFTGRASP_MANIPULAND_HPP_
