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

#include "softgrasp/tactile.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace softgrasp {

double chamber_pressure_hpa(const ChamberModel& model, double displaced_volume) {
  if (displaced_volume < 0.0) displaced_volume = 0.0;
  const double limit = model.max_relative_compression * model.rest_volume;
  if (displaced_volume >= limit) {
    throw OverCompressionError(
        fmt::format("chamber displaced volume {:.3e} m^3 exceeds limit {:.3e} m^3",
                    displaced_volume, limit));
  }
  const double v = model.rest_volume;
  const double dp_pa = model.rest_pressure * (v / (v - displaced_volume) - 1.0);
  return dp_pa / 100.0;  // Pa -> hPa
}

double chamber_pressure_slope(const ChamberModel& model, double displaced_volume) {
  const double v = model.rest_volume;
  const double rem = v - displaced_volume;
  return model.rest_pressure * v / (rem * rem);
}

DisplacedVolume displaced_volume_from_penetration(const ChamberModel& model,
                                                  double penetration,
                                                  double contact_arc) {
  DisplacedVolume out;
  if (penetration < 0.0) penetration = 0.0;
  if (penetration > model.thickness) {
    penetration = model.thickness;
    out.saturated = true;
  }
  contact_arc = std::clamp(contact_arc, 0.0, 2.0 * M_PI);
  const double seg = circular_segment_area(model.outer_radius, penetration);
  out.volume = seg * model.patch_length * (contact_arc / (2.0 * M_PI));
  return out;
}

std::vector<ChestModuleState> chest_forces(const ChestGeometry& chest,
                                           const Manipuland& object,
                                           double k_foam, double slip) {
  const auto cols = chest.column_capsules();
  std::vector<ChestModuleState> states;
  states.reserve(static_cast<size_t>(chest.grid_rows * chest.grid_cols));

  for (int c = 0; c < chest.grid_cols; ++c) {
    const Capsule& cap = cols[static_cast<size_t>(c)];
    Overlap ov;
    if (object.shape == Manipuland::Shape::Circle) {
      ov = capsule_circle_overlap(cap, object.pose.p, object.effective_radius(slip));
    } else {
      ov = capsule_obb_overlap(cap, object.obb(slip));
    }
    const double compression =
        ov.hit ? std::min(ov.penetration, chest.foam_thickness) : 0.0;
    const Vec2 inward = chest.column_inward_normal(c);
    for (int r = 0; r < chest.grid_rows; ++r) {
      ChestModuleState s;
      s.row = r;
      s.col = c;
      s.compression = compression;
      s.force = k_foam * compression * inward;
      states.push_back(s);
    }
  }
  return states;
}

}  // namespace softgrasp
