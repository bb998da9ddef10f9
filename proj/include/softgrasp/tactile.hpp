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

#ifndef SOFTGRASP_TACTILE_HPP_
#define SOFTGRASP_TACTILE_HPP_

#include <array>
#include <stdexcept>
#include <vector>

#include "softgrasp/kinematics.hpp"
#include "softgrasp/manipuland.hpp"

namespace softgrasp {

/// Thrown when a chamber is asked for a physically implausible crush; the
/// engine caps penetrations before this can happen in a simulation step.
class OverCompressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Air-chamber compliance parameters for one sensorized surface.
struct ChamberModel {
  double rest_pressure{101325.0};      // Pa, absolute
  double rest_volume{1.0e-3};          // m^3
  double thickness{0.035};             // m, radial (capsule radius increment)
  double outer_radius{0.080};          // m, chamber outer circle
  double patch_length{0.30};           // m, axial extent on the link
  double max_relative_compression{0.6};

  bool well_formed() const {
    return rest_pressure > 0.0 && rest_volume > 0.0 && thickness > 0.0 &&
           outer_radius > thickness && patch_length > 0.0 &&
           max_relative_compression > 0.0 && max_relative_compression < 1.0;
  }
};

/// Pressure deviation from rest for an isothermal ideal-gas chamber.
/// Strictly increasing and convex in displaced volume; 0 at 0.
/// Throws OverCompressionError at or beyond the compression limit.
double chamber_pressure_hpa(const ChamberModel& model, double displaced_volume);

/// d(deltaP)/d(displaced_volume) in Pa per m^3.
double chamber_pressure_slope(const ChamberModel& model, double displaced_volume);

struct DisplacedVolume {
  double volume{0.0};  // m^3
  bool saturated{false};
};

/// Chamber volume lost to a contact of depth `penetration`: the circular
/// segment of that depth on the chamber's outer circle, times patch length,
/// scaled by the circumferential coverage `contact_arc` (2*pi = full
/// coverage). Penetrations past the chamber thickness clamp and flag
/// saturation.
DisplacedVolume displaced_volume_from_penetration(const ChamberModel& model,
                                                  double penetration,
                                                  double contact_arc);

/// Per-sensor relative pressure deviations for one arm, hPa.
/// Order: upper-arm chamber, forearm chamber, wrist chamber, paw.
inline constexpr int kSensorsPerArm = 4;
inline constexpr int kPawSensor = 3;

struct TactileVector {
  std::array<double, kSensorsPerArm> dp{};  // hPa

  double max() const {
    double m = dp[0];
    for (double v : dp) m = std::max(m, v);
    return m;
  }
};

/// One chest force/geometry module under load.
struct ChestModuleState {
  int row{0};
  int col{0};
  double compression{0.0};  // m
  double plate_tilt{0.0};   // rad
  Vec2 force{0.0, 0.0};     // N, along the plate inward normal
};

/// Spring-plate response of the 4x5 chest array to the object. Each column
/// of the planar model compresses uniformly, so the modules of a contacted
/// column report identical states; non-contacting modules report zero.
std::vector<ChestModuleState> chest_forces(const ChestGeometry& chest,
                                           const Manipuland& object,
                                           double k_foam = 8000.0,
                                           double slip = 0.0);

}  // namespace softgrasp

#endif  // SOFTGRASP_TACTILE_HPP_
