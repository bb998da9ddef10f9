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

#ifndef SOFTGRASP_ENGINE_HPP_
#define SOFTGRASP_ENGINE_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "softgrasp/contact.hpp"
#include "softgrasp/controller.hpp"

namespace softgrasp {

inline constexpr double kGravity = 9.80665;       // m/s^2
inline constexpr double kKgPerPound = 0.45359237; // exact

class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimConfig {
  double dt_control{0.01};        // s, 100 Hz loop
  int physics_substeps{10};
  double equilibrium_tol_force{1e-4};   // N
  double equilibrium_tol_torque{1e-5};  // N*m
  int max_relaxation_iters{10000};
  double timeout{30.0};  // s
  Mode mode{Mode::Soft};
  uint64_t seed{0};
  double sensor_noise_hpa{0.0};  // optional uniform noise amplitude
  double collision_clearance{0.005};  // m

  void validate() const;
};

/// Everything a run owns: the body, the object, and material knobs.
struct Scene {
  BodyFrame body;
  ChestGeometry chest;
  PlanarArm left;
  PlanarArm right;
  Manipuland object;
  ContactParams contact;
  Mode mode{Mode::Soft};
  double slip{0.0};          // out-of-plane slip coordinate, m
  bool table_support{true};  // vertical support before the load test
};

/// x -> -x reflection of the whole scene (arms swap sides).
Scene mirror_scene(const Scene& scene);

struct TraceRow {
  double t{0.0};
  int stage{0};
  std::array<double, 2 * kNumJoints> q{};
  std::array<double, 2 * kNumJoints> qdot{};
  std::array<double, 2 * kSensorsPerArm> dp{};  // hPa, left sensors then right
  int contact_count{0};
  double total_normal{0.0};  // N
  double capacity{0.0};      // N
  double weight{0.0};        // N currently resting on the grasp
  double slip{0.0};          // m
};

struct SettleResult {
  Wrench residual;
  int iterations{0};
};

/// External in-plane load on the object (testing hook; gravity acts out of
/// plane in this model). Evaluated at the object pose.
using ExternalForce = std::function<Vec2(const Pose2&)>;

/// Damped relaxation of the object's in-plane pose until the net contact
/// wrench is below tolerance. The wrench norm is nonincreasing across
/// iterations (backtracking step size). Throws NonConvergenceError at the
/// iteration cap. `norm_log`, when given, receives the accepted wrench norms.
SettleResult settle_object(Scene* scene, const SimConfig& cfg,
                           const ExternalForce& external = nullptr,
                           std::vector<double>* norm_log = nullptr);

enum class RunStatus { Ok, Timeout, Invalid };

struct GraspTrace {
  std::vector<TraceRow> rows;
  RunStatus status{RunStatus::Ok};
  bool grasp_achieved{false};
  int steps_to_grasp{-1};  // control steps until the terminal stage
  int invariant_violations{0};
  std::string error;
};

/// Closed-loop execution of the grasping primitive at 100 Hz with physics
/// substeps. Terminates at the terminal stage or at the timeout.
GraspTrace run_grasp(Scene* scene, const GraspPolicyConfig& policy,
                     const SimConfig& cfg);

enum class OutcomeKind { Success, Displacement, Failure };

struct Outcome {
  OutcomeKind kind{OutcomeKind::Failure};
  double max_weight_held{0.0};  // kg, object plus added load
  double slip_distance{0.0};    // m
  int displacement_events{0};
};

std::string to_string(OutcomeKind k);

struct LoadProtocol {
  double increment_kg{kKgPerPound};        // 1 lb steps
  double max_added_kg{5.0 * kKgPerPound};  // up to 5 lb
  double slip_step{0.001};                 // m of bookkeeping slip
  double max_slip{0.05};                   // m before the grasp has failed
};

/// Weight-load protocol on a completed grasp: remove the table support, then
/// add load in increments. Whenever capacity drops below weight the object
/// slips in small vertical steps, re-settling in plane (a tapered object
/// wedges itself deeper); a recovery is a Displacement event, running out of
/// slip budget is a Failure.
Outcome load_test(Scene* scene, const SimConfig& cfg, double empty_kg,
                  const LoadProtocol& protocol, GraspTrace* trace);

/// Deterministic outcome from the event counts and final slip state.
Outcome classify(int displacement_events, double slip_distance, bool exhausted,
                 double max_weight_held_kg);

}  // namespace softgrasp

#endif  // SOFTGRASP_ENGINE_HPP_
