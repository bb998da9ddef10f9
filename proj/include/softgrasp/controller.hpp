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

#ifndef SOFTGRASP_CONTROLLER_HPP_
#define SOFTGRASP_CONTROLLER_HPP_

#include <array>
#include <optional>
#include <vector>

#include "softgrasp/kinematics.hpp"
#include "softgrasp/tactile.hpp"

namespace softgrasp {

inline constexpr int kNumStages = 3;
inline constexpr int kTerminalStage = 3;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// How a stage decides its threshold condition has fired.
///
/// Rearm (default): each stage compares pressure deviations against the
/// values captured when the stage began, so every stage requires a fresh
/// threshold crossing and the schedule closes one joint after another.
/// Level: the raw any(P > P_G) comparison; once contact pressure stays above
/// threshold the remaining stages fire on consecutive steps.
enum class StageTrigger { Rearm, Level };

struct GraspPolicyConfig {
  std::array<double, kSensorsPerArm> pressure_thresholds_hpa{20.0, 20.0, 20.0,
                                                             20.0};  // P_G
  std::array<int, kNumStages> joint_schedule{0, 1, 2};  // planar joints for 0,3,5
  std::array<double, kNumStages> stage_velocities{-0.5, -0.25, -0.25};  // rad/s
  std::array<double, kNumJoints> pregrasp_q{};  // poses arms before the loop
  double control_rate{100.0};                   // Hz

  double hard_torque_threshold{2.0};  // N*m, hard-mode stage trigger
  bool per_arm_stages{false};
  StageTrigger trigger{StageTrigger::Rearm};

  double dt() const { return 1.0 / control_rate; }
  /// Throws ConfigError on malformed schedules or thresholds.
  void validate() const;
};

struct HistorySample {
  double time{0.0};
  TactileVector left;
  TactileVector right;
  std::array<double, kNumJoints> qdot_left{};
  std::array<double, kNumJoints> qdot_right{};
  int stage{0};
};

struct GraspControllerState {
  int stage{0};
  std::array<int, 2> arm_stage{0, 0};  // used when per_arm_stages
  // Per-arm sensor values captured when the current stage began.
  std::array<TactileVector, 2> stage_baseline{};
  std::array<std::array<double, kNumJoints>, 2> torque_baseline{};

  std::vector<HistorySample> history;  // bounded ring
  size_t history_head{0};

  int stage_of(Side s) const;
  bool terminal(bool per_arm) const;
};

struct StepCommand {
  std::array<double, kNumJoints> qdot_left{};
  std::array<double, kNumJoints> qdot_right{};
  GraspControllerState state;
};

/// One 100 Hz tick of the whole-body grasping primitive: command the
/// scheduled joint velocity for the current stage on both arms, then advance
/// the stage when any sensor crosses its pressure threshold (strict
/// inequality). Stage 3 is terminal and commands zero.
StepCommand grasp_step(const GraspControllerState& state,
                       const TactileVector& p_left, const TactileVector& p_right,
                       const GraspPolicyConfig& cfg, double time = 0.0);

/// Hard-mode stage trigger: any joint torque magnitude at or above tau_G.
bool hard_mode_trigger(const std::array<double, kNumJoints>& joint_torques,
                       double tau_G);

/// Hard-mode variant of the step: transitions come from the torque trigger
/// (measured against the stage-start baseline under Rearm) instead of
/// pressure.
StepCommand grasp_step_hard(const GraspControllerState& state,
                            const std::array<double, kNumJoints>& tau_left,
                            const std::array<double, kNumJoints>& tau_right,
                            const GraspPolicyConfig& cfg, double time = 0.0);

/// Low-level guard: zero any component that would push a joint past its
/// limit within dt, and zero everything while a self-collision is flagged.
std::array<double, kNumJoints> clamp_command(
    const std::array<double, kNumJoints>& qdot, const PlanarArm& arm,
    bool collision, double dt);

}  // namespace softgrasp

#endif  // SOFTGRASP_CONTROLLER_HPP_
