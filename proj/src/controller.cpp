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

#include "softgrasp/controller.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace softgrasp {

namespace {
constexpr size_t kHistoryCapacity = 1024;

void push_history(GraspControllerState* st, const HistorySample& sample) {
  if (st->history.size() < kHistoryCapacity) {
    st->history.push_back(sample);
  } else {
    st->history[st->history_head] = sample;
    st->history_head = (st->history_head + 1) % kHistoryCapacity;
  }
}
}  // namespace

void GraspPolicyConfig::validate() const {
  for (double p : pressure_thresholds_hpa) {
    if (!(p > 0.0)) throw ConfigError("pressure thresholds must be positive");
  }
  for (int j : joint_schedule) {
    if (j < 0 || j >= kNumJoints)
      throw ConfigError(fmt::format("joint schedule entry {} out of range", j));
  }
  if (!(control_rate > 0.0)) throw ConfigError("control_rate must be positive");
  if (!(hard_torque_threshold > 0.0))
    throw ConfigError("hard torque threshold must be positive");
}

int GraspControllerState::stage_of(Side s) const {
  return arm_stage[s == Side::Left ? 0 : 1];
}

bool GraspControllerState::terminal(bool per_arm) const {
  if (per_arm)
    return arm_stage[0] >= kTerminalStage && arm_stage[1] >= kTerminalStage;
  return stage >= kTerminalStage;
}

namespace {

std::array<double, kNumJoints> stage_command(int stage,
                                             const GraspPolicyConfig& cfg) {
  std::array<double, kNumJoints> qdot{};
  if (stage >= 0 && stage < kNumStages) {
    const auto s = static_cast<size_t>(stage);
    qdot[static_cast<size_t>(cfg.joint_schedule[s])] = cfg.stage_velocities[s];
  }
  return qdot;
}

bool pressure_crossed(const TactileVector& p, const TactileVector& baseline,
                      const GraspPolicyConfig& cfg) {
  for (int s = 0; s < kSensorsPerArm; ++s) {
    const auto i = static_cast<size_t>(s);
    const double ref = cfg.trigger == StageTrigger::Rearm ? baseline.dp[i] : 0.0;
    if (p.dp[i] - ref > cfg.pressure_thresholds_hpa[i]) return true;
  }
  return false;
}

}  // namespace

StepCommand grasp_step(const GraspControllerState& state,
                       const TactileVector& p_left, const TactileVector& p_right,
                       const GraspPolicyConfig& cfg, double time) {
  StepCommand out;
  out.state = state;
  GraspControllerState& st = out.state;

  const std::array<const TactileVector*, 2> p{&p_left, &p_right};

  if (cfg.per_arm_stages) {
    for (size_t a = 0; a < 2; ++a) {
      const int stage = st.arm_stage[a];
      auto& qdot = a == 0 ? out.qdot_left : out.qdot_right;
      qdot = stage_command(stage, cfg);
      if (stage < kTerminalStage &&
          pressure_crossed(*p[a], st.stage_baseline[a], cfg)) {
        st.arm_stage[a] = stage + 1;
        st.stage_baseline[a] = *p[a];
      }
    }
    st.stage = std::min(st.arm_stage[0], st.arm_stage[1]);
  } else {
    out.qdot_left = stage_command(st.stage, cfg);
    out.qdot_right = out.qdot_left;
    if (st.stage < kTerminalStage &&
        (pressure_crossed(p_left, st.stage_baseline[0], cfg) ||
         pressure_crossed(p_right, st.stage_baseline[1], cfg))) {
      ++st.stage;
      st.stage_baseline[0] = p_left;
      st.stage_baseline[1] = p_right;
    }
    st.arm_stage = {st.stage, st.stage};
  }

  push_history(&st, HistorySample{time, p_left, p_right, out.qdot_left,
                                  out.qdot_right, state.stage});
  return out;
}

bool hard_mode_trigger(const std::array<double, kNumJoints>& joint_torques,
                       double tau_G) {
  for (double t : joint_torques) {
    if (std::abs(t) >= tau_G) return true;
  }
  return false;
}

StepCommand grasp_step_hard(const GraspControllerState& state,
                            const std::array<double, kNumJoints>& tau_left,
                            const std::array<double, kNumJoints>& tau_right,
                            const GraspPolicyConfig& cfg, double time) {
  StepCommand out;
  out.state = state;
  GraspControllerState& st = out.state;

  auto crossed = [&](const std::array<double, kNumJoints>& tau, size_t a) {
    std::array<double, kNumJoints> rel = tau;
    if (cfg.trigger == StageTrigger::Rearm) {
      for (int j = 0; j < kNumJoints; ++j) {
        const auto js = static_cast<size_t>(j);
        rel[js] -= st.torque_baseline[a][js];
      }
    }
    return hard_mode_trigger(rel, cfg.hard_torque_threshold);
  };

  if (cfg.per_arm_stages) {
    const std::array<const std::array<double, kNumJoints>*, 2> tau{&tau_left,
                                                                   &tau_right};
    for (size_t a = 0; a < 2; ++a) {
      const int stage = st.arm_stage[a];
      auto& qdot = a == 0 ? out.qdot_left : out.qdot_right;
      qdot = stage_command(stage, cfg);
      if (stage < kTerminalStage && crossed(*tau[a], a)) {
        st.arm_stage[a] = stage + 1;
        st.torque_baseline[a] = *tau[a];
      }
    }
    st.stage = std::min(st.arm_stage[0], st.arm_stage[1]);
  } else {
    out.qdot_left = stage_command(st.stage, cfg);
    out.qdot_right = out.qdot_left;
    if (st.stage < kTerminalStage &&
        (crossed(tau_left, 0) || crossed(tau_right, 1))) {
      ++st.stage;
      st.torque_baseline[0] = tau_left;
      st.torque_baseline[1] = tau_right;
    }
    st.arm_stage = {st.stage, st.stage};
  }

  push_history(&st, HistorySample{time, TactileVector{}, TactileVector{},
                                  out.qdot_left, out.qdot_right, state.stage});
  return out;
}

std::array<double, kNumJoints> clamp_command(
    const std::array<double, kNumJoints>& qdot, const PlanarArm& arm,
    bool collision, double dt) {
  std::array<double, kNumJoints> out{};
  if (collision) return out;
  for (int j = 0; j < kNumJoints; ++j) {
    const auto js = static_cast<size_t>(j);
    const double next = arm.q[js] + qdot[js] * dt;
    const auto& [lo, hi] = arm.joint_limits[js];
    if (next < lo || next > hi) continue;  // would breach; zero it
    out[js] = qdot[js];
  }
  return out;
}

}  // namespace softgrasp
