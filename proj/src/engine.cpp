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

#include "softgrasp/engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace softgrasp {

void SimConfig::validate() const {
  if (!(dt_control > 0.0)) throw ConfigError("dt_control must be positive");
  if (physics_substeps < 1) throw ConfigError("physics_substeps must be >= 1");
  if (!(equilibrium_tol_force > 0.0) || !(equilibrium_tol_torque > 0.0))
    throw ConfigError("equilibrium tolerances must be positive");
  if (max_relaxation_iters < 1)
    throw ConfigError("max_relaxation_iters must be >= 1");
  if (!(timeout > 0.0)) throw ConfigError("timeout must be positive");
}

Scene mirror_scene(const Scene& scene) {
  auto reflect_arm = [](PlanarArm arm) {
    arm.side = arm.side == Side::Left ? Side::Right : Side::Left;
    arm.base_position.x() = -arm.base_position.x();
    arm.base_orientation = M_PI - arm.base_orientation;
    return arm;
  };
  Scene m = scene;
  m.left = reflect_arm(scene.right);
  m.right = reflect_arm(scene.left);
  m.object.pose.p.x() = -m.object.pose.p.x();
  m.object.pose.theta = M_PI - m.object.pose.theta;
  return m;
}

namespace {

struct SceneEval {
  ForceResolution forces;
  Wrench wrench;
};

SceneEval eval_scene(const Scene& scene, const Pose2& pose,
                     const ExternalForce& external) {
  Manipuland obj = scene.object;
  obj.pose = pose;
  SceneEval ev;
  const ContactSet cs = detect_contacts(scene.left, scene.right, scene.chest,
                                        obj, scene.mode, scene.slip);
  ev.forces = contact_forces(cs, scene.contact);
  ev.wrench = net_object_wrench(ev.forces.contacts, pose.p);
  if (external) ev.wrench.force += external(pose);
  return ev;
}

constexpr double kTorqueLengthScale = 0.1;  // m, balances N against N*m
constexpr double kMaxTranslationStep = 0.002;  // m per relaxation iteration
constexpr double kMaxRotationStep = 0.02;      // rad

double wrench_norm(const Wrench& w) {
  const double tq = w.torque / kTorqueLengthScale;
  return std::sqrt(w.force.squaredNorm() + tq * tq);
}

}  // namespace

SettleResult settle_object(Scene* scene, const SimConfig& cfg,
                           const ExternalForce& external,
                           std::vector<double>* norm_log) {
  const bool rotates = scene->object.shape == Manipuland::Shape::Rectangle;

  Pose2 pose = scene->object.pose;
  SceneEval ev = eval_scene(*scene, pose, external);
  double n = wrench_norm(ev.wrench);
  if (norm_log) norm_log->push_back(n);
  int iters = 0;

  auto gen_force = [&](const Wrench& w) {
    return Eigen::Vector3d(w.force.x(), w.force.y(),
                           w.torque / kTorqueLengthScale);
  };
  auto at = [&](const Eigen::Vector3d& z) {
    return Pose2{Vec2(z.x(), z.y()), z.z() / kTorqueLengthScale};
  };
  auto coords = [&](const Pose2& p) {
    return Eigen::Vector3d(p.p.x(), p.p.y(), kTorqueLengthScale * p.theta);
  };
  auto converged = [&](const Wrench& w) {
    return w.force.norm() < cfg.equilibrium_tol_force &&
           std::abs(w.torque) < cfg.equilibrium_tol_torque;
  };

  // Damped (Levenberg-Marquardt) relaxation on the residual wrench with a
  // finite-difference Jacobian; only norm-nonincreasing steps are accepted.
  double lambda_rel = 1e-3;
  const double fd_step = 1e-7;

  while (!converged(ev.wrench) && iters < cfg.max_relaxation_iters) {
    const Eigen::Vector3d z = coords(pose);
    const Eigen::Vector3d g = gen_force(ev.wrench);

    Eigen::Matrix3d jac = Eigen::Matrix3d::Zero();
    const int dims = rotates ? 3 : 2;
    for (int d = 0; d < dims; ++d) {
      Eigen::Vector3d zp = z;
      zp[d] += fd_step;
      const SceneEval pev = eval_scene(*scene, at(zp), external);
      jac.col(d) = (gen_force(pev.wrench) - g) / fd_step;
      ++iters;
    }
    if (!rotates) jac(2, 2) = -1.0;  // keep the unused axis well-conditioned

    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const double scale = std::max(jtj.trace() / 3.0, 1e-12);

    bool accepted = false;
    for (int attempt = 0; attempt < 40 && iters < cfg.max_relaxation_iters;
         ++attempt) {
      const Eigen::Matrix3d lhs =
          jtj + lambda_rel * scale * Eigen::Matrix3d::Identity();
      Eigen::Vector3d dz = lhs.ldlt().solve(-jac.transpose() * g);
      const double dpn = dz.head<2>().norm();
      if (dpn > kMaxTranslationStep) dz *= kMaxTranslationStep / dpn;
      const double max_dth = kMaxRotationStep * kTorqueLengthScale;
      if (std::abs(dz.z()) > max_dth) dz *= max_dth / std::abs(dz.z());

      const Pose2 cand = at(z + dz);
      const SceneEval cand_ev = eval_scene(*scene, cand, external);
      const double cand_n = wrench_norm(cand_ev.wrench);
      ++iters;
      if (cand_n <= n) {
        pose = cand;
        ev = cand_ev;
        n = cand_n;
        if (norm_log) norm_log->push_back(n);
        lambda_rel = std::max(lambda_rel / 3.0, 1e-10);
        accepted = true;
        break;
      }
      lambda_rel = std::min(lambda_rel * 10.0, 1e12);
    }
    if (!accepted) break;  // stalled: damping maxed without progress
  }

  if (!converged(ev.wrench)) {
    throw NonConvergenceError(fmt::format(
        "settle stalled after {} iterations, residual |F|={:.3e} N |tau|={:.3e} N*m",
        iters, ev.wrench.force.norm(), std::abs(ev.wrench.torque)));
  }
  scene->object.pose = pose;
  return SettleResult{ev.wrench, iters};
}

namespace {

int count_violations(const ContactSet& contacts, double mu) {
  int v = 0;
  for (const auto& cp : contacts.points) {
    if (cp.normal_force < -1e-12) ++v;
    if (std::abs(cp.tangent_force) > mu * cp.normal_force + 1e-12) ++v;
    if (cp.penetration < 0.0) ++v;
  }
  return v;
}

double total_normal(const ContactSet& contacts) {
  double f = 0.0;
  for (const auto& cp : contacts.points) f += cp.normal_force;
  return f;
}

TraceRow make_row(double t, int stage, const Scene& scene,
                  const std::array<double, kNumJoints>& qdl,
                  const std::array<double, kNumJoints>& qdr,
                  const TactileVector& pl, const TactileVector& pr,
                  const ContactSet& contacts, double weight_n) {
  TraceRow row;
  row.t = t;
  row.stage = stage;
  for (int j = 0; j < kNumJoints; ++j) {
    const auto js = static_cast<size_t>(j);
    row.q[js] = scene.left.q[js];
    row.q[js + kNumJoints] = scene.right.q[js];
    row.qdot[js] = qdl[js];
    row.qdot[js + kNumJoints] = qdr[js];
  }
  for (int s = 0; s < kSensorsPerArm; ++s) {
    const auto ss = static_cast<size_t>(s);
    row.dp[ss] = pl.dp[ss];
    row.dp[ss + kSensorsPerArm] = pr.dp[ss];
  }
  row.contact_count = static_cast<int>(contacts.size());
  row.total_normal = total_normal(contacts);
  row.capacity = vertical_load_capacity(contacts, scene.object.mu);
  row.weight = weight_n;
  row.slip = scene.slip;
  return row;
}

TactileVector subtract_baseline(const TactileVector& p, const TactileVector& base) {
  TactileVector out;
  for (int s = 0; s < kSensorsPerArm; ++s) {
    const auto ss = static_cast<size_t>(s);
    out.dp[ss] = p.dp[ss] - base.dp[ss];
  }
  return out;
}

}  // namespace

GraspTrace run_grasp(Scene* scene, const GraspPolicyConfig& policy,
                     const SimConfig& cfg) {
  policy.validate();
  cfg.validate();

  GraspTrace trace;
  const double dt = cfg.dt_control;

  scene->left.q = policy.pregrasp_q;
  scene->right.q = policy.pregrasp_q;
  scene->left.clamp_to_limits();
  scene->right.clamp_to_limits();

  const auto initial = self_collision_check(scene->left, scene->right,
                                            scene->chest, cfg.collision_clearance);
  if (initial.collision) {
    trace.status = RunStatus::Invalid;
    trace.error = fmt::format("initial self-collision, clearance {:.4f} m",
                              initial.min_clearance);
    return trace;
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> noise(-cfg.sensor_noise_hpa,
                                               cfg.sensor_noise_hpa);
  auto maybe_noise = [&](TactileVector p) {
    if (cfg.sensor_noise_hpa > 0.0) {
      for (auto& v : p.dp) v = std::max(0.0, v + noise(rng));
    }
    return p;
  };

  try {
    settle_object(scene, cfg);

    // Pressure reference: deviations are measured against the reading at
    // controller start, so a pre-grasp resting contact reads zero.
    const SceneEval start = eval_scene(*scene, scene->object.pose, nullptr);
    const TactileVector base_l = start.forces.left_tactile;
    const TactileVector base_r = start.forces.right_tactile;

    GraspControllerState st;
    const int max_steps = static_cast<int>(std::ceil(cfg.timeout / dt));
    const double weight_n =
        scene->table_support ? 0.0 : scene->object.mass * kGravity;

    for (int k = 0; k < max_steps; ++k) {
      const double t = k * dt;
      const SceneEval ev = eval_scene(*scene, scene->object.pose, nullptr);
      trace.invariant_violations +=
          count_violations(ev.forces.contacts, scene->object.mu);

      const TactileVector pl =
          maybe_noise(subtract_baseline(ev.forces.left_tactile, base_l));
      const TactileVector pr =
          maybe_noise(subtract_baseline(ev.forces.right_tactile, base_r));

      StepCommand cmd;
      if (scene->mode == Mode::Soft) {
        cmd = grasp_step(st, pl, pr, policy, t);
      } else {
        const auto tau_l = arm_joint_torques(scene->left, ev.forces.contacts);
        const auto tau_r = arm_joint_torques(scene->right, ev.forces.contacts);
        cmd = grasp_step_hard(st, tau_l, tau_r, policy, t);
      }

      auto qdot_l = clamp_command(cmd.qdot_left, scene->left, false, dt);
      auto qdot_r = clamp_command(cmd.qdot_right, scene->right, false, dt);

      // Predictive self-collision guard at the pose this command would reach.
      PlanarArm tent_l = scene->left;
      PlanarArm tent_r = scene->right;
      for (int j = 0; j < kNumJoints; ++j) {
        const auto js = static_cast<size_t>(j);
        tent_l.q[js] += qdot_l[js] * dt;
        tent_r.q[js] += qdot_r[js] * dt;
      }
      tent_l.clamp_to_limits();
      tent_r.clamp_to_limits();
      const auto predicted = self_collision_check(tent_l, tent_r, scene->chest,
                                                  cfg.collision_clearance);
      if (predicted.collision) {
        qdot_l = clamp_command(qdot_l, scene->left, true, dt);
        qdot_r = clamp_command(qdot_r, scene->right, true, dt);
      }

      trace.rows.push_back(make_row(t, st.stage, *scene, qdot_l, qdot_r, pl, pr,
                                    ev.forces.contacts, weight_n));
      st = cmd.state;

      const bool moving =
          std::any_of(qdot_l.begin(), qdot_l.end(), [](double v) { return v != 0.0; }) ||
          std::any_of(qdot_r.begin(), qdot_r.end(), [](double v) { return v != 0.0; });
      if (moving) {
        const double h = dt / cfg.physics_substeps;
        for (int sub = 0; sub < cfg.physics_substeps; ++sub) {
          for (int j = 0; j < kNumJoints; ++j) {
            const auto js = static_cast<size_t>(j);
            scene->left.q[js] += qdot_l[js] * h;
            scene->right.q[js] += qdot_r[js] * h;
          }
          scene->left.clamp_to_limits();
          scene->right.clamp_to_limits();
          settle_object(scene, cfg);
        }
      }

      if (st.terminal(policy.per_arm_stages)) {
        trace.grasp_achieved = true;
        trace.steps_to_grasp = k + 1;
        break;
      }
    }

    // Terminal snapshot.
    const SceneEval end = eval_scene(*scene, scene->object.pose, nullptr);
    trace.invariant_violations +=
        count_violations(end.forces.contacts, scene->object.mu);
    const double t_end =
        trace.grasp_achieved ? trace.steps_to_grasp * dt : cfg.timeout;
    trace.rows.push_back(make_row(
        t_end, st.stage, *scene, {}, {},
        maybe_noise(subtract_baseline(end.forces.left_tactile, base_l)),
        maybe_noise(subtract_baseline(end.forces.right_tactile, base_r)),
        end.forces.contacts, weight_n));

    if (!trace.grasp_achieved) trace.status = RunStatus::Timeout;
  } catch (const NonConvergenceError& e) {
    trace.status = RunStatus::Invalid;
    trace.error = e.what();
  }
  return trace;
}

std::string to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Success: return "success";
    case OutcomeKind::Displacement: return "displacement";
    case OutcomeKind::Failure: return "failure";
  }
  return "unknown";
}

Outcome classify(int displacement_events, double slip_distance, bool exhausted,
                 double max_weight_held_kg) {
  Outcome out;
  out.displacement_events = displacement_events;
  out.slip_distance = slip_distance;
  out.max_weight_held = max_weight_held_kg;
  if (exhausted) {
    out.kind = OutcomeKind::Failure;
  } else if (displacement_events > 0) {
    out.kind = OutcomeKind::Displacement;
  } else {
    out.kind = OutcomeKind::Success;
  }
  return out;
}

Outcome load_test(Scene* scene, const SimConfig& cfg, double empty_kg,
                  const LoadProtocol& protocol, GraspTrace* trace) {
  scene->table_support = false;
  double t = trace->rows.empty() ? 0.0 : trace->rows.back().t;
  const double dt = cfg.dt_control;

  int events = 0;
  double held_kg = 0.0;
  bool exhausted = false;
  double added = 0.0;

  auto capacity_now = [&](double weight_n) {
    settle_object(scene, cfg);
    const SceneEval ev = eval_scene(*scene, scene->object.pose, nullptr);
    trace->invariant_violations +=
        count_violations(ev.forces.contacts, scene->object.mu);
    t += dt;
    trace->rows.push_back(make_row(t, kTerminalStage, *scene, {}, {},
                                   ev.forces.left_tactile, ev.forces.right_tactile,
                                   ev.forces.contacts, weight_n));
    return trace->rows.back().capacity;
  };

  for (;;) {
    const double weight_kg = empty_kg + added;
    const double weight_n = weight_kg * kGravity;
    double capacity = capacity_now(weight_n);

    bool slipped = false;
    while (capacity < weight_n) {
      if (scene->slip + 1e-12 >= protocol.max_slip) {
        exhausted = true;
        break;
      }
      scene->slip += protocol.slip_step;
      slipped = true;
      capacity = capacity_now(weight_n);
    }
    if (exhausted) break;
    if (slipped) ++events;
    held_kg = weight_kg;

    if (added + 1e-12 >= protocol.max_added_kg) break;
    added = std::min(added + protocol.increment_kg, protocol.max_added_kg);
  }

  return classify(events, scene->slip, exhausted, held_kg);
}

}  // namespace softgrasp
