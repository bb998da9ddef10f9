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

#include "softgrasp/experiment.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace softgrasp {

namespace {

constexpr double kDeg = M_PI / 180.0;

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

const char* to_string(Mode m) { return m == Mode::Soft ? "soft" : "hard"; }

Mode mode_from_string(const std::string& s) {
  if (s == "soft") return Mode::Soft;
  if (s == "hard") return Mode::Hard;
  throw ConfigError(fmt::format("unknown mode '{}'", s));
}

std::vector<std::string> ExperimentSpec::validate() const {
  std::vector<std::string> errors;
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };

  require(!name.empty(), "name: must not be empty");
  require(trials >= 1, "trials: must be >= 1");
  require(!modes.empty(), "modes: must not be empty");
  require(!objects.empty(), "objects: must not be empty");
  require(!poses.empty(), "poses: must not be empty");
  require(placement_jitter >= 0.0, "placement_jitter: must be >= 0");
  require(k_hard > 0.0, "k_hard: must be > 0");
  require(k_foam > 0.0, "k_foam: must be > 0");
  require(chest_rows_engaged >= 1 && chest_rows_engaged <= chest.grid_rows,
          "chest_rows_engaged: must be in [1, chest rows]");

  for (size_t i = 0; i < objects.size(); ++i) {
    const auto& obj = objects[i];
    const std::string at = fmt::format("objects[{}]", i);
    require(!obj.id.empty(), at + ".id: must not be empty");
    require(obj.mass > 0.0, at + ".mass_kg: must be > 0");
    require(obj.mu >= 0.0, at + ".mu: must be >= 0");
    if (obj.shape == Manipuland::Shape::Circle) {
      require(obj.radius > 0.0, at + ".diameter: must be > 0");
    } else {
      require(obj.half_extents.x() > 0.0 && obj.half_extents.y() > 0.0,
              at + ".extents: must be > 0");
    }
    for (size_t j = i + 1; j < objects.size(); ++j) {
      require(objects[j].id != obj.id,
              fmt::format("objects[{}].id: duplicate of objects[{}]", j, i));
    }
  }

  for (int k = 0; k < kNumJoints; ++k) {
    const auto ks = static_cast<size_t>(k);
    require(arm.link_lengths[ks] > 0.0,
            fmt::format("arm.link_lengths[{}]: must be > 0", k));
    require(arm.link_radii_bare[ks] > 0.0,
            fmt::format("arm.link_radii_bare[{}]: must be > 0", k));
    require(arm.joint_limits[ks].first <= arm.joint_limits[ks].second,
            fmt::format("arm.joint_limits[{}]: lo must be <= hi", k));
  }
  require(arm.chamber_thickness > 0.0, "arm.chamber_thickness: must be > 0");
  require(arm.paw_radius_bare > 0.0, "arm.paw_radius_bare: must be > 0");

  require(chambers.rest_pressure > 0.0, "chambers.rest_pressure: must be > 0");
  for (int s = 0; s < kSensorsPerArm; ++s) {
    const auto ss = static_cast<size_t>(s);
    require(chambers.rest_volumes[ss] > 0.0,
            fmt::format("chambers.rest_volumes[{}]: must be > 0", s));
    require(chambers.patch_lengths[ss] > 0.0,
            fmt::format("chambers.patch_lengths[{}]: must be > 0", s));
  }
  require(chambers.max_relative_compression > 0.0 &&
              chambers.max_relative_compression < 1.0,
          "chambers.max_relative_compression: must be in (0,1)");

  require(load.increment_kg > 0.0, "load.increment_lb: must be > 0");
  require(load.max_added_kg >= 0.0, "load.max_added_lb: must be >= 0");
  require(load.slip_step > 0.0, "load.slip_step: must be > 0");
  require(load.max_slip > 0.0, "load.max_slip: must be > 0");

  require(body.shoulder_width >= 0.458 && body.shoulder_width <= 0.55,
          "body.shoulder_width: must be within the rail range [0.458, 0.55]");

  try {
    policy.validate();
  } catch (const std::exception& e) {
    errors.push_back(fmt::format("controller: {}", e.what()));
  }
  try {
    sim.validate();
  } catch (const std::exception& e) {
    errors.push_back(fmt::format("sim: {}", e.what()));
  }
  return errors;
}

Scene build_scene(const ExperimentSpec& spec, const Manipuland& object,
                  Mode mode, const PoseSpec& pose, const Vec2& jitter) {
  Scene scene;
  scene.body = spec.body;
  scene.chest = spec.chest;
  scene.mode = mode;

  const bool soft = mode == Mode::Soft;
  auto make_arm = [&](Side side) {
    PlanarArm arm;
    arm.side = side;
    const double half = spec.body.shoulder_width / 2.0;
    arm.base_position = Vec2(side == Side::Left ? -half : half, 0.0);
    arm.base_orientation = side == Side::Left
                               ? spec.body.shoulder_angle
                               : M_PI - spec.body.shoulder_angle;
    arm.link_lengths = spec.arm.link_lengths;
    for (int k = 0; k < kNumJoints; ++k) {
      const auto ks = static_cast<size_t>(k);
      arm.link_radii[ks] = spec.arm.link_radii_bare[ks] +
                           (soft ? spec.arm.chamber_thickness : 0.0);
      arm.core_radii[ks] = spec.arm.link_radii_bare[ks];
    }
    arm.paw_radius = spec.arm.paw_radius_bare +
                     (soft ? spec.arm.paw_bubble_thickness : 0.0);
    arm.paw_core_radius = spec.arm.paw_radius_bare;
    arm.joint_limits = spec.arm.joint_limits;
    arm.q = spec.policy.pregrasp_q;
    return arm;
  };
  scene.left = make_arm(Side::Left);
  scene.right = make_arm(Side::Right);

  scene.object = object;
  scene.object.pose.p = pose.position + jitter;
  scene.object.pose.theta = pose.angle_deg * kDeg;

  scene.contact.k_hard = spec.k_hard;
  scene.contact.k_foam = spec.k_foam;
  scene.contact.chest_rows_engaged = spec.chest_rows_engaged;
  scene.contact.chest_foam_thickness = spec.chest.foam_thickness;
  for (int s = 0; s < kSensorsPerArm; ++s) {
    const auto ss = static_cast<size_t>(s);
    ChamberModel& ch = scene.contact.chambers[ss];
    ch.rest_pressure = spec.chambers.rest_pressure;
    ch.rest_volume = spec.chambers.rest_volumes[ss];
    ch.thickness = s == kPawSensor ? spec.arm.paw_bubble_thickness
                                   : spec.arm.chamber_thickness;
    ch.outer_radius = s == kPawSensor
                          ? spec.arm.paw_radius_bare + spec.arm.paw_bubble_thickness
                          : spec.arm.link_radii_bare[ss] + spec.arm.chamber_thickness;
    ch.patch_length = spec.chambers.patch_lengths[ss];
    ch.max_relative_compression = spec.chambers.max_relative_compression;
  }
  return scene;
}

// ---------------------------------------------------------------- YAML i/o

namespace {

template <size_t N>
std::array<double, N> seq_to_array(const YAML::Node& node, const std::string& at) {
  if (!node || !node.IsSequence() || node.size() != N) {
    throw ConfigError(fmt::format("{}: expected a sequence of {}", at, N));
  }
  std::array<double, N> out{};
  for (size_t i = 0; i < N; ++i) out[i] = node[i].as<double>();
  return out;
}

}  // namespace

ExperimentSpec spec_from_yaml_string(const std::string& text) {
  const YAML::Node root = YAML::Load(text);
  ExperimentSpec spec;

  spec.name = root["name"].as<std::string>("");
  spec.seed = root["seed"].as<uint64_t>(spec.seed);
  spec.trials = root["trials"].as<int>(spec.trials);

  if (root["modes"]) {
    spec.modes.clear();
    for (const auto& m : root["modes"])
      spec.modes.push_back(mode_from_string(m.as<std::string>()));
  }

  if (const auto body = root["body"]) {
    spec.body.shoulder_width =
        body["shoulder_width"].as<double>(spec.body.shoulder_width);
    spec.body.shoulder_angle =
        body["shoulder_angle_deg"].as<double>(spec.body.shoulder_angle / kDeg) * kDeg;
    spec.body.base_height = body["base_height"].as<double>(spec.body.base_height);
  }
  if (const auto chest = root["chest"]) {
    spec.chest.width = chest["width"].as<double>(spec.chest.width);
    spec.chest.forward_offset =
        chest["forward_offset"].as<double>(spec.chest.forward_offset);
    spec.chest.grid_rows = chest["rows"].as<int>(spec.chest.grid_rows);
    spec.chest.grid_cols = chest["cols"].as<int>(spec.chest.grid_cols);
    spec.chest.slat_angle =
        chest["slat_angle_deg"].as<double>(spec.chest.slat_angle / kDeg) * kDeg;
    spec.chest.foam_thickness =
        chest["foam_thickness"].as<double>(spec.chest.foam_thickness);
    spec.k_foam = chest["k_foam"].as<double>(spec.k_foam);
    spec.chest_rows_engaged =
        chest["rows_engaged"].as<int>(spec.chest_rows_engaged);
  }
  if (const auto arm = root["arm"]) {
    if (arm["link_lengths"])
      spec.arm.link_lengths = seq_to_array<3>(arm["link_lengths"], "arm.link_lengths");
    if (arm["link_radii_bare"])
      spec.arm.link_radii_bare =
          seq_to_array<3>(arm["link_radii_bare"], "arm.link_radii_bare");
    spec.arm.chamber_thickness =
        arm["chamber_thickness"].as<double>(spec.arm.chamber_thickness);
    spec.arm.paw_radius_bare =
        arm["paw_radius_bare"].as<double>(spec.arm.paw_radius_bare);
    spec.arm.paw_bubble_thickness =
        arm["paw_bubble_thickness"].as<double>(spec.arm.paw_bubble_thickness);
    if (const auto lims = arm["joint_limits_deg"]) {
      if (!lims.IsSequence() || lims.size() != kNumJoints)
        throw ConfigError("arm.joint_limits_deg: expected 3 [lo, hi] pairs");
      for (int k = 0; k < kNumJoints; ++k) {
        const auto ks = static_cast<size_t>(k);
        spec.arm.joint_limits[ks] = {lims[ks][0].as<double>() * kDeg,
                                     lims[ks][1].as<double>() * kDeg};
      }
    }
  }
  if (const auto ch = root["chambers"]) {
    spec.chambers.rest_pressure =
        ch["rest_pressure"].as<double>(spec.chambers.rest_pressure);
    if (ch["rest_volumes"])
      spec.chambers.rest_volumes =
          seq_to_array<4>(ch["rest_volumes"], "chambers.rest_volumes");
    if (ch["patch_lengths"])
      spec.chambers.patch_lengths =
          seq_to_array<4>(ch["patch_lengths"], "chambers.patch_lengths");
    spec.chambers.max_relative_compression =
        ch["max_relative_compression"].as<double>(
            spec.chambers.max_relative_compression);
  }
  spec.k_hard = root["k_hard"].as<double>(spec.k_hard);

  if (const auto ctl = root["controller"]) {
    if (ctl["thresholds_hpa"]) {
      spec.policy.pressure_thresholds_hpa =
          seq_to_array<4>(ctl["thresholds_hpa"], "controller.thresholds_hpa");
    } else if (ctl["pressure_threshold_hpa"]) {
      spec.policy.pressure_thresholds_hpa.fill(
          ctl["pressure_threshold_hpa"].as<double>());
    }
    if (ctl["stage_velocities"])
      spec.policy.stage_velocities =
          seq_to_array<3>(ctl["stage_velocities"], "controller.stage_velocities");
    if (const auto js = ctl["joint_schedule"]) {
      if (!js.IsSequence() || js.size() != kNumStages)
        throw ConfigError("controller.joint_schedule: expected 3 entries");
      for (int k = 0; k < kNumStages; ++k)
        spec.policy.joint_schedule[static_cast<size_t>(k)] = js[k].as<int>();
    }
    if (ctl["pregrasp_deg"]) {
      const auto deg = seq_to_array<3>(ctl["pregrasp_deg"], "controller.pregrasp_deg");
      for (int k = 0; k < kNumJoints; ++k)
        spec.policy.pregrasp_q[static_cast<size_t>(k)] =
            deg[static_cast<size_t>(k)] * kDeg;
    }
    spec.policy.control_rate =
        ctl["control_rate"].as<double>(spec.policy.control_rate);
    spec.policy.hard_torque_threshold =
        ctl["tau_G"].as<double>(spec.policy.hard_torque_threshold);
    spec.policy.per_arm_stages =
        ctl["per_arm_stages"].as<bool>(spec.policy.per_arm_stages);
    if (ctl["trigger"]) {
      const auto t = ctl["trigger"].as<std::string>();
      if (t == "rearm")
        spec.policy.trigger = StageTrigger::Rearm;
      else if (t == "level")
        spec.policy.trigger = StageTrigger::Level;
      else
        throw ConfigError(fmt::format("controller.trigger: unknown '{}'", t));
    }
  }
  spec.sim.dt_control = 1.0 / spec.policy.control_rate;

  if (const auto sim = root["sim"]) {
    spec.sim.physics_substeps = sim["substeps"].as<int>(spec.sim.physics_substeps);
    spec.sim.equilibrium_tol_force =
        sim["tol_force"].as<double>(spec.sim.equilibrium_tol_force);
    spec.sim.equilibrium_tol_torque =
        sim["tol_torque"].as<double>(spec.sim.equilibrium_tol_torque);
    spec.sim.max_relaxation_iters =
        sim["max_iters"].as<int>(spec.sim.max_relaxation_iters);
    spec.sim.timeout = sim["timeout"].as<double>(spec.sim.timeout);
    spec.sim.sensor_noise_hpa =
        sim["noise_hpa"].as<double>(spec.sim.sensor_noise_hpa);
    spec.sim.collision_clearance =
        sim["collision_clearance"].as<double>(spec.sim.collision_clearance);
  }

  if (const auto objs = root["objects"]) {
    for (size_t i = 0; i < objs.size(); ++i) {
      const auto& node = objs[i];
      Manipuland obj;
      obj.id = node["id"].as<std::string>("");
      const auto shape = node["shape"].as<std::string>("circle");
      if (shape == "circle") {
        obj.shape = Manipuland::Shape::Circle;
        obj.radius = node["diameter"].as<double>(2.0 * obj.radius) / 2.0;
      } else if (shape == "rectangle") {
        obj.shape = Manipuland::Shape::Rectangle;
        const auto ext = seq_to_array<2>(node["extents"],
                                         fmt::format("objects[{}].extents", i));
        obj.half_extents = Vec2(ext[0] / 2.0, ext[1] / 2.0);
      } else {
        throw ConfigError(fmt::format("objects[{}].shape: unknown '{}'", i, shape));
      }
      obj.mass = node["mass_kg"].as<double>(0.0);
      obj.mu = node["mu"].as<double>(obj.mu);
      obj.taper = node["taper"].as<double>(obj.taper);
      spec.objects.push_back(obj);
    }
  }

  if (const auto poses = root["poses"]) {
    for (const auto& node : poses) {
      PoseSpec pose;
      const auto pos = seq_to_array<2>(node["position"], "poses[].position");
      pose.position = Vec2(pos[0], pos[1]);
      pose.angle_deg = node["angle_deg"].as<double>(0.0);
      spec.poses.push_back(pose);
    }
  }
  spec.placement_jitter = root["placement_jitter"].as<double>(spec.placement_jitter);

  if (const auto load = root["load"]) {
    spec.load.increment_kg =
        load["increment_lb"].as<double>(spec.load.increment_kg / kKgPerPound) *
        kKgPerPound;
    spec.load.max_added_kg =
        load["max_added_lb"].as<double>(spec.load.max_added_kg / kKgPerPound) *
        kKgPerPound;
    spec.load.slip_step = load["slip_step"].as<double>(spec.load.slip_step);
    spec.load.max_slip = load["max_slip"].as<double>(spec.load.max_slip);
  }
  return spec;
}

ExperimentSpec spec_from_yaml_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return spec_from_yaml_string(ss.str());
}

std::string spec_to_yaml(const ExperimentSpec& spec) {
  YAML::Emitter out;
  out.SetDoublePrecision(12);
  auto seq = [&out](auto... vals) {
    out << YAML::Flow << YAML::BeginSeq;
    (out << ... << vals);
    out << YAML::EndSeq;
  };

  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << spec.name;
  out << YAML::Key << "seed" << YAML::Value << spec.seed;
  out << YAML::Key << "trials" << YAML::Value << spec.trials;
  out << YAML::Key << "modes" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (Mode m : spec.modes) out << to_string(m);
  out << YAML::EndSeq;

  out << YAML::Key << "body" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "shoulder_width" << YAML::Value << spec.body.shoulder_width;
  out << YAML::Key << "shoulder_angle_deg" << YAML::Value
      << spec.body.shoulder_angle / kDeg;
  out << YAML::Key << "base_height" << YAML::Value << spec.body.base_height;
  out << YAML::EndMap;

  out << YAML::Key << "chest" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "width" << YAML::Value << spec.chest.width;
  out << YAML::Key << "forward_offset" << YAML::Value << spec.chest.forward_offset;
  out << YAML::Key << "rows" << YAML::Value << spec.chest.grid_rows;
  out << YAML::Key << "cols" << YAML::Value << spec.chest.grid_cols;
  out << YAML::Key << "slat_angle_deg" << YAML::Value << spec.chest.slat_angle / kDeg;
  out << YAML::Key << "foam_thickness" << YAML::Value << spec.chest.foam_thickness;
  out << YAML::Key << "k_foam" << YAML::Value << spec.k_foam;
  out << YAML::Key << "rows_engaged" << YAML::Value << spec.chest_rows_engaged;
  out << YAML::EndMap;

  out << YAML::Key << "arm" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "link_lengths" << YAML::Value;
  seq(spec.arm.link_lengths[0], spec.arm.link_lengths[1], spec.arm.link_lengths[2]);
  out << YAML::Key << "link_radii_bare" << YAML::Value;
  seq(spec.arm.link_radii_bare[0], spec.arm.link_radii_bare[1],
      spec.arm.link_radii_bare[2]);
  out << YAML::Key << "chamber_thickness" << YAML::Value
      << spec.arm.chamber_thickness;
  out << YAML::Key << "paw_radius_bare" << YAML::Value << spec.arm.paw_radius_bare;
  out << YAML::Key << "paw_bubble_thickness" << YAML::Value
      << spec.arm.paw_bubble_thickness;
  out << YAML::Key << "joint_limits_deg" << YAML::Value << YAML::BeginSeq;
  for (const auto& [lo, hi] : spec.arm.joint_limits) {
    out << YAML::Flow << YAML::BeginSeq << lo / kDeg << hi / kDeg << YAML::EndSeq;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::Key << "chambers" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rest_pressure" << YAML::Value << spec.chambers.rest_pressure;
  out << YAML::Key << "rest_volumes" << YAML::Value;
  seq(spec.chambers.rest_volumes[0], spec.chambers.rest_volumes[1],
      spec.chambers.rest_volumes[2], spec.chambers.rest_volumes[3]);
  out << YAML::Key << "patch_lengths" << YAML::Value;
  seq(spec.chambers.patch_lengths[0], spec.chambers.patch_lengths[1],
      spec.chambers.patch_lengths[2], spec.chambers.patch_lengths[3]);
  out << YAML::Key << "max_relative_compression" << YAML::Value
      << spec.chambers.max_relative_compression;
  out << YAML::EndMap;

  out << YAML::Key << "k_hard" << YAML::Value << spec.k_hard;

  out << YAML::Key << "controller" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "thresholds_hpa" << YAML::Value;
  seq(spec.policy.pressure_thresholds_hpa[0], spec.policy.pressure_thresholds_hpa[1],
      spec.policy.pressure_thresholds_hpa[2], spec.policy.pressure_thresholds_hpa[3]);
  out << YAML::Key << "stage_velocities" << YAML::Value;
  seq(spec.policy.stage_velocities[0], spec.policy.stage_velocities[1],
      spec.policy.stage_velocities[2]);
  out << YAML::Key << "joint_schedule" << YAML::Value;
  seq(spec.policy.joint_schedule[0], spec.policy.joint_schedule[1],
      spec.policy.joint_schedule[2]);
  out << YAML::Key << "pregrasp_deg" << YAML::Value;
  seq(spec.policy.pregrasp_q[0] / kDeg, spec.policy.pregrasp_q[1] / kDeg,
      spec.policy.pregrasp_q[2] / kDeg);
  out << YAML::Key << "control_rate" << YAML::Value << spec.policy.control_rate;
  out << YAML::Key << "tau_G" << YAML::Value << spec.policy.hard_torque_threshold;
  out << YAML::Key << "per_arm_stages" << YAML::Value << spec.policy.per_arm_stages;
  out << YAML::Key << "trigger" << YAML::Value
      << (spec.policy.trigger == StageTrigger::Rearm ? "rearm" : "level");
  out << YAML::EndMap;

  out << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "substeps" << YAML::Value << spec.sim.physics_substeps;
  out << YAML::Key << "tol_force" << YAML::Value << spec.sim.equilibrium_tol_force;
  out << YAML::Key << "tol_torque" << YAML::Value << spec.sim.equilibrium_tol_torque;
  out << YAML::Key << "max_iters" << YAML::Value << spec.sim.max_relaxation_iters;
  out << YAML::Key << "timeout" << YAML::Value << spec.sim.timeout;
  out << YAML::Key << "noise_hpa" << YAML::Value << spec.sim.sensor_noise_hpa;
  out << YAML::Key << "collision_clearance" << YAML::Value
      << spec.sim.collision_clearance;
  out << YAML::EndMap;

  out << YAML::Key << "objects" << YAML::Value << YAML::BeginSeq;
  for (const auto& obj : spec.objects) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << obj.id;
    if (obj.shape == Manipuland::Shape::Circle) {
      out << YAML::Key << "shape" << YAML::Value << "circle";
      out << YAML::Key << "diameter" << YAML::Value << 2.0 * obj.radius;
    } else {
      out << YAML::Key << "shape" << YAML::Value << "rectangle";
      out << YAML::Key << "extents" << YAML::Value;
      seq(2.0 * obj.half_extents.x(), 2.0 * obj.half_extents.y());
    }
    out << YAML::Key << "mass_kg" << YAML::Value << obj.mass;
    out << YAML::Key << "mu" << YAML::Value << obj.mu;
    out << YAML::Key << "taper" << YAML::Value << obj.taper;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "poses" << YAML::Value << YAML::BeginSeq;
  for (const auto& pose : spec.poses) {
    out << YAML::BeginMap;
    out << YAML::Key << "position" << YAML::Value;
    seq(pose.position.x(), pose.position.y());
    out << YAML::Key << "angle_deg" << YAML::Value << pose.angle_deg;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "placement_jitter" << YAML::Value << spec.placement_jitter;

  out << YAML::Key << "load" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "increment_lb" << YAML::Value
      << spec.load.increment_kg / kKgPerPound;
  out << YAML::Key << "max_added_lb" << YAML::Value
      << spec.load.max_added_kg / kKgPerPound;
  out << YAML::Key << "slip_step" << YAML::Value << spec.load.slip_step;
  out << YAML::Key << "max_slip" << YAML::Value << spec.load.max_slip;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

// ---------------------------------------------------------------- builtins

namespace {

Manipuland pot(const std::string& id, double diameter_cm, double weight_lb) {
  Manipuland obj;
  obj.id = id;
  obj.shape = Manipuland::Shape::Circle;
  obj.radius = diameter_cm / 200.0;
  obj.mass = weight_lb * kKgPerPound;
  obj.mu = 0.8;
  obj.taper = 0.4;
  return obj;
}

ExperimentSpec pots_spec() {
  ExperimentSpec spec;
  spec.name = "pots-soft-vs-hard";
  spec.seed = 42;
  spec.trials = 3;
  spec.modes = {Mode::Soft, Mode::Hard};
  spec.objects = {pot("potA", 11.4, 0.9), pot("potB", 17.2, 0.7),
                  pot("potC", 22.9, 2.6), pot("potD", 31.1, 4.3)};
  spec.poses = {PoseSpec{Vec2(0.0, 0.44), 0.0}};
  spec.placement_jitter = 0.003;
  spec.policy.pregrasp_q = {45.0 * kDeg, -52.0 * kDeg, -124.0 * kDeg};
  return spec;
}

ExperimentSpec hamper_spec() {
  ExperimentSpec spec;
  spec.name = "hamper-poses";
  spec.seed = 7;
  spec.trials = 1;
  spec.modes = {Mode::Soft};
  Manipuland hamper;
  hamper.id = "hamper";
  hamper.shape = Manipuland::Shape::Rectangle;
  hamper.half_extents = Vec2(0.21, 0.165);
  hamper.mass = 1.0;
  hamper.mu = 0.8;
  hamper.taper = 0.6;
  spec.objects = {hamper};
  spec.poses = {PoseSpec{Vec2(0.0, 0.34), 0.0}, PoseSpec{Vec2(0.0, 0.34), 45.0}};
  spec.placement_jitter = 0.0;
  spec.policy.pregrasp_q = {45.0 * kDeg, -52.0 * kDeg, -124.0 * kDeg};
  spec.load.max_added_kg = 0.0;  // stability check only, no added weights
  return spec;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"pots-soft-vs-hard", "hamper-poses"};
}

ExperimentSpec builtin_spec(const std::string& name) {
  if (name == "pots-soft-vs-hard") return pots_spec();
  if (name == "hamper-poses") return hamper_spec();
  throw ConfigError(fmt::format("unknown builtin experiment '{}'", name));
}

ExperimentSpec resolve_spec(const std::string& name_or_path) {
  for (const auto& name : builtin_names()) {
    if (name == name_or_path) return builtin_spec(name);
  }
  return spec_from_yaml_file(name_or_path);
}

// ---------------------------------------------------------------- execution

namespace {

struct RunPlan {
  size_t index;
  Mode mode;
  size_t object_idx;
  size_t pose_idx;
  int trial;
  std::string id;
  uint64_t seed;
};

struct RunArtifacts {
  SummaryRow summary;
  GraspTrace trace;
  std::string error;
};

std::string object_size_string(const Manipuland& obj) {
  if (obj.shape == Manipuland::Shape::Circle)
    return format_double(2.0 * obj.radius);
  return fmt::format("{}x{}", format_double(2.0 * obj.half_extents.x()),
                     format_double(2.0 * obj.half_extents.y()));
}

RunArtifacts execute_run(const ExperimentSpec& spec, const RunPlan& plan) {
  const Manipuland& object = spec.objects[plan.object_idx];
  const PoseSpec& pose = spec.poses[plan.pose_idx];

  std::mt19937_64 rng(plan.seed);
  std::uniform_real_distribution<double> jit(-spec.placement_jitter,
                                             spec.placement_jitter);
  Vec2 jitter(0.0, 0.0);
  if (spec.placement_jitter > 0.0) jitter = Vec2(jit(rng), jit(rng));

  Scene scene = build_scene(spec, object, plan.mode, pose, jitter);
  SimConfig sim = spec.sim;
  sim.mode = plan.mode;
  sim.seed = plan.seed;

  RunArtifacts art;
  art.summary.run = plan.id;
  art.summary.object = object.id;
  art.summary.size = object_size_string(object);
  art.summary.mode = to_string(plan.mode);
  art.summary.object_mass_kg = object.mass;
  art.summary.trial = plan.trial;
  art.summary.pose_deg = pose.angle_deg;

  art.trace = run_grasp(&scene, spec.policy, sim);
  Outcome outcome;
  if (art.trace.grasp_achieved) {
    try {
      outcome = load_test(&scene, sim, object.mass, spec.load, &art.trace);
    } catch (const NonConvergenceError& e) {
      art.trace.status = RunStatus::Invalid;
      art.trace.error = e.what();
    }
  } else {
    // Grasp never completed: nothing is held once the table drops.
    outcome.kind = OutcomeKind::Failure;
  }

  art.summary.outcome = to_string(outcome.kind);
  art.summary.max_weight_held_kg = outcome.max_weight_held;
  art.summary.displacement_events = outcome.displacement_events;
  art.summary.steps_to_grasp = art.trace.steps_to_grasp;
  switch (art.trace.status) {
    case RunStatus::Ok: art.summary.status = "ok"; break;
    case RunStatus::Timeout: art.summary.status = "timeout"; break;
    case RunStatus::Invalid: art.summary.status = "invalid"; break;
  }
  art.error = art.trace.error;
  return art;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentSpec& spec,
                                const std::filesystem::path& out_dir, int jobs,
                                std::optional<Mode> mode_filter) {
  const auto errors = spec.validate();
  if (!errors.empty()) {
    std::string joined;
    for (const auto& e : errors) joined += "\n  " + e;
    throw ConfigError("invalid experiment spec:" + joined);
  }

  namespace fs = std::filesystem;
  ExperimentOutput output;
  output.dir = out_dir / spec.name;
  fs::create_directories(output.dir / "traces");
  fs::create_directories(output.dir / "plots");

  // Deterministic run enumeration: object, mode, pose, trial.
  std::vector<RunPlan> plans;
  for (size_t oi = 0; oi < spec.objects.size(); ++oi) {
    for (size_t mi = 0; mi < spec.modes.size(); ++mi) {
      const Mode mode = spec.modes[mi];
      if (mode_filter && mode != *mode_filter) continue;
      for (size_t pi = 0; pi < spec.poses.size(); ++pi) {
        for (int trial = 0; trial < spec.trials; ++trial) {
          RunPlan plan;
          plan.index = plans.size();
          plan.mode = mode;
          plan.object_idx = oi;
          plan.pose_idx = pi;
          plan.trial = trial;
          plan.id = fmt::format("{}-{}-p{}-t{}", spec.objects[oi].id,
                                to_string(mode), pi, trial);
          // Stable per-run stream regardless of filtering or scheduling.
          plan.seed = splitmix64(spec.seed ^ splitmix64((oi << 24) ^ (mi << 16) ^
                                                        (pi << 8) ^
                                                        static_cast<size_t>(trial)));
          plans.push_back(plan);
        }
      }
    }
  }

  std::vector<RunArtifacts> results(plans.size());
  std::atomic<size_t> next{0};
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int workers =
      std::max(1, std::min<int>(jobs > 0 ? jobs : std::max(hw, 1),
                                static_cast<int>(plans.size())));
  auto work = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= plans.size()) return;
      results[i] = execute_run(spec, plans[i]);
      write_trace_csv(output.dir / "traces" / (plans[i].id + ".csv"),
                      results[i].trace.rows);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // Summary, resolved config, manifest, plots; all derived deterministically.
  for (const auto& art : results) output.summary.push_back(art.summary);
  write_summary_csv(output.dir / "summary.csv", output.summary);

  std::ofstream cfg(output.dir / "resolved_config.yaml", std::ios::binary);
  cfg << spec_to_yaml(spec);
  cfg.close();

  nlohmann::ordered_json manifest;
  manifest["experiment"] = spec.name;
  manifest["seed"] = spec.seed;
  manifest["runs"] = nlohmann::ordered_json::array();
  for (size_t i = 0; i < results.size(); ++i) {
    const auto& art = results[i];
    nlohmann::ordered_json entry;
    entry["run"] = art.summary.run;
    entry["status"] = art.summary.status;
    entry["complete"] = art.summary.status == "ok" ||
                        art.summary.status == "timeout";
    entry["invariant_violations"] = art.trace.invariant_violations;
    entry["trace"] = "traces/" + art.summary.run + ".csv";
    if (!art.error.empty()) entry["error"] = art.error;
    manifest["runs"].push_back(entry);
    if (art.summary.status == "invalid") ++output.invalid_runs;
    output.invariant_violations += art.trace.invariant_violations;
  }
  std::ofstream mf(output.dir / "manifest.json", std::ios::binary);
  mf << manifest.dump(2) << "\n";
  mf.close();

  plot_outcome_grid(output.dir / "summary.csv", output.dir / "plots" / "outcomes.svg");
  for (const auto& art : output.summary) {
    plot_timeseries(output.dir / "traces" / (art.run + ".csv"),
                    output.dir / "plots" / (art.run + ".svg"),
                    spec.policy.pressure_thresholds_hpa[0]);
  }
  return output;
}

}  // namespace softgrasp
