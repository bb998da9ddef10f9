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

#include <fmt/format.h>

#include <iostream>

#include "CLI11.hpp"
#include "softgrasp/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Planar simulator of a soft, tactile-sensing bimanual upper body and "
      "its pressure-thresholded whole-body grasping primitive"};
  app.require_subcommand(1);

  std::string spec_arg;
  std::string out_dir = "out";
  int jobs = 0;
  std::string mode_str;
  uint64_t seed = 0;
  bool seed_set = false;

  auto* run = app.add_subcommand("run", "Run an experiment spec (builtin name or YAML file)");
  run->add_option("spec", spec_arg, "builtin name or YAML spec path")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--jobs", jobs, "parallel workers (default: hardware)");
  run->add_option("--mode", mode_str, "filter to one mode (soft|hard)");
  run->add_option("--seed", seed, "override the spec seed")
      ->each([&](const std::string&) { seed_set = true; });

  auto* validate = app.add_subcommand("validate", "Validate a spec and print problems");
  validate->add_option("spec", spec_arg, "builtin name or YAML spec path")->required();

  std::vector<std::string> report_dirs;
  auto* report = app.add_subcommand("report", "Comparison report over experiment outputs");
  report->add_option("dirs", report_dirs, "experiment output dirs or summary.csv files")
      ->required();
  report->add_option("--out", out_dir, "report output directory");

  auto* list = app.add_subcommand("list-builtin", "List builtin experiment specs");

  auto* dump = app.add_subcommand("dump", "Print a spec as resolved YAML");
  dump->add_option("spec", spec_arg)->required();

  std::string snap_object, snap_mode = "soft", snap_svg;
  int snap_pose = 0;
  bool snap_load = false;
  auto* snapshot = app.add_subcommand(
      "snapshot", "Run one grasp and dump the final scene state (debug aid)");
  snapshot->add_option("spec", spec_arg)->required();
  snapshot->add_option("object", snap_object, "object id (default: first)");
  snapshot->add_option("--mode", snap_mode);
  snapshot->add_option("--pose", snap_pose, "pose index");
  snapshot->add_option("--svg", snap_svg, "write the final scene as SVG");
  snapshot->add_flag("--load", snap_load, "also run the load protocol");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& name : softgrasp::builtin_names()) std::cout << name << "\n";
      return 0;
    }
    if (validate->parsed()) {
      const auto spec = softgrasp::resolve_spec(spec_arg);
      const auto errors = spec.validate();
      if (errors.empty()) {
        std::cout << "OK: " << spec.name << "\n";
        return 0;
      }
      for (const auto& e : errors) std::cerr << e << "\n";
      return 1;
    }
    if (run->parsed()) {
      auto spec = softgrasp::resolve_spec(spec_arg);
      if (seed_set) spec.seed = seed;
      std::optional<softgrasp::Mode> filter;
      if (!mode_str.empty()) filter = softgrasp::mode_from_string(mode_str);

      const auto output = softgrasp::run_experiment(spec, out_dir, jobs, filter);
      fmt::print("{}: {} runs -> {}\n", spec.name, output.summary.size(),
                 output.dir.string());
      for (const auto& row : output.summary) {
        fmt::print("  {:<22} {:>12}  held {:>6.2f} kg  events {}  steps {}\n",
                   row.run, row.outcome, row.max_weight_held_kg,
                   row.displacement_events, row.steps_to_grasp);
      }
      if (output.invariant_violations > 0) {
        fmt::print(stderr, "invariant violations: {}\n",
                   output.invariant_violations);
      }
      if (output.invalid_runs > 0) {
        fmt::print(stderr, "{} run(s) invalid (non-convergence)\n",
                   output.invalid_runs);
        return 2;
      }
      return 0;
    }
    if (dump->parsed()) {
      std::cout << softgrasp::spec_to_yaml(softgrasp::resolve_spec(spec_arg));
      return 0;
    }
    if (snapshot->parsed()) {
      const auto spec = softgrasp::resolve_spec(spec_arg);
      size_t oi = 0;
      for (size_t i = 0; i < spec.objects.size(); ++i) {
        if (spec.objects[i].id == snap_object) oi = i;
      }
      const auto mode = softgrasp::mode_from_string(snap_mode);
      auto scene = softgrasp::build_scene(
          spec, spec.objects[oi], mode,
          spec.poses[static_cast<size_t>(snap_pose)], softgrasp::Vec2(0, 0));
      auto sim = spec.sim;
      sim.mode = mode;
      auto trace = softgrasp::run_grasp(&scene, spec.policy, sim);

      fmt::print("run: {} {} pose {}\n", spec.objects[oi].id, snap_mode, snap_pose);
      fmt::print("status: {}   steps_to_grasp: {}\n",
                 trace.status == softgrasp::RunStatus::Ok        ? "ok"
                 : trace.status == softgrasp::RunStatus::Timeout ? "timeout"
                                                                 : "invalid",
                 trace.steps_to_grasp);
      int prev = -1;
      for (const auto& row : trace.rows) {
        if (row.stage != prev) {
          fmt::print("  t={:6.2f} stage {}  contacts {}  capacity {:7.2f} N\n",
                     row.t, row.stage, row.contact_count, row.capacity);
          prev = row.stage;
        }
      }
      if (!trace.rows.empty()) {
        const auto& last = trace.rows.back();
        fmt::print("final: t={:.2f} contacts {} capacity {:.2f} N qL=[{:.2f},{:.2f},{:.2f}]\n",
                   last.t, last.contact_count, last.capacity, last.q[0], last.q[1],
                   last.q[2]);
      }
      if (snap_load && trace.grasp_achieved) {
        const auto outcome = softgrasp::load_test(&scene, sim,
                                                  spec.objects[oi].mass,
                                                  spec.load, &trace);
        fmt::print("load: {}  held {:.3f} kg (added {:.2f} lb)  events {}  slip {:.3f} m\n",
                   softgrasp::to_string(outcome.kind), outcome.max_weight_held,
                   (outcome.max_weight_held - spec.objects[oi].mass) /
                       softgrasp::kKgPerPound,
                   outcome.displacement_events, outcome.slip_distance);
      }
      const auto contacts =
          softgrasp::detect_contacts(scene.left, scene.right, scene.chest,
                                     scene.object, mode, scene.slip);
      const auto forces = softgrasp::contact_forces(contacts, scene.contact);
      for (const auto& cp : forces.contacts.points) {
        fmt::print("  contact {}  pen {:.4f} m  N {:.2f}\n", cp.source.label(),
                   cp.penetration, cp.normal_force);
      }
      fmt::print("object at ({:.3f}, {:.3f})\n", scene.object.pose.p.x(),
                 scene.object.pose.p.y());
      const auto col = softgrasp::self_collision_check(
          scene.left, scene.right, scene.chest, sim.collision_clearance);
      fmt::print("self-collision: {}  min core clearance {:.4f} m\n",
                 col.collision, col.min_clearance);
      const auto segs = softgrasp::forward_kinematics(scene.left);
      for (int k = 0; k <= 3; ++k) {
        fmt::print("  left point {}: ({:.3f}, {:.3f})\n", k,
                   segs.points[static_cast<size_t>(k)].x(),
                   segs.points[static_cast<size_t>(k)].y());
      }
      if (!snap_svg.empty()) {
        softgrasp::render_scene_svg(scene, forces.contacts, snap_svg);
        fmt::print("scene svg: {}\n", snap_svg);
      }
      return 0;
    }
    if (report->parsed()) {
      std::vector<std::filesystem::path> paths(report_dirs.begin(),
                                               report_dirs.end());
      const auto rep = softgrasp::compare_report(paths);
      softgrasp::write_report(rep, out_dir);
      fmt::print("report written to {}/report.md\n", out_dir);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
