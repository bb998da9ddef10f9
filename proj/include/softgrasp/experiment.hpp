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

#ifndef SOFTGRASP_EXPERIMENT_HPP_
#define SOFTGRASP_EXPERIMENT_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "softgrasp/csv.hpp"
#include "softgrasp/engine.hpp"

namespace softgrasp {

struct ArmGeometry {
  std::array<double, kNumJoints> link_lengths{0.41, 0.31, 0.16};
  std::array<double, kNumJoints> link_radii_bare{0.045, 0.040, 0.035};
  double chamber_thickness{0.035};
  double paw_radius_bare{0.040};
  double paw_bubble_thickness{0.030};
  std::array<std::pair<double, double>, kNumJoints> joint_limits{
      std::pair{-1.2, 0.80}, std::pair{-1.9, 0.2}, std::pair{-2.4, 0.2}};
};

/// Calibration of the four pressure chambers (upper arm, forearm, wrist,
/// paw); outer radii come from the arm geometry per mode.
struct ChamberBank {
  double rest_pressure{101325.0};
  std::array<double, kSensorsPerArm> rest_volumes{1.0e-3, 8.0e-4, 5.0e-4,
                                                  4.0e-4};
  std::array<double, kSensorsPerArm> patch_lengths{0.30, 0.24, 0.12, 0.10};
  double max_relative_compression{0.6};
};

struct PoseSpec {
  Vec2 position{0.0, 0.30};
  double angle_deg{0.0};
};

struct ExperimentSpec {
  std::string name;
  uint64_t seed{42};
  int trials{3};
  std::vector<Mode> modes{Mode::Soft, Mode::Hard};

  BodyFrame body;
  ChestGeometry chest;
  double k_foam{8000.0};
  int chest_rows_engaged{4};
  ArmGeometry arm;
  ChamberBank chambers;
  double k_hard{1.0e5};

  GraspPolicyConfig policy;
  SimConfig sim;

  std::vector<Manipuland> objects;  // mass is the empty weight
  std::vector<PoseSpec> poses;
  double placement_jitter{0.0};  // m, uniform per-trial placement spread
  LoadProtocol load;

  /// All schema problems, each prefixed with its field path; empty when valid.
  std::vector<std::string> validate() const;
};

/// Scene for one run of the spec (mode-dependent radii and chambers).
Scene build_scene(const ExperimentSpec& spec, const Manipuland& object,
                  Mode mode, const PoseSpec& pose, const Vec2& jitter);

const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);

// ---- YAML config round trip ----

ExperimentSpec spec_from_yaml_file(const std::filesystem::path& path);
ExperimentSpec spec_from_yaml_string(const std::string& text);
std::string spec_to_yaml(const ExperimentSpec& spec);

// ---- Builtin experiment definitions ----

std::vector<std::string> builtin_names();
ExperimentSpec builtin_spec(const std::string& name);
/// Loads a builtin by name or parses a YAML file path.
ExperimentSpec resolve_spec(const std::string& name_or_path);

// ---- Execution ----

struct ExperimentOutput {
  std::filesystem::path dir;
  std::vector<SummaryRow> summary;
  int invalid_runs{0};
  int invariant_violations{0};
};

/// Runs trials x objects x poses x modes deterministically, writes the
/// summary, per-run traces, resolved config, manifest, and plots under
/// out_dir/<spec name>.
ExperimentOutput run_experiment(const ExperimentSpec& spec,
                                const std::filesystem::path& out_dir,
                                int jobs = 0,
                                std::optional<Mode> mode_filter = std::nullopt);

// ---- Reporting (report.cpp) ----

struct ReportEntry {
  std::string object;
  std::string mode;
  double object_mass_kg{0.0};
  int trials{0};
  int held_empty_trials{0};   // trials whose grasp held at least the object
  int completed_trials{0};    // trials that finished the protocol (no failure)
  double max_added_kg{0.0};   // best added load held across trials
  int displacement_events{0};
  double mean_steps_to_grasp{0.0};
};

struct ComparisonFlags {
  bool have_both_modes{false};
  int soft_held_diameters{0};
  int hard_completed_diameters{0};
  std::vector<std::string> hard_completed_objects;
  bool soft_superset_of_hard{false};
  int soft_events{0};
  int hard_events{0};
};

struct Report {
  std::vector<ReportEntry> entries;
  ComparisonFlags flags;
};

Report compare_report(const std::vector<std::filesystem::path>& summaries);
void write_report(const Report& report, const std::filesystem::path& dir);

// ---- Plots (plots.cpp) ----

/// Both plot writers are pure functions of the CSV they read.
void plot_timeseries(const std::filesystem::path& trace_csv,
                     const std::filesystem::path& out_svg,
                     double threshold_hpa);
void plot_outcome_grid(const std::filesystem::path& summary_csv,
                       const std::filesystem::path& out_svg);

/// Debug view of a scene state: body capsules, chest plates, object, and
/// contact points.
void render_scene_svg(const Scene& scene, const ContactSet& contacts,
                      const std::filesystem::path& out_svg);

}  // namespace softgrasp

#endif  // SOFTGRASP_EXPERIMENT_HPP_
