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

#include <algorithm>
#include <fstream>
#include <map>

#include "softgrasp/experiment.hpp"

namespace softgrasp {

Report compare_report(const std::vector<std::filesystem::path>& summaries) {
  if (summaries.empty()) throw ConfigError("report: no summary files given");

  std::vector<SummaryRow> rows;
  for (const auto& path : summaries) {
    auto p = path;
    if (std::filesystem::is_directory(p)) p /= "summary.csv";
    const auto part = read_summary_csv(p);
    rows.insert(rows.end(), part.begin(), part.end());
  }

  // Aggregate by (object, mode), preserving first-seen order.
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, ReportEntry> agg;
  for (const auto& row : rows) {
    const auto key = std::make_pair(row.object, row.mode);
    if (!agg.count(key)) {
      order.push_back(key);
      ReportEntry e;
      e.object = row.object;
      e.mode = row.mode;
      e.object_mass_kg = row.object_mass_kg;
      agg[key] = e;
    }
    ReportEntry& e = agg[key];
    ++e.trials;
    if (row.max_weight_held_kg >= row.object_mass_kg - 1e-9) ++e.held_empty_trials;
    if (row.outcome != "failure") ++e.completed_trials;
    e.max_added_kg = std::max(
        e.max_added_kg, std::max(0.0, row.max_weight_held_kg - row.object_mass_kg));
    e.displacement_events += row.displacement_events;
    e.mean_steps_to_grasp += row.steps_to_grasp;
  }

  Report report;
  for (const auto& key : order) {
    ReportEntry e = agg[key];
    if (e.trials > 0) e.mean_steps_to_grasp /= e.trials;
    report.entries.push_back(e);
  }

  // Cross-mode ordering checks, meaningful when both modes are present.
  auto majority_held = [](const ReportEntry& e) {
    return 2 * e.held_empty_trials > e.trials;
  };
  auto majority_completed = [](const ReportEntry& e) {
    return 2 * e.completed_trials > e.trials;
  };

  ComparisonFlags& flags = report.flags;
  bool any_soft = false, any_hard = false;
  for (const auto& e : report.entries) {
    if (e.mode == "soft") any_soft = true;
    if (e.mode == "hard") any_hard = true;
  }
  flags.have_both_modes = any_soft && any_hard;

  bool superset = true;
  for (const auto& e : report.entries) {
    if (e.mode == "soft") {
      flags.soft_events += e.displacement_events;
      if (majority_held(e)) ++flags.soft_held_diameters;
    } else if (e.mode == "hard") {
      flags.hard_events += e.displacement_events;
      if (majority_completed(e)) {
        ++flags.hard_completed_diameters;
        flags.hard_completed_objects.push_back(e.object);
      }
      // The soft success set should contain every hard success.
      const auto soft_it =
          std::find_if(report.entries.begin(), report.entries.end(),
                       [&](const ReportEntry& s) {
                         return s.mode == "soft" && s.object == e.object;
                       });
      if (majority_held(e) && soft_it != report.entries.end() &&
          !majority_held(*soft_it)) {
        superset = false;
      }
    }
  }
  flags.soft_superset_of_hard = flags.have_both_modes && superset;
  return report;
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  std::ofstream csv(dir / "report.csv", std::ios::binary);
  csv << "object,mode,object_mass_kg,trials,held_empty_trials,completed_trials,"
         "max_added_lb,displacement_events,mean_steps_to_grasp\n";
  for (const auto& e : report.entries) {
    csv << e.object << ',' << e.mode << ',' << format_double(e.object_mass_kg)
        << ',' << e.trials << ',' << e.held_empty_trials << ','
        << e.completed_trials << ','
        << format_double(e.max_added_kg / kKgPerPound) << ','
        << e.displacement_events << ',' << format_double(e.mean_steps_to_grasp)
        << '\n';
  }
  csv.close();

  std::ofstream md(dir / "report.md", std::ios::binary);
  md << "# Grasp experiment comparison\n\n";
  md << "| object | mode | empty (kg) | trials | held empty | completed | "
        "max added (lb) | displacement events | mean steps |\n";
  md << "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& e : report.entries) {
    md << fmt::format("| {} | {} | {} | {} | {}/{} | {}/{} | {} | {} | {} |\n",
                      e.object, e.mode, format_double(e.object_mass_kg), e.trials,
                      e.held_empty_trials, e.trials, e.completed_trials, e.trials,
                      format_double(e.max_added_kg / kKgPerPound),
                      e.displacement_events, format_double(e.mean_steps_to_grasp));
  }
  md << "\n";
  if (report.flags.have_both_modes) {
    md << "## Soft vs hard ordering\n\n";
    md << fmt::format("- soft holds at least the empty object on {} size(s)\n",
                      report.flags.soft_held_diameters);
    std::string hard_list;
    for (const auto& o : report.flags.hard_completed_objects) {
      if (!hard_list.empty()) hard_list += ", ";
      hard_list += o;
    }
    md << fmt::format("- hard completes the load protocol on {} size(s){}\n",
                      report.flags.hard_completed_diameters,
                      hard_list.empty() ? "" : " (" + hard_list + ")");
    md << fmt::format("- soft success set contains hard success set: {}\n",
                      report.flags.soft_superset_of_hard ? "yes" : "no");
    md << fmt::format("- displacement events, soft vs hard: {} vs {}\n",
                      report.flags.soft_events, report.flags.hard_events);
  }
  md.close();
}

}  // namespace softgrasp
