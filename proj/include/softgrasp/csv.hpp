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

#ifndef SOFTGRASP_CSV_HPP_
#define SOFTGRASP_CSV_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "softgrasp/engine.hpp"

namespace softgrasp {

/// Deterministic shortest-roundtrip float formatting shared by every CSV and
/// SVG writer, so re-running a seed reproduces files byte for byte.
std::string format_double(double v);

extern const char* const kTraceHeader;

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

struct SummaryRow {
  std::string run;       // unique id, also the trace file stem
  std::string object;
  std::string size;      // diameter (circle) or WxH extents (rectangle), m
  std::string mode;      // soft | hard
  double object_mass_kg{0.0};
  int trial{0};
  double pose_deg{0.0};
  std::string outcome;   // success | displacement | failure
  double max_weight_held_kg{0.0};
  int displacement_events{0};
  int steps_to_grasp{-1};
  std::string status;    // ok | timeout | invalid
};

extern const char* const kSummaryHeader;

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

}  // namespace softgrasp

#endif  // SOFTGRASP_CSV_HPP_
