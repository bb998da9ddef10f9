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

#include "softgrasp/csv.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

namespace softgrasp {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  return fmt::format("{:.12g}", v);
}

const char* const kTraceHeader =
    "t,stage,qL0,qL1,qL2,qR0,qR1,qR2,qdL0,qdL1,qdL2,qdR0,qdR1,qdR2,"
    "dpL0,dpL1,dpL2,dpLP,dpR0,dpR1,dpR2,dpRP,contacts,total_normal_n,"
    "capacity_n,weight_n,slip_m";

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<TraceRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << kTraceHeader << "\n";
  for (const auto& r : rows) {
    out << format_double(r.t) << ',' << r.stage;
    for (double v : r.q) out << ',' << format_double(v);
    for (double v : r.qdot) out << ',' << format_double(v);
    for (double v : r.dp) out << ',' << format_double(v);
    out << ',' << r.contact_count << ',' << format_double(r.total_normal) << ','
        << format_double(r.capacity) << ',' << format_double(r.weight) << ','
        << format_double(r.slip) << '\n';
  }
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::runtime_error("unexpected trace schema in " + path.string());
  }
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 27) {
      throw std::runtime_error("malformed trace row in " + path.string());
    }
    TraceRow r;
    size_t i = 0;
    r.t = std::stod(f[i++]);
    r.stage = std::stoi(f[i++]);
    for (auto& v : r.q) v = std::stod(f[i++]);
    for (auto& v : r.qdot) v = std::stod(f[i++]);
    for (auto& v : r.dp) v = std::stod(f[i++]);
    r.contact_count = std::stoi(f[i++]);
    r.total_normal = std::stod(f[i++]);
    r.capacity = std::stod(f[i++]);
    r.weight = std::stod(f[i++]);
    r.slip = std::stod(f[i++]);
    rows.push_back(r);
  }
  return rows;
}

const char* const kSummaryHeader =
    "run,object,size_m,mode,object_mass_kg,trial,pose_deg,outcome,"
    "max_weight_held_kg,displacement_events,steps_to_grasp,status";

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<SummaryRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << kSummaryHeader << "\n";
  for (const auto& r : rows) {
    out << r.run << ',' << r.object << ',' << r.size << ',' << r.mode << ','
        << format_double(r.object_mass_kg) << ',' << r.trial << ','
        << format_double(r.pose_deg) << ',' << r.outcome << ','
        << format_double(r.max_weight_held_kg) << ',' << r.displacement_events
        << ',' << r.steps_to_grasp << ',' << r.status << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kSummaryHeader) {
    throw std::runtime_error("unexpected summary schema in " + path.string());
  }
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 12) {
      throw std::runtime_error("malformed summary row in " + path.string());
    }
    SummaryRow r;
    r.run = f[0];
    r.object = f[1];
    r.size = f[2];
    r.mode = f[3];
    r.object_mass_kg = std::stod(f[4]);
    r.trial = std::stoi(f[5]);
    r.pose_deg = std::stod(f[6]);
    r.outcome = f[7];
    r.max_weight_held_kg = std::stod(f[8]);
    r.displacement_events = std::stoi(f[9]);
    r.steps_to_grasp = std::stoi(f[10]);
    r.status = f[11];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace softgrasp
