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

#include "softgrasp/experiment.hpp"

namespace softgrasp {

namespace {

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Panel {
  double x0, y0, w, h;       // pixel box
  double tmin, tmax;         // data x range
  double vmin_, vmax_;       // data y range
  double px(double t) const { return x0 + (t - tmin) / (tmax - tmin) * w; }
  double py(double v) const {
    return y0 + h - (v - vmin_) / (vmax_ - vmin_) * h;
  }
};

void panel_frame(std::string* svg, const Panel& p, const std::string& title,
                 const std::string& ylabel) {
  *svg += fmt::format(
      "<rect x='{}' y='{}' width='{}' height='{}' fill='none' stroke='#444'/>\n",
      format_double(p.x0), format_double(p.y0), format_double(p.w),
      format_double(p.h));
  *svg += fmt::format(
      "<text x='{}' y='{}' font-size='12' fill='#222'>{}</text>\n",
      format_double(p.x0), format_double(p.y0 - 6.0), title);
  *svg += fmt::format(
      "<text x='{}' y='{}' font-size='10' fill='#555'>{}</text>\n",
      format_double(p.x0 + 4.0), format_double(p.y0 + 12.0), ylabel);
  for (const double f : {0.0, 0.5, 1.0}) {
    const double v = p.vmin_ + f * (p.vmax_ - p.vmin_);
    *svg += fmt::format(
        "<text x='{}' y='{}' font-size='9' fill='#777' text-anchor='end'>{}"
        "</text>\n",
        format_double(p.x0 - 4.0), format_double(p.py(v) + 3.0),
        format_double(v));
    const double t = p.tmin + f * (p.tmax - p.tmin);
    *svg += fmt::format(
        "<text x='{}' y='{}' font-size='9' fill='#777' text-anchor='middle'>{}"
        "</text>\n",
        format_double(p.px(t)), format_double(p.y0 + p.h + 12.0),
        format_double(t));
  }
}

void polyline(std::string* svg, const Panel& p, const std::vector<double>& t,
              const std::vector<double>& v, const char* color) {
  std::string pts;
  for (size_t i = 0; i < t.size(); ++i) {
    pts += fmt::format("{},{} ", format_double(p.px(t[i])),
                       format_double(p.py(std::clamp(v[i], p.vmin_, p.vmax_))));
  }
  *svg += fmt::format(
      "<polyline points='{}' fill='none' stroke='{}' stroke-width='1.2'/>\n",
      pts, color);
}

}  // namespace

void plot_timeseries(const std::filesystem::path& trace_csv,
                     const std::filesystem::path& out_svg,
                     double threshold_hpa) {
  const auto rows = read_trace_csv(trace_csv);

  std::vector<double> t;
  std::array<std::vector<double>, 2 * kSensorsPerArm> dp;
  std::array<std::vector<double>, 2 * kNumJoints> qd;
  std::vector<size_t> stage_changes;
  int prev_stage = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    t.push_back(r.t);
    for (size_t s = 0; s < dp.size(); ++s) dp[s].push_back(r.dp[s]);
    for (size_t j = 0; j < qd.size(); ++j) qd[j].push_back(r.qdot[j]);
    if (i > 0 && r.stage != prev_stage) stage_changes.push_back(i);
    prev_stage = r.stage;
  }

  double dp_max = threshold_hpa * 1.5, dp_min = 0.0;
  for (const auto& series : dp)
    for (double v : series) dp_max = std::max(dp_max, v);
  double qd_min = -0.6, qd_max = 0.1;

  const double tmin = t.empty() ? 0.0 : t.front();
  const double tmax = t.empty() || t.back() == tmin ? tmin + 1.0 : t.back();

  Panel top{60, 30, 700, 180, tmin, tmax, dp_min, dp_max * 1.05};
  Panel bot{60, 260, 700, 180, tmin, tmax, qd_min, qd_max};

  std::string svg =
      "<svg xmlns='http://www.w3.org/2000/svg' width='800' height='490' "
      "font-family='sans-serif'>\n<rect width='800' height='490' "
      "fill='white'/>\n";

  panel_frame(&svg, top, std::string("sensor pressure deviation: ") +
                             trace_csv.stem().string(),
              "dP (hPa)");
  static const char* const kSensorNames[] = {"L0", "L1", "L2", "LP",
                                             "R0", "R1", "R2", "RP"};
  for (size_t s = 0; s < dp.size(); ++s) {
    polyline(&svg, top, t, dp[s], kPalette[s % 8]);
    svg += fmt::format(
        "<text x='{}' y='{}' font-size='9' fill='{}'>{}</text>\n",
        format_double(top.x0 + top.w + 6.0),
        format_double(top.y0 + 12.0 * (s + 1)), kPalette[s % 8], kSensorNames[s]);
  }
  // Threshold line.
  svg += fmt::format(
      "<line x1='{}' y1='{}' x2='{}' y2='{}' stroke='#000' stroke-width='0.8' "
      "stroke-dasharray='5,3'/>\n",
      format_double(top.px(tmin)), format_double(top.py(threshold_hpa)),
      format_double(top.px(tmax)), format_double(top.py(threshold_hpa)));

  panel_frame(&svg, bot, "commanded joint velocities", "qdot (rad/s)");
  static const char* const kJointNames[] = {"L j0", "L j1", "L j2",
                                            "R j0", "R j1", "R j2"};
  for (size_t j = 0; j < qd.size(); ++j) {
    polyline(&svg, bot, t, qd[j], kPalette[j % 8]);
    svg += fmt::format(
        "<text x='{}' y='{}' font-size='9' fill='{}'>{}</text>\n",
        format_double(bot.x0 + bot.w + 6.0),
        format_double(bot.y0 + 12.0 * (j + 1)), kPalette[j % 8], kJointNames[j]);
  }

  // Stage transitions across both panels.
  for (size_t idx : stage_changes) {
    const double x = top.px(t[idx]);
    for (const Panel* p : {&top, &bot}) {
      svg += fmt::format(
          "<line x1='{}' y1='{}' x2='{}' y2='{}' stroke='#999' "
          "stroke-width='0.8' stroke-dasharray='2,2'/>\n",
          format_double(x), format_double(p->y0), format_double(x),
          format_double(p->y0 + p->h));
    }
  }

  svg += "</svg>\n";
  std::ofstream out(out_svg, std::ios::binary);
  out << svg;
}

void plot_outcome_grid(const std::filesystem::path& summary_csv,
                       const std::filesystem::path& out_svg) {
  const auto rows = read_summary_csv(summary_csv);

  std::vector<std::string> objects;
  std::vector<std::string> row_keys;  // "mode/pose/trial"
  for (const auto& r : rows) {
    if (std::find(objects.begin(), objects.end(), r.object) == objects.end())
      objects.push_back(r.object);
    const std::string key =
        fmt::format("{} p{} t{}", r.mode, format_double(r.pose_deg), r.trial);
    if (std::find(row_keys.begin(), row_keys.end(), key) == row_keys.end())
      row_keys.push_back(key);
  }

  const double cell_w = 110, cell_h = 34, left = 150, top = 50;
  const double width = left + cell_w * objects.size() + 40;
  const double height = top + cell_h * row_keys.size() + 40;

  std::string svg = fmt::format(
      "<svg xmlns='http://www.w3.org/2000/svg' width='{}' height='{}' "
      "font-family='sans-serif'>\n<rect width='{}' height='{}' fill='white'/>\n",
      format_double(width), format_double(height), format_double(width),
      format_double(height));
  svg += fmt::format(
      "<text x='10' y='20' font-size='13' fill='#222'>grasp outcomes "
      "(cell: outcome, added weight held)</text>\n");

  for (size_t c = 0; c < objects.size(); ++c) {
    svg += fmt::format(
        "<text x='{}' y='{}' font-size='11' fill='#222' "
        "text-anchor='middle'>{}</text>\n",
        format_double(left + cell_w * (c + 0.5)), format_double(top - 8.0),
        objects[c]);
  }
  for (size_t rk = 0; rk < row_keys.size(); ++rk) {
    svg += fmt::format(
        "<text x='{}' y='{}' font-size='10' fill='#222' text-anchor='end'>{}"
        "</text>\n",
        format_double(left - 6.0), format_double(top + cell_h * (rk + 0.62)),
        row_keys[rk]);
  }

  for (const auto& r : rows) {
    const auto ci = static_cast<size_t>(
        std::find(objects.begin(), objects.end(), r.object) - objects.begin());
    const std::string key =
        fmt::format("{} p{} t{}", r.mode, format_double(r.pose_deg), r.trial);
    const auto ri = static_cast<size_t>(
        std::find(row_keys.begin(), row_keys.end(), key) - row_keys.begin());
    const char* fill = r.outcome == "success"        ? "#6fbf73"
                       : r.outcome == "displacement" ? "#ffc04d"
                                                     : "#e57373";
    const double x = left + cell_w * ci;
    const double y = top + cell_h * ri;
    const double added_lb =
        std::max(0.0, r.max_weight_held_kg - r.object_mass_kg) / kKgPerPound;
    svg += fmt::format(
        "<rect x='{}' y='{}' width='{}' height='{}' fill='{}' "
        "stroke='#fff'/>\n",
        format_double(x), format_double(y), format_double(cell_w),
        format_double(cell_h), fill);
    svg += fmt::format(
        "<text x='{}' y='{}' font-size='10' fill='#222' "
        "text-anchor='middle'>{} +{} lb</text>\n",
        format_double(x + cell_w / 2.0), format_double(y + cell_h * 0.62),
        r.outcome, format_double(added_lb));
  }

  svg += "</svg>\n";
  std::ofstream out(out_svg, std::ios::binary);
  out << svg;
}

void render_scene_svg(const Scene& scene, const ContactSet& contacts,
                      const std::filesystem::path& out_svg) {
  // World window [-0.6, 0.6] x [-0.15, 0.95] mapped to 720x660 px.
  const double sx = 600.0, x_off = 360.0, y_top = 0.95;
  auto X = [&](double x) { return format_double(x_off + sx * x); };
  auto Y = [&](double y) { return format_double((y_top - y) * sx); };

  std::string svg =
      "<svg xmlns='http://www.w3.org/2000/svg' width='720' height='660' "
      "font-family='sans-serif'>\n<rect width='720' height='660' "
      "fill='white'/>\n";

  auto capsule = [&](const Capsule& c, const char* color) {
    svg += fmt::format(
        "<line x1='{}' y1='{}' x2='{}' y2='{}' stroke='{}' stroke-width='{}' "
        "stroke-linecap='round' opacity='0.55'/>\n",
        X(c.a.x()), Y(c.a.y()), X(c.b.x()), Y(c.b.y()), color,
        format_double(2.0 * c.radius * sx));
    svg += fmt::format(
        "<line x1='{}' y1='{}' x2='{}' y2='{}' stroke='#333' stroke-width='1'/>\n",
        X(c.a.x()), Y(c.a.y()), X(c.b.x()), Y(c.b.y()));
  };

  for (const auto& c : scene.chest.column_capsules()) capsule(c, "#b0bec5");
  for (const auto& c : arm_capsules(scene.left)) capsule(c, "#90caf9");
  for (const auto& c : arm_capsules(scene.right)) capsule(c, "#a5d6a7");

  if (scene.object.shape == Manipuland::Shape::Circle) {
    svg += fmt::format(
        "<circle cx='{}' cy='{}' r='{}' fill='#ffcc80' stroke='#e65100' "
        "opacity='0.8'/>\n",
        X(scene.object.pose.p.x()), Y(scene.object.pose.p.y()),
        format_double(scene.object.effective_radius(scene.slip) * sx));
  } else {
    const Obb box = scene.object.obb(scene.slip);
    std::string pts;
    for (int k = 0; k < 4; ++k) {
      const Vec2 c = box.corner(k);
      pts += fmt::format("{},{} ", X(c.x()), Y(c.y()));
    }
    svg += fmt::format(
        "<polygon points='{}' fill='#ffcc80' stroke='#e65100' opacity='0.8'/>\n",
        pts);
  }

  for (const auto& cp : contacts.points) {
    svg += fmt::format(
        "<circle cx='{}' cy='{}' r='3' fill='#d32f2f'/>\n"
        "<text x='{}' y='{}' font-size='9' fill='#d32f2f'>{} {}N</text>\n",
        X(cp.position.x()), Y(cp.position.y()), X(cp.position.x() + 0.01),
        Y(cp.position.y() + 0.01), cp.source.label(),
        format_double(std::round(cp.normal_force * 10.0) / 10.0));
  }

  svg += "</svg>\n";
  std::ofstream out(out_svg, std::ios::binary);
  out << svg;
}

}  // namespace softgrasp
