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

#include "softgrasp/geometry.hpp"

#include <algorithm>
#include <array>

namespace softgrasp {

Vec2 closest_point_on_segment(const Vec2& a, const Vec2& b, const Vec2& p,
                              double* t_out) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  }
  if (t_out) *t_out = t;
  return a + t * ab;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  return (p - closest_point_on_segment(a, b, p)).norm();
}

namespace {

bool segments_intersect(const Vec2& a1, const Vec2& b1, const Vec2& a2,
                        const Vec2& b2) {
  const Vec2 d1 = b1 - a1, d2 = b2 - a2;
  const double denom = cross2(d1, d2);
  if (denom == 0.0) return false;  // parallel; distance handles touching
  const double t = cross2(a2 - a1, d2) / denom;
  const double u = cross2(a2 - a1, d1) / denom;
  return t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0;
}

}  // namespace

double segment_segment_distance(const Vec2& a1, const Vec2& b1,
                                const Vec2& a2, const Vec2& b2) {
  if (segments_intersect(a1, b1, a2, b2)) return 0.0;
  double d = point_segment_distance(a1, a2, b2);
  d = std::min(d, point_segment_distance(b1, a2, b2));
  d = std::min(d, point_segment_distance(a2, a1, b1));
  d = std::min(d, point_segment_distance(b2, a1, b1));
  return d;
}

Vec2 Obb::corner(int k) const {
  static const std::array<Vec2, 4> signs = {Vec2{1, 1}, Vec2{-1, 1},
                                            Vec2{-1, -1}, Vec2{1, -1}};
  const Vec2& s = signs[static_cast<size_t>(k & 3)];
  return to_world(Vec2(s.x() * half.x(), s.y() * half.y()));
}

Overlap capsule_circle_overlap(const Capsule& cap, const Vec2& center,
                               double radius) {
  Overlap o;
  const Vec2 closest = closest_point_on_segment(cap.a, cap.b, center);
  const Vec2 delta = center - closest;
  const double dist = delta.norm();
  const double pen = cap.radius + radius - dist;
  if (pen <= 0.0 || dist == 0.0) return o;
  o.hit = true;
  o.penetration = pen;
  o.normal = delta / dist;
  // Midway between the two overlapping surfaces.
  o.point = closest + o.normal * (cap.radius - 0.5 * pen);
  o.feature = SurfaceFeature::Circle;
  o.feature_radius = radius;
  return o;
}

namespace {

// Distance from a local-frame point to the boundary of an axis-aligned box,
// negative inside. `normal` is the outward direction at the closest boundary
// feature.
double point_box_signed_distance(const Vec2& p, const Vec2& half,
                                 Vec2* normal, bool* on_corner) {
  const double dx = std::abs(p.x()) - half.x();
  const double dy = std::abs(p.y()) - half.y();
  const double sx = p.x() >= 0.0 ? 1.0 : -1.0;
  const double sy = p.y() >= 0.0 ? 1.0 : -1.0;
  if (dx <= 0.0 && dy <= 0.0) {
    // Inside: closest face.
    *on_corner = false;
    if (dx > dy) {
      *normal = Vec2(sx, 0.0);
      return dx;
    }
    *normal = Vec2(0.0, sy);
    return dy;
  }
  if (dx > 0.0 && dy > 0.0) {
    *on_corner = true;
    Vec2 v(sx * dx, sy * dy);
    const double d = v.norm();
    *normal = v / d;
    return d;
  }
  *on_corner = false;
  if (dx > 0.0) {
    *normal = Vec2(sx, 0.0);
    return dx;
  }
  *normal = Vec2(0.0, sy);
  return dy;
}

}  // namespace

Overlap capsule_obb_overlap(const Capsule& cap, const Obb& box) {
  Overlap o;
  const Vec2 a = box.to_local(cap.a);
  const Vec2 b = box.to_local(cap.b);

  // Closest point on the local segment to the box: sample the segment's
  // closest approach against each edge plus endpoint containment.
  double best = std::numeric_limits<double>::infinity();
  Vec2 best_pt_seg;   // on segment, local frame
  Vec2 best_normal;   // outward from box, local frame
  bool best_corner = false;

  auto consider = [&](const Vec2& pt_on_seg) {
    Vec2 n;
    bool corner = false;
    const double d = point_box_signed_distance(pt_on_seg, box.half, &n, &corner);
    if (d < best) {
      best = d;
      best_pt_seg = pt_on_seg;
      best_normal = n;
      best_corner = corner;
    }
  };

  consider(a);
  consider(b);
  // Project each box corner onto the segment; the closest segment point to a
  // corner is a candidate for the overall closest pair.
  for (int k = 0; k < 4; ++k) {
    static const std::array<Vec2, 4> signs = {Vec2{1, 1}, Vec2{-1, 1},
                                              Vec2{-1, -1}, Vec2{1, -1}};
    const Vec2 c(signs[static_cast<size_t>(k)].x() * box.half.x(),
                 signs[static_cast<size_t>(k)].y() * box.half.y());
    consider(closest_point_on_segment(a, b, c));
  }
  // Segment crossing a face plane: the per-axis clamped crossings.
  const Vec2 d = b - a;
  for (int axis = 0; axis < 2; ++axis) {
    if (d[axis] == 0.0) continue;
    for (double side : {-1.0, 1.0}) {
      const double t = (side * box.half[axis] - a[axis]) / d[axis];
      if (t > 0.0 && t < 1.0) consider(a + t * d);
    }
  }

  const double pen = cap.radius - best;
  if (pen <= 0.0) return o;

  o.hit = true;
  o.penetration = pen;
  const Vec2 n_world = rot(box.pose.theta) * best_normal;
  o.normal = -n_world;  // from robot surface into the object
  const Vec2 seg_world = box.to_world(best_pt_seg);
  o.point = seg_world + n_world * (best >= 0.0 ? 0.5 * (best + cap.radius)
                                               : cap.radius * 0.5);
  o.feature = best_corner ? SurfaceFeature::Corner : SurfaceFeature::Face;
  o.feature_radius = 0.0;
  return o;
}

double circular_segment_area(double R, double d) {
  if (d <= 0.0 || R <= 0.0) return 0.0;
  d = std::min(d, 2.0 * R);
  const double c = std::clamp(1.0 - d / R, -1.0, 1.0);
  return R * R * std::acos(c) - (R - d) * std::sqrt(std::max(0.0, 2.0 * R * d - d * d));
}

double lens_chord(double R, double pen, SurfaceFeature feature,
                  double feature_radius) {
  if (pen <= 0.0) return 0.0;
  switch (feature) {
    case SurfaceFeature::Face: {
      const double d = std::min(pen, R);
      return 2.0 * std::sqrt(std::max(0.0, d * (2.0 * R - d)));
    }
    case SurfaceFeature::Corner:
      // Wedge poking into the surface: the footprint grows like the depth.
      return 2.0 * pen;
    case SurfaceFeature::Circle: {
      const double r = feature_radius;
      const double D = R + r - pen;
      if (D <= std::abs(R - r)) {
        // One circle swallowed the other; footprint caps at the smaller.
        return 2.0 * std::min(R, r);
      }
      const double x = (D * D + R * R - r * r) / (2.0 * D);
      return 2.0 * std::sqrt(std::max(0.0, R * R - x * x));
    }
  }
  return 0.0;
}

}  // namespace softgrasp
