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

#ifndef SOFTGRASP_GEOMETRY_HPP_
#define SOFTGRASP_GEOMETRY_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace softgrasp {

using Vec2 = Eigen::Vector2d;

/// In-plane rigid pose: position plus heading.
struct Pose2 {
  Vec2 p{0.0, 0.0};
  double theta{0.0};
};

inline Eigen::Matrix2d rot(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2d m;
  m << c, -s, s, c;
  return m;
}

inline double cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Segment with a radius; a == b gives a disk.
struct Capsule {
  Vec2 a;
  Vec2 b;
  double radius{0.0};
};

/// Closest point on segment [a,b] to p; t is the segment parameter in [0,1].
Vec2 closest_point_on_segment(const Vec2& a, const Vec2& b, const Vec2& p,
                              double* t = nullptr);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

/// Minimum distance between two segments (0 if they intersect).
double segment_segment_distance(const Vec2& a1, const Vec2& b1,
                                const Vec2& a2, const Vec2& b2);

/// Surface-to-surface distance between two capsules (negative when
/// the surfaces overlap).
inline double capsule_capsule_distance(const Capsule& c1, const Capsule& c2) {
  return segment_segment_distance(c1.a, c1.b, c2.a, c2.b) - c1.radius -
         c2.radius;
}

/// Oriented rectangle (half extents along its own axes).
struct Obb {
  Pose2 pose;
  Vec2 half{0.0, 0.0};

  Vec2 to_local(const Vec2& world) const {
    return rot(-pose.theta) * (world - pose.p);
  }
  Vec2 to_world(const Vec2& local) const { return pose.p + rot(pose.theta) * local; }
  /// Corner k in CCW order starting from (+x,+y).
  Vec2 corner(int k) const;
};

/// Local curvature class of the object feature a contact was made against.
enum class SurfaceFeature { Circle, Face, Corner };

/// One capsule-vs-object overlap.
struct Overlap {
  bool hit{false};
  double penetration{0.0};  // surface overlap depth, m
  Vec2 point{0.0, 0.0};     // representative contact location
  Vec2 normal{0.0, 0.0};    // unit, from robot surface into the object
  SurfaceFeature feature{SurfaceFeature::Circle};
  double feature_radius{0.0};  // object-side curvature radius (Circle only)
};

Overlap capsule_circle_overlap(const Capsule& cap, const Vec2& center,
                               double radius);
Overlap capsule_obb_overlap(const Capsule& cap, const Obb& box);

/// Area of the circular segment of depth d on a circle of radius R
/// (the cross-section a flat indenter of depth d removes).
double circular_segment_area(double R, double d);

/// In-plane chord length of the contact lens at penetration `pen` between a
/// capsule of radius R and an object feature (circle of radius r, flat face,
/// or corner).
double lens_chord(double R, double pen, SurfaceFeature feature,
                  double feature_radius);

}  // namespace softgrasp

#endif  // SOFTGRASP_GEOMETRY_HPP_
