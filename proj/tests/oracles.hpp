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
//
// Independent reference computations used by the test suites. These stay
// deliberately naive (dense grids, quadrature, homogeneous-transform
// composition) so they exercise different code paths than the library.

#ifndef SOFTGRASP_TESTS_ORACLES_HPP_
#define SOFTGRASP_TESTS_ORACLES_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <functional>

namespace softgrasp::oracles {

/// Planar chain tip via 3x3 homogeneous transform composition.
inline Eigen::Vector2d chain_tip_homogeneous(const Eigen::Vector2d& base,
                                             double base_angle,
                                             const std::array<double, 3>& q,
                                             const std::array<double, 3>& len,
                                             double spin) {
  auto trans = [](double x, double y) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 2) = x;
    m(1, 2) = y;
    return m;
  };
  auto rotz = [](double a) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 0) = std::cos(a);
    m(0, 1) = -std::sin(a);
    m(1, 0) = std::sin(a);
    m(1, 1) = std::cos(a);
    return m;
  };
  Eigen::Matrix3d T = trans(base.x(), base.y()) * rotz(base_angle);
  for (int k = 0; k < 3; ++k) {
    T = T * rotz(spin * q[static_cast<size_t>(k)]) * trans(len[static_cast<size_t>(k)], 0.0);
  }
  return T.block<2, 1>(0, 2);
}

/// Min distance between two segments by dense parameter sampling plus a
/// golden-section refinement along the first segment.
inline double segment_distance_sampled(const Eigen::Vector2d& a1,
                                       const Eigen::Vector2d& b1,
                                       const Eigen::Vector2d& a2,
                                       const Eigen::Vector2d& b2) {
  auto point_to_seg = [](const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                         const Eigen::Vector2d& b) {
    double lo = 0.0, hi = 1.0;
    auto f = [&](double t) { return (a + t * (b - a) - p).norm(); };
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (f(m1) < f(m2))
        hi = m2;
      else
        lo = m1;
    }
    return f(0.5 * (lo + hi));
  };
  double best = std::numeric_limits<double>::infinity();
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    best = std::min(best, point_to_seg(a1 + t * (b1 - a1), a2, b2));
  }
  return best;
}

/// Area of the lens region { (x,y) : x^2 + y^2 <= R^2, y >= R - d } by
/// numeric quadrature. The slice-width integral over y has a sqrt endpoint
/// singularity, so integrate in u = sqrt(R - y), where the integrand
/// 4 u^2 sqrt(2R - u^2) is smooth and composite Simpson converges fast.
inline double segment_area_quadrature(double R, double d, int n = 4000) {
  if (d <= 0.0) return 0.0;
  d = std::min(d, 2.0 * R);
  const double b = std::sqrt(d);
  auto f = [R](double u) {
    return 4.0 * u * u * std::sqrt(std::max(0.0, 2.0 * R - u * u));
  };
  if (n % 2 == 1) ++n;
  const double h = b / n;
  double sum = f(0.0) + f(b);
  for (int i = 1; i < n; ++i) sum += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// Dense grid argmin of a 2-D energy over a window.
inline Eigen::Vector2d grid_argmin(
    const std::function<double(const Eigen::Vector2d&)>& energy,
    const Eigen::Vector2d& center, double half_window, int n) {
  double best = std::numeric_limits<double>::infinity();
  Eigen::Vector2d arg = center;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const Eigen::Vector2d p =
          center + Eigen::Vector2d(-half_window + 2.0 * half_window * i / n,
                                   -half_window + 2.0 * half_window * j / n);
      const double e = energy(p);
      if (e < best) {
        best = e;
        arg = p;
      }
    }
  }
  return arg;
}

}  // namespace softgrasp::oracles

#endif  // SOFTGRASP_TESTS_ORACLES_HPP_
