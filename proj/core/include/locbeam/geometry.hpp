// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The locbeam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

#include "locbeam/random.hpp"
#include "locbeam/types.hpp"

namespace locbeam {

/// True node layout plus the maximum location-error radii each side has
/// about the endpoints of every path.
///
/// Path 0 is the line-of-sight path; path m >= 1 bounces off reflector m-1
/// of `reflectors`. For the BS, the endpoint of path 0 is the UE; for the
/// UE it is the BS. `r_bs[m]` / `r_ue[m]` bound the error on endpoint m as
/// seen from that side. The BS position is known exactly, so r_ue[0] == 0.
struct Scenario {
  Point2 bs{0.0, 0.0};
  Point2 ue{100.0, 0.0};
  std::vector<Point2> reflectors;
  std::vector<double> r_bs;
  std::vector<double> r_ue;
  double r_ue_self = 0.0;

  std::size_t n_paths() const noexcept { return reflectors.size() + 1; }

  /// True location of the far endpoint of path m as seen from `observer`.
  Point2 endpoint(Side observer, std::size_t path) const;

  /// Radius bounding the error on endpoint `path` as seen from `observer`.
  double radius(Side observer, std::size_t path) const;

  /// Throws std::invalid_argument when sizes or radii are inconsistent.
  void validate() const;

  /// BS [0,0], reflectors [50,50] and [50,-50], UE [100,0];
  /// r_bs = [13, 11, 15], r_ue = [0, 18, 17], r_ue_self = 7 (meters).
  static Scenario reference();
};

/// One side's noisy picture of the scenario.
struct LocationEstimate {
  Side observer = Side::kBs;
  /// points[m]: estimated far endpoint of path m.
  std::vector<Point2> points;
  /// Observer's own position estimate (exact for the BS).
  Point2 self{0.0, 0.0};
};

/// Draws every endpoint uniformly from the disk of its radius around the
/// true location. The UE additionally perturbs its own position within
/// r_ue_self; the BS self position is exact.
LocationEstimate sample_location_estimate(const Scenario& scenario, Side observer, Rng& rng);

/// Direction of `to` seen from `from`, in [0, pi]:
/// pi/2 - arctan(dx/dy) on the principal arctan branch, with the dy == 0
/// limit giving 0 for dx > 0 and pi for dx < 0. Equivalent to the line
/// angle atan2(dy, dx) folded into [0, pi).
/// Throws DegenerateGeometryError when from == to.
double angle_from_to(const Point2& from, const Point2& to);

double distance(const Point2& from, const Point2& to);

/// Half-width of the angular window that covers an uncertainty disk of
/// radius `radius` around a point at `distance` and estimated direction
/// `angle_hat`:
///
///   arctan((d sin a + r) / (d cos a)) - a        when d cos a > 0 and >= 0,
///   arcsin(min(1, r / d))                          otherwise,
///
/// clamped to [0, pi]. Throws DegenerateGeometryError for distance <= 0.
double half_angle(double distance, double angle_hat, double radius);

/// Direction, range and half-angle of one path as computed by one side.
struct PathView {
  double angle = 0.0;
  double distance = 0.0;
  double half_angle = 0.0;
};

/// Per-path view from a location estimate, using the scenario radii of
/// the estimate's observer.
std::vector<PathView> path_views(const LocationEstimate& estimate, const Scenario& scenario);

}  // namespace locbeam
