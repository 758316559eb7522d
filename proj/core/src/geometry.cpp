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

#include "locbeam/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace locbeam {

Point2 Scenario::endpoint(Side observer, std::size_t path) const {
  if (path == 0) {
    return observer == Side::kBs ? ue : bs;
  }
  return reflectors.at(path - 1);
}

double Scenario::radius(Side observer, std::size_t path) const {
  return observer == Side::kBs ? r_bs.at(path) : r_ue.at(path);
}

void Scenario::validate() const {
  const std::size_t m = n_paths();
  if (r_bs.size() != m || r_ue.size() != m) {
    throw std::invalid_argument("Scenario: r_bs and r_ue need one radius per path (" +
                                std::to_string(m) + ")");
  }
  const auto negative = [](double r) { return !(r >= 0.0) || !std::isfinite(r); };
  if (std::any_of(r_bs.begin(), r_bs.end(), negative) ||
      std::any_of(r_ue.begin(), r_ue.end(), negative) || negative(r_ue_self)) {
    throw std::invalid_argument("Scenario: radii must be finite and >= 0");
  }
  if (r_ue[0] != 0.0) {
    throw std::invalid_argument("Scenario: r_ue[0] must be 0 (BS position is known)");
  }
  for (std::size_t p = 0; p < m; ++p) {
    if (endpoint(Side::kBs, p) == bs || endpoint(Side::kUe, p) == ue) {
      throw std::invalid_argument("Scenario: path " + std::to_string(p) +
                                  " endpoint coincides with a node");
    }
  }
}

Scenario Scenario::reference() {
  Scenario s;
  s.bs = {0.0, 0.0};
  s.ue = {100.0, 0.0};
  s.reflectors = {{50.0, 50.0}, {50.0, -50.0}};
  s.r_bs = {13.0, 11.0, 15.0};
  s.r_ue = {0.0, 18.0, 17.0};
  s.r_ue_self = 7.0;
  return s;
}

LocationEstimate sample_location_estimate(const Scenario& scenario, Side observer, Rng& rng) {
  LocationEstimate est;
  est.observer = observer;
  est.points.reserve(scenario.n_paths());
  for (std::size_t m = 0; m < scenario.n_paths(); ++m) {
    est.points.push_back(scenario.endpoint(observer, m) +
                         uniform_disk(scenario.radius(observer, m), rng));
  }
  if (observer == Side::kBs) {
    est.self = scenario.bs;
  } else {
    est.self = scenario.ue + uniform_disk(scenario.r_ue_self, rng);
  }
  return est;
}

double angle_from_to(const Point2& from, const Point2& to) {
  const Point2 d = to - from;
  if (d.x() == 0.0 && d.y() == 0.0) {
    throw DegenerateGeometryError("angle_from_to: points coincide");
  }
  double arctan_term = 0.0;
  if (d.y() == 0.0) {
    arctan_term = d.x() > 0.0 ? kPi / 2.0 : -kPi / 2.0;
  } else {
    arctan_term = std::atan(d.x() / d.y());
  }
  return kPi / 2.0 - arctan_term;
}

double distance(const Point2& from, const Point2& to) { return (to - from).norm(); }

double half_angle(double distance, double angle_hat, double radius) {
  if (!(distance > 0.0)) {
    throw DegenerateGeometryError("half_angle: distance must be > 0");
  }
  if (radius <= 0.0) {
    return 0.0;
  }
  const double x = distance * std::cos(angle_hat);
  if (x > 0.0) {
    const double eps = std::atan((distance * std::sin(angle_hat) + radius) / x) - angle_hat;
    if (eps >= 0.0) {
      return std::min(eps, kPi);
    }
  }
  // Exact angular radius of the disk; covers the region where the
  // boundary-point construction breaks down (cos <= 0 or negative result).
  return std::clamp(std::asin(std::min(1.0, radius / distance)), 0.0, kPi);
}

std::vector<PathView> path_views(const LocationEstimate& estimate, const Scenario& scenario) {
  std::vector<PathView> views;
  views.reserve(estimate.points.size());
  for (std::size_t m = 0; m < estimate.points.size(); ++m) {
    PathView v;
    v.angle = angle_from_to(estimate.self, estimate.points[m]);
    v.distance = distance(estimate.self, estimate.points[m]);
    v.half_angle = half_angle(v.distance, v.angle, scenario.radius(estimate.observer, m));
    views.push_back(v);
  }
  return views;
}

}  // namespace locbeam
