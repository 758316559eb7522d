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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "locbeam/geometry.hpp"
#include "locbeam/random.hpp"

namespace {

using locbeam::kPi;
using locbeam::Point2;
using locbeam::Scenario;
using locbeam::Side;

Scenario zero_radius_reference() {
  Scenario s = Scenario::reference();
  std::fill(s.r_bs.begin(), s.r_bs.end(), 0.0);
  std::fill(s.r_ue.begin(), s.r_ue.end(), 0.0);
  s.r_ue_self = 0.0;
  return s;
}

}  // namespace

TEST(Scenario, ReferenceValues) {
  const Scenario s = Scenario::reference();
  EXPECT_EQ(s.n_paths(), 3u);
  EXPECT_EQ(s.endpoint(Side::kBs, 0), Point2(100, 0));
  EXPECT_EQ(s.endpoint(Side::kUe, 0), Point2(0, 0));
  EXPECT_EQ(s.endpoint(Side::kBs, 2), Point2(50, -50));
  EXPECT_EQ(s.radius(Side::kBs, 1), 11.0);
  EXPECT_EQ(s.radius(Side::kUe, 2), 17.0);
  EXPECT_NO_THROW(s.validate());
}

TEST(Scenario, ValidateRejectsInconsistentRadii) {
  Scenario s = Scenario::reference();
  s.r_bs.pop_back();
  EXPECT_THROW(s.validate(), std::invalid_argument);

  s = Scenario::reference();
  s.r_ue[1] = -1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);

  s = Scenario::reference();
  s.r_ue[0] = 2.0;  // the BS position is known exactly
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(SampleLocation, ZeroRadiiGiveTruth) {
  const Scenario s = zero_radius_reference();
  locbeam::Rng rng(5);
  for (Side side : {Side::kBs, Side::kUe}) {
    const auto est = locbeam::sample_location_estimate(s, side, rng);
    ASSERT_EQ(est.points.size(), 3u);
    for (std::size_t m = 0; m < 3; ++m) EXPECT_EQ(est.points[m], s.endpoint(side, m));
    EXPECT_EQ(est.self, side == Side::kBs ? s.bs : s.ue);
  }
}

TEST(SampleLocation, DiskOffsetStatistics) {
  const double r = 4.0;
  locbeam::Rng rng(17);
  double sum = 0.0;
  double max_norm = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double norm = locbeam::uniform_disk(r, rng).norm();
    sum += norm;
    max_norm = std::max(max_norm, norm);
  }
  EXPECT_LE(max_norm, r);
  EXPECT_NEAR(sum / n, 2.0 * r / 3.0, 0.02 * 2.0 * r / 3.0);
}

TEST(SampleLocation, OffsetsBoundedByRadii) {
  const Scenario s = Scenario::reference();
  locbeam::Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    for (Side side : {Side::kBs, Side::kUe}) {
      const auto est = locbeam::sample_location_estimate(s, side, rng);
      for (std::size_t m = 0; m < s.n_paths(); ++m) {
        EXPECT_LE((est.points[m] - s.endpoint(side, m)).norm(), s.radius(side, m) + 1e-12);
      }
      if (side == Side::kUe) {
        EXPECT_LE((est.self - s.ue).norm(), s.r_ue_self + 1e-12);
      } else {
        EXPECT_EQ(est.self, s.bs);
      }
    }
  }
}

TEST(SampleLocation, SameSeedSameEstimate) {
  const Scenario s = Scenario::reference();
  auto a = locbeam::block_stream(3, 8, locbeam::StreamPurpose::kLocation);
  auto b = locbeam::block_stream(3, 8, locbeam::StreamPurpose::kLocation);
  const auto ea = locbeam::sample_location_estimate(s, Side::kUe, a);
  const auto eb = locbeam::sample_location_estimate(s, Side::kUe, b);
  EXPECT_EQ(ea.points, eb.points);
  EXPECT_EQ(ea.self, eb.self);
}

TEST(AngleFromTo, ReferenceGeometry) {
  EXPECT_NEAR(locbeam::angle_from_to({0, 0}, {50, 50}), kPi / 4, 1e-15);
  EXPECT_NEAR(locbeam::angle_from_to({0, 0}, {50, -50}), 3 * kPi / 4, 1e-15);
  EXPECT_EQ(locbeam::angle_from_to({0, 0}, {100, 0}), 0.0);
  EXPECT_EQ(locbeam::angle_from_to({100, 0}, {0, 0}), kPi);
}

TEST(AngleFromTo, RejectsCoincidentPoints) {
  EXPECT_THROW(locbeam::angle_from_to({1, 2}, {1, 2}), locbeam::DegenerateGeometryError);
}

TEST(AngleFromTo, AlwaysInZeroPi) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> c(-100.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = locbeam::angle_from_to({c(rng), c(rng)}, {c(rng), c(rng)});
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, kPi);
  }
}

TEST(AngleFromTo, MatchesFoldedAtan2) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> c(-100.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const Point2 d(c(rng), c(rng));
    double want = std::atan2(d.y(), d.x());
    if (want < 0) want += kPi;
    EXPECT_NEAR(locbeam::angle_from_to({0, 0}, d), want, 1e-12);
  }
}

TEST(Distance, Examples) {
  EXPECT_NEAR(locbeam::distance({0, 0}, {50, 50}), 70.71067811865476, 1e-12);
  EXPECT_EQ(locbeam::distance({0, 0}, {0, 0}), 0.0);
  EXPECT_EQ(locbeam::distance({0, 0}, {100, 0}), 100.0);
}

TEST(HalfAngle, ReflectorOneExample) {
  EXPECT_NEAR(locbeam::half_angle(70.7107, kPi / 4, 11.0), 0.09877656470921925, 1e-9);
  EXPECT_NEAR(locbeam::half_angle(std::sqrt(5000.0), kPi / 4, 11.0), 0.09877659206766276, 1e-12);
}

TEST(HalfAngle, LosExample) {
  EXPECT_NEAR(locbeam::half_angle(100.0, 0.0, 13.0), 0.12927500404814307, 1e-12);
}

TEST(HalfAngle, ZeroRadius) {
  for (double a : {0.0, 0.5, kPi / 2, 2.0, kPi}) {
    EXPECT_EQ(locbeam::half_angle(30.0, a, 0.0), 0.0);
  }
}

TEST(HalfAngle, RejectsZeroDistance) {
  EXPECT_THROW(locbeam::half_angle(0.0, 0.3, 1.0), locbeam::DegenerateGeometryError);
}

TEST(HalfAngle, FallbackAtAndBeyondBroadside) {
  // cos(angle) <= 0: exact subtense of the disk.
  EXPECT_NEAR(locbeam::half_angle(50.0, 2.0, 10.0), std::asin(0.2), 1e-15);
  EXPECT_NEAR(locbeam::half_angle(50.0, 3.0, 80.0), kPi / 2, 1e-15);
}

TEST(HalfAngle, InRange) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> a(0.0, kPi);
  std::uniform_real_distribution<double> r(0.0, 300.0);
  for (int i = 0; i < 2000; ++i) {
    const double h = locbeam::half_angle(50.0, a(rng), r(rng));
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, kPi);
  }
}

TEST(HalfAngle, MonotoneInRadius) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> a(0.0, kPi);
  std::uniform_real_distribution<double> d(1.0, 200.0);
  for (int i = 0; i < 200; ++i) {
    const double dist = d(rng);
    const double ang = a(rng);
    double prev = 0.0;
    for (double radius = 0.0; radius < 2.0 * dist; radius += dist / 50.0) {
      const double h = locbeam::half_angle(dist, ang, radius);
      EXPECT_GE(h, prev) << "d=" << dist << " a=" << ang << " r=" << radius;
      prev = h;
    }
  }
}

// Containment of the true direction within the doubled-radius half angle.
// Holds where the boundary-point construction is accurate: estimated
// angle outside (pi/4, pi/2), disk clear of the y = 0 seam, r/d <= 1/4.
TEST(HalfAngle, ContainsTrueAngleWithDoubledRadius) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 5000) {
    const double dist = 20.0 + 180.0 * u(rng);
    const double psi = kPi * u(rng);
    const Point2 truth(dist * std::cos(psi), dist * std::sin(psi));
    const double radius = 0.25 * dist * u(rng);
    if (truth.y() <= radius) continue;
    const double rho = radius * std::sqrt(u(rng));
    const double t = 2 * kPi * u(rng);
    const Point2 est = truth + rho * Point2(std::cos(t), std::sin(t));
    const double a_hat = locbeam::angle_from_to({0, 0}, est);
    if (a_hat > kPi / 4 && a_hat < kPi / 2) continue;
    const double eps = locbeam::half_angle(dist, a_hat, 2 * radius);
    EXPECT_LE(std::abs(psi - a_hat), eps + 1e-12) << "d=" << dist << " psi=" << psi << " r=" << radius;
    ++checked;
  }
}

TEST(HalfAngle, ContainmentFailsJustBelowBroadside) {
  // Estimate at 1.4 rad, truth displaced perpendicular by r = 10.
  const double a_hat = 1.4;
  const Point2 est = 100.0 * Point2(std::cos(a_hat), std::sin(a_hat));
  const Point2 truth = est + 10.0 * Point2(-std::sin(a_hat), std::cos(a_hat));
  const double psi = locbeam::angle_from_to({0, 0}, truth);
  const double eps = locbeam::half_angle(truth.norm(), a_hat, 20.0);
  EXPECT_NEAR(psi - a_hat, 0.09966865249116208, 1e-12);
  EXPECT_LT(eps, psi - a_hat);
}

TEST(PathViews, ReferenceZeroRadiusUsesTrueGeometry) {
  const Scenario s = zero_radius_reference();
  locbeam::Rng rng(1);
  const auto bs = locbeam::sample_location_estimate(s, Side::kBs, rng);
  const auto views = locbeam::path_views(bs, s);
  ASSERT_EQ(views.size(), 3u);
  EXPECT_EQ(views[0].angle, 0.0);
  EXPECT_NEAR(views[1].angle, kPi / 4, 1e-15);
  EXPECT_NEAR(views[2].angle, 3 * kPi / 4, 1e-15);
  EXPECT_EQ(views[0].distance, 100.0);
  for (const auto& v : views) EXPECT_EQ(v.half_angle, 0.0);
}

TEST(PathViews, HalfAnglesUseObserverRadii) {
  Scenario s = Scenario::reference();
  s.r_ue_self = 0.0;
  for (auto& r : s.r_bs) r = 0.0;
  locbeam::Rng rng(1);
  const auto ue = locbeam::sample_location_estimate(s, Side::kUe, rng);
  const auto views = locbeam::path_views(ue, s);
  EXPECT_EQ(views[0].half_angle, 0.0);
  EXPECT_NEAR(views[1].half_angle,
              locbeam::half_angle(views[1].distance, views[1].angle, 18.0), 1e-15);
  EXPECT_NEAR(views[2].half_angle,
              locbeam::half_angle(views[2].distance, views[2].angle, 17.0), 1e-15);
}
