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

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace locbeam {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// 2D position in meters.
using Point2 = Eigen::Vector2d;

inline constexpr double kPi = std::numbers::pi;

/// Which end of the link a quantity belongs to. The BS transmits in the
/// downlink with the N_t-element array; the UE receives with N_r elements.
enum class Side { kBs, kUe };

std::string_view to_string(Side side) noexcept;

/// Two coincident points or a zero distance where a direction is required.
class DegenerateGeometryError : public std::domain_error {
 public:
  explicit DegenerateGeometryError(const std::string& what) : std::domain_error(what) {}
};

/// Fisher information that cannot be inverted at the requested conditioning.
class SingularInformationError : public std::runtime_error {
 public:
  explicit SingularInformationError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid experiment configuration (bad field, unknown key, out-of-range value).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace locbeam
