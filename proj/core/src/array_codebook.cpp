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

#include "locbeam/array_codebook.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace locbeam {

std::string_view to_string(Side side) noexcept {
  return side == Side::kBs ? "bs" : "ue";
}

CVector steering_vector(double angle, std::size_t n_antennas) {
  if (n_antennas == 0) {
    throw std::invalid_argument("steering_vector: n_antennas must be >= 1");
  }
  const auto n = static_cast<Eigen::Index>(n_antennas);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
  const double c = std::cos(angle);
  CVector a(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    a(k) = scale * std::polar(1.0, -kPi * static_cast<double>(k) * c);
  }
  return a;
}

CVector weighted_steering_vector(double angle, std::size_t n_antennas) {
  CVector a = steering_vector(angle, n_antennas);
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    a(k) *= static_cast<double>(k);
  }
  return a;
}

Codebook::Codebook(std::size_t n_antennas) {
  if (n_antennas < 2) {
    throw std::invalid_argument("Codebook: n_antennas must be >= 2");
  }
  const auto n = static_cast<Eigen::Index>(n_antennas);
  angles_.resize(n_antennas);
  beams_.resize(n, n);
  const double span = static_cast<double>(n_antennas - 1);
  for (std::size_t j = 0; j < n_antennas; ++j) {
    angles_[j] = std::acos(1.0 - 2.0 * static_cast<double>(j) / span);
    beams_.col(static_cast<Eigen::Index>(j)) = steering_vector(angles_[j], n_antennas);
  }
}

Codebook make_codebook(std::size_t n_antennas) { return Codebook(n_antennas); }

std::size_t nearest_beam(const Codebook& codebook, double angle) {
  const CVector target = steering_vector(angle, codebook.n_antennas());
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < codebook.size(); ++j) {
    const double dist = (codebook.beam(j) - target).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = j;
    }
  }
  return best;
}

}  // namespace locbeam
