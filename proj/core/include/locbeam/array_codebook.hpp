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
#include <span>
#include <vector>

#include "locbeam/types.hpp"

namespace locbeam {

/// ULA array response for `n_antennas` half-wavelength-spaced elements.
///
/// Element k is exp(-i*pi*k*cos(angle)) / sqrt(N), k = 0..N-1, so the
/// vector always has unit norm. Only cos(angle) enters, hence any finite
/// angle is accepted. Throws std::invalid_argument when n_antennas == 0.
CVector steering_vector(double angle, std::size_t n_antennas);

/// Derivative-weighted array response: element k is k times element k of
/// steering_vector(angle, N). d/d(angle) steering_vector = i*pi*sin(angle)
/// times this vector.
CVector weighted_steering_vector(double angle, std::size_t n_antennas);

/// Grid codebook of steering vectors for one ULA.
///
/// Pointing angle j (0-based) is arccos(1 - 2j/(N-1)): uniform in cos over
/// [-1, 1], so the grid runs from exactly 0 to exactly pi and is dense
/// near endfire in angle while uniform in the array's spatial frequency.
class Codebook {
 public:
  /// Throws std::invalid_argument for n_antennas < 2.
  explicit Codebook(std::size_t n_antennas);

  std::size_t size() const noexcept { return angles_.size(); }
  std::size_t n_antennas() const noexcept { return angles_.size(); }

  double angle(std::size_t j) const { return angles_.at(j); }
  std::span<const double> pointing_angles() const noexcept { return angles_; }

  /// N x N matrix whose column j is beam j.
  const CMatrix& beams() const noexcept { return beams_; }
  auto beam(std::size_t j) const { return beams_.col(static_cast<Eigen::Index>(j)); }

 private:
  std::vector<double> angles_;
  CMatrix beams_;
};

Codebook make_codebook(std::size_t n_antennas);

/// Index of the beam with the smallest squared Euclidean distance to
/// steering_vector(angle, N). Ties go to the lowest index.
///
/// For a ULA, ||b_j - a||^2 = 2 - 2 Re(b_j^H a) and Re(b_j^H a) depends only
/// on |cos(angle_j) - cos(angle)|, so this is a distance in spatial
/// frequency, not in angle.
std::size_t nearest_beam(const Codebook& codebook, double angle);

}  // namespace locbeam
