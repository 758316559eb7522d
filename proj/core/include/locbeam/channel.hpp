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

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "locbeam/geometry.hpp"
#include "locbeam/random.hpp"
#include "locbeam/types.hpp"

namespace locbeam {

/// Angles and gains of an M-path narrowband channel.
struct ChannelParams {
  std::vector<double> aod;      ///< departure angle at the BS, radians
  std::vector<double> aoa;      ///< arrival angle at the UE, radians
  std::vector<Complex> gains;   ///< complex path gains
  std::size_t n_tx = 0;
  std::size_t n_rx = 0;

  std::size_t n_paths() const noexcept { return gains.size(); }
  void validate() const;
};

/// LOS gain variance 1, each NLOS path 0.1 (-10 dB reflection loss).
std::vector<double> default_gain_variances(std::size_t n_paths);

/// Angles from true geometry, gains drawn CN(0, gain_variances[m]).
ChannelParams true_params_from_scenario(const Scenario& scenario, Rng& rng,
                                        std::span<const double> gain_variances,
                                        std::size_t n_tx, std::size_t n_rx);

/// Dense downlink channel
///   H = sqrt(N_t N_r) * sum_m gains[m] * a_r(aoa[m]) * a_t(aod[m])^H
/// of size N_r x N_t. Immutable once built.
class ChannelInstance {
 public:
  explicit ChannelInstance(ChannelParams params);

  const ChannelParams& params() const noexcept { return params_; }
  const CMatrix& matrix() const noexcept { return matrix_; }
  std::size_t n_tx() const noexcept { return params_.n_tx; }
  std::size_t n_rx() const noexcept { return params_.n_rx; }

 private:
  ChannelParams params_;
  CMatrix matrix_;
};

ChannelInstance build_channel(ChannelParams params);

/// log2(1 + snr * |u^H H v|^2); throws std::invalid_argument on size mismatch
/// or negative snr.
double downlink_rate(const CVector& u, const CVector& v, const CMatrix& h, double es_over_sigma2);
double downlink_rate(const CVector& u, const CVector& v, const ChannelInstance& h,
                     double es_over_sigma2);

/// Reverse link over H^T: log2(1 + snr * |v^T H^T conj(u)|^2). Numerically
/// equal to downlink_rate(u, v, H) by reciprocity.
double uplink_rate(const CVector& v, const CVector& u, const CMatrix& h, double es_over_sigma2);
double uplink_rate(const CVector& v, const CVector& u, const ChannelInstance& h,
                   double es_over_sigma2);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace locbeam
