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

#include "locbeam/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "locbeam/array_codebook.hpp"

namespace locbeam {

void ChannelParams::validate() const {
  if (aod.size() != gains.size() || aoa.size() != gains.size()) {
    throw std::invalid_argument("ChannelParams: aod, aoa and gains must have equal length");
  }
  if (n_tx == 0 || n_rx == 0) {
    throw std::invalid_argument("ChannelParams: antenna counts must be positive");
  }
}

std::vector<double> default_gain_variances(std::size_t n_paths) {
  std::vector<double> v(n_paths, 0.1);
  if (!v.empty()) {
    v[0] = 1.0;
  }
  return v;
}

ChannelParams true_params_from_scenario(const Scenario& scenario, Rng& rng,
                                        std::span<const double> gain_variances,
                                        std::size_t n_tx, std::size_t n_rx) {
  const std::size_t m = scenario.n_paths();
  if (gain_variances.size() != m) {
    throw std::invalid_argument("true_params_from_scenario: one gain variance per path required");
  }
  ChannelParams p;
  p.n_tx = n_tx;
  p.n_rx = n_rx;
  for (std::size_t path = 0; path < m; ++path) {
    p.aod.push_back(angle_from_to(scenario.bs, scenario.endpoint(Side::kBs, path)));
    p.aoa.push_back(angle_from_to(scenario.ue, scenario.endpoint(Side::kUe, path)));
    if (gain_variances[path] < 0.0) {
      throw std::invalid_argument("true_params_from_scenario: negative gain variance");
    }
    p.gains.push_back(complex_gaussian(gain_variances[path], rng));
  }
  p.validate();
  return p;
}

ChannelInstance::ChannelInstance(ChannelParams params) : params_(std::move(params)) {
  params_.validate();
  const auto nt = static_cast<Eigen::Index>(params_.n_tx);
  const auto nr = static_cast<Eigen::Index>(params_.n_rx);
  matrix_ = CMatrix::Zero(nr, nt);
  const double scale = std::sqrt(static_cast<double>(params_.n_tx * params_.n_rx));
  for (std::size_t m = 0; m < params_.n_paths(); ++m) {
    const CVector ar = steering_vector(params_.aoa[m], params_.n_rx);
    const CVector at = steering_vector(params_.aod[m], params_.n_tx);
    matrix_.noalias() += (scale * params_.gains[m]) * ar * at.adjoint();
  }
}

ChannelInstance build_channel(ChannelParams params) { return ChannelInstance(std::move(params)); }

namespace {

void check_link(const CVector& u, const CVector& v, const CMatrix& h, double snr) {
  if (u.size() != h.rows() || v.size() != h.cols()) {
    throw std::invalid_argument("rate: beam sizes do not match the channel dimensions");
  }
  if (!(snr >= 0.0)) {
    throw std::invalid_argument("rate: es_over_sigma2 must be >= 0");
  }
}

}  // namespace

double downlink_rate(const CVector& u, const CVector& v, const CMatrix& h, double es_over_sigma2) {
  check_link(u, v, h, es_over_sigma2);
  const Complex g = u.dot(h * v);  // Eigen's dot conjugates the left operand
  return std::log2(1.0 + es_over_sigma2 * std::norm(g));
}

double downlink_rate(const CVector& u, const CVector& v, const ChannelInstance& h,
                     double es_over_sigma2) {
  return downlink_rate(u, v, h.matrix(), es_over_sigma2);
}

double uplink_rate(const CVector& v, const CVector& u, const CMatrix& h, double es_over_sigma2) {
  check_link(u, v, h, es_over_sigma2);
  const Complex g = (v.transpose() * (h.transpose() * u.conjugate()))(0);
  return std::log2(1.0 + es_over_sigma2 * std::norm(g));
}

double uplink_rate(const CVector& v, const CVector& u, const ChannelInstance& h,
                   double es_over_sigma2) {
  return uplink_rate(v, u, h.matrix(), es_over_sigma2);
}

}  // namespace locbeam
