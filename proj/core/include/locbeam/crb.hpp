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
#include <string>
#include <vector>

#include "locbeam/array_codebook.hpp"
#include "locbeam/channel.hpp"
#include "locbeam/random.hpp"
#include "locbeam/types.hpp"

namespace locbeam {

/// Channel parameters as seen by the estimation bound.
///
/// The real parameter vector is [aod_0..aod_{M-1}, aoa_0..aoa_{M-1},
/// |g_0|..|g_{M-1}|]. Gains are *effective* gains (the sqrt(N_t N_r) array
/// factor of the channel is folded in, so vec(H) = sum_m g_m conj(a_t) (x) a_r).
/// The gain phase is carried along but is not an estimated parameter.
struct ParamVector {
  std::vector<double> aod;
  std::vector<double> aoa;
  std::vector<Complex> gains;
  std::size_t n_tx = 0;
  std::size_t n_rx = 0;

  std::size_t n_paths() const noexcept { return gains.size(); }
  std::size_t size() const noexcept { return 3 * gains.size(); }

  RVector values() const;
  /// Copy with the real parameters replaced; gain phases are kept.
  ParamVector with_values(const RVector& values) const;

  /// vec(H), column-major, length N_t * N_r.
  CVector channel_vector() const;

  /// Folds sqrt(N_t N_r) into the gains of a channel draw.
  static ParamVector from_channel(const ChannelParams& params);
};

/// "phi_m", "theta_m" or "alpha_m" for entry `index` of an M-path vector.
std::string param_name(std::size_t index, std::size_t n_paths);

CVector kron(const CVector& a, const CVector& b);

/// Joint sounding of P transmit beams against Q receive beams:
/// y = vec(U^H H V) + n = (V^T (x) U^H) vec(H) + n.
class MeasurementMatrix {
 public:
  /// `rx_beams` is N_r x Q, `tx_beams` is N_t x P.
  MeasurementMatrix(CMatrix rx_beams, CMatrix tx_beams);

  /// Stacks the listed codebook beams; duplicates are kept (repeated soundings).
  static MeasurementMatrix from_codebooks(const Codebook& tx, const Codebook& rx,
                                          std::span<const std::size_t> tx_indices,
                                          std::span<const std::size_t> rx_indices);

  const CMatrix& rx_beams() const noexcept { return u_; }
  const CMatrix& tx_beams() const noexcept { return v_; }
  std::size_t n_tx() const noexcept { return static_cast<std::size_t>(v_.rows()); }
  std::size_t n_rx() const noexcept { return static_cast<std::size_t>(u_.rows()); }
  std::size_t n_measurements() const noexcept {
    return static_cast<std::size_t>(u_.cols() * v_.cols());
  }

  /// Explicit (PQ) x (N_t N_r) Kronecker matrix. Memory grows as
  /// (P Q N_t N_r); meant for small arrays and verification.
  CMatrix dense() const;

  /// A * h without forming A.
  CVector apply(const CVector& h) const;

 private:
  CMatrix u_;
  CMatrix v_;
};

/// Noise-free observation m = A vec(H).
CVector mean_vector(const ParamVector& params, const MeasurementMatrix& a);

/// -PQ ln(pi sigma2) - ||y - m||^2 / sigma2.
double log_likelihood(const CVector& y, const ParamVector& params, const MeasurementMatrix& a,
                      double sigma2);

struct FisherInformation {
  RMatrix j;                 ///< 3M x 3M
  double scale = 1.0;        ///< Es / sigma^2 used to build it
};

/// Fisher information of the real parameter vector:
///   J_pq = 2 (Es/sigma^2) Re{ dm_p^H dm_q },
/// with every derivative of vec(H) written as c_p (x_p (x) y_p) and the
/// inner products factored through (V^T (x) U^H)(x (x) y) = (V^T x) (x) (U^H y),
/// so A is never formed. Same-path entries reduce to the closed-form
/// angle/angle, angle/gain and gain/gain blocks; cross-path entries use the
/// same derivative products.
FisherInformation fim(const ParamVector& params, const MeasurementMatrix& a,
                      double es_over_sigma2);

/// J^{-1}. Throws SingularInformationError when J is not positive definite
/// or its condition number reaches 1e12.
RMatrix crb_covariance(const FisherInformation& fisher);

/// Eigen-truncated pseudo-inverse: directions with eigenvalue below
/// rel_tol * max eigenvalue get zero variance. Used when some parameters
/// carry no information (e.g. an endfire angle where sin = 0).
RMatrix crb_covariance_pseudo(const FisherInformation& fisher, double rel_tol = 1e-12);

/// T = d vec(H) / d theta, (N_t N_r) x 3M complex.
CMatrix jacobian_T(const ParamVector& params);

struct ChannelErrorCovariance {
  CMatrix sigma;  ///< (N_t N_r) x (N_t N_r), Hermitian PSD
  CMatrix t;      ///< Jacobian it was propagated through
};

/// T Sigma_theta T^H.
ChannelErrorCovariance sigma_h(const CMatrix& t, const RMatrix& sigma_theta);

/// E|u^H E v|^2 for vec(E) ~ CN(0, Sigma_H): w^H Sigma_H w with w = conj(v) (x) u.
double error_power(const CVector& u, const CVector& v, const CMatrix& sigma_h);
/// Same quantity without forming Sigma_H.
double error_power(const CVector& u, const CVector& v, const CMatrix& t, const RMatrix& sigma_theta);

/// log2(1 + snr |u^H H_est v|^2 / (1 + snr * err_power)).
double estimated_rate(const CVector& u, const CVector& v, const CMatrix& h_estimate,
                      double err_power, double es_over_sigma2);
double estimated_rate(const CVector& u, const CVector& v, const CMatrix& h_estimate,
                      const ChannelErrorCovariance& cov, double es_over_sigma2);
/// Error power taken as the sample mean of |u^H E v|^2 over `error_samples`.
double estimated_rate(const CVector& u, const CVector& v, const CMatrix& h_estimate,
                      std::span<const CMatrix> error_samples, double es_over_sigma2);

/// Draws channel error matrices with vec(E) ~ CN(0, L L^H).
class ErrorSampler {
 public:
  /// Factor via eigen-decomposition of a Hermitian PSD covariance.
  static ErrorSampler from_covariance(const CMatrix& sigma_h, std::size_t n_rx, std::size_t n_tx);
  /// Factor T * sqrt(Sigma_theta); avoids the (N_t N_r)^2 covariance.
  static ErrorSampler from_jacobian(const CMatrix& t, const RMatrix& sigma_theta, std::size_t n_rx,
                                    std::size_t n_tx);

  CMatrix sample(Rng& rng) const;
  const CMatrix& factor() const noexcept { return factor_; }

 private:
  ErrorSampler(CMatrix factor, std::size_t n_rx, std::size_t n_tx);

  CMatrix factor_;
  std::size_t n_rx_;
  std::size_t n_tx_;
};

}  // namespace locbeam
