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

#include "locbeam/crb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace locbeam {

RVector ParamVector::values() const {
  const auto m = static_cast<Eigen::Index>(n_paths());
  RVector out(3 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out(i) = aod[static_cast<std::size_t>(i)];
    out(m + i) = aoa[static_cast<std::size_t>(i)];
    out(2 * m + i) = std::abs(gains[static_cast<std::size_t>(i)]);
  }
  return out;
}

ParamVector ParamVector::with_values(const RVector& values) const {
  if (values.size() != static_cast<Eigen::Index>(size())) {
    throw std::invalid_argument("ParamVector::with_values: length must be 3M");
  }
  ParamVector out = *this;
  const auto m = static_cast<Eigen::Index>(n_paths());
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out.aod[k] = values(i);
    out.aoa[k] = values(m + i);
    const double mag = std::abs(gains[k]);
    const Complex phase = mag > 0.0 ? gains[k] / mag : Complex(1.0, 0.0);
    out.gains[k] = values(2 * m + i) * phase;
  }
  return out;
}

CVector ParamVector::channel_vector() const {
  CVector h = CVector::Zero(static_cast<Eigen::Index>(n_tx * n_rx));
  for (std::size_t m = 0; m < n_paths(); ++m) {
    h += gains[m] * kron(steering_vector(aod[m], n_tx).conjugate(), steering_vector(aoa[m], n_rx));
  }
  return h;
}

ParamVector ParamVector::from_channel(const ChannelParams& params) {
  params.validate();
  ParamVector p;
  p.aod = params.aod;
  p.aoa = params.aoa;
  p.n_tx = params.n_tx;
  p.n_rx = params.n_rx;
  const double scale = std::sqrt(static_cast<double>(params.n_tx * params.n_rx));
  for (const Complex g : params.gains) {
    p.gains.push_back(scale * g);
  }
  return p;
}

std::string param_name(std::size_t index, std::size_t n_paths) {
  static constexpr const char* kNames[] = {"phi", "theta", "alpha"};
  if (n_paths == 0 || index >= 3 * n_paths) {
    throw std::out_of_range("param_name: index out of range");
  }
  return std::string(kNames[index / n_paths]) + "_" + std::to_string(index % n_paths);
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

MeasurementMatrix::MeasurementMatrix(CMatrix rx_beams, CMatrix tx_beams)
    : u_(std::move(rx_beams)), v_(std::move(tx_beams)) {
  if (u_.cols() == 0 || v_.cols() == 0) {
    throw std::invalid_argument("MeasurementMatrix: need at least one beam per side");
  }
}

MeasurementMatrix MeasurementMatrix::from_codebooks(const Codebook& tx, const Codebook& rx,
                                                    std::span<const std::size_t> tx_indices,
                                                    std::span<const std::size_t> rx_indices) {
  CMatrix v(tx.beams().rows(), static_cast<Eigen::Index>(tx_indices.size()));
  CMatrix u(rx.beams().rows(), static_cast<Eigen::Index>(rx_indices.size()));
  for (std::size_t p = 0; p < tx_indices.size(); ++p) {
    v.col(static_cast<Eigen::Index>(p)) = tx.beam(tx_indices[p]);
  }
  for (std::size_t q = 0; q < rx_indices.size(); ++q) {
    u.col(static_cast<Eigen::Index>(q)) = rx.beam(rx_indices[q]);
  }
  return MeasurementMatrix(std::move(u), std::move(v));
}

CMatrix MeasurementMatrix::dense() const {
  const Eigen::Index p_count = v_.cols();
  const Eigen::Index q_count = u_.cols();
  const Eigen::Index nt = v_.rows();
  const Eigen::Index nr = u_.rows();
  const CMatrix uh = u_.adjoint();
  CMatrix a(p_count * q_count, nt * nr);
  for (Eigen::Index p = 0; p < p_count; ++p) {
    for (Eigen::Index k = 0; k < nt; ++k) {
      a.block(p * q_count, k * nr, q_count, nr) = v_(k, p) * uh;
    }
  }
  return a;
}

CVector MeasurementMatrix::apply(const CVector& h) const {
  if (h.size() != v_.rows() * u_.rows()) {
    throw std::invalid_argument("MeasurementMatrix::apply: vector length must be N_t * N_r");
  }
  const Eigen::Map<const CMatrix> hm(h.data(), u_.rows(), v_.rows());
  const CMatrix y = u_.adjoint() * hm * v_;
  return Eigen::Map<const CVector>(y.data(), y.size());
}

CVector mean_vector(const ParamVector& params, const MeasurementMatrix& a) {
  if (params.n_tx != a.n_tx() || params.n_rx != a.n_rx()) {
    throw std::invalid_argument("mean_vector: measurement matrix does not match the arrays");
  }
  return a.apply(params.channel_vector());
}

double log_likelihood(const CVector& y, const ParamVector& params, const MeasurementMatrix& a,
                      double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("log_likelihood: sigma2 must be > 0");
  }
  const CVector m = mean_vector(params, a);
  if (y.size() != m.size()) {
    throw std::invalid_argument("log_likelihood: observation length must be P*Q");
  }
  const double pq = static_cast<double>(m.size());
  return -pq * std::log(kPi * sigma2) - (y - m).squaredNorm() / sigma2;
}

namespace {

// d vec(H) / d theta_p = coeff * (tx_factor (x) rx_factor).
struct Derivative {
  Complex coeff;
  CVector tx_factor;
  CVector rx_factor;
};

std::vector<Derivative> derivatives(const ParamVector& params) {
  const std::size_t m_count = params.n_paths();
  std::vector<Derivative> d(3 * m_count);
  const Complex i_pi(0.0, kPi);
  for (std::size_t m = 0; m < m_count; ++m) {
    const double phi = params.aod[m];
    const double theta = params.aoa[m];
    const Complex g = params.gains[m];
    const CVector at_conj = steering_vector(phi, params.n_tx).conjugate();
    const CVector ar = steering_vector(theta, params.n_rx);
    // d conj(a_t)/d phi = -i pi sin(phi) conj(weighted a_t)
    d[m] = {-i_pi * std::sin(phi) * g, weighted_steering_vector(phi, params.n_tx).conjugate(), ar};
    // d a_r/d theta = +i pi sin(theta) weighted a_r
    d[m_count + m] = {i_pi * std::sin(theta) * g, at_conj,
                      weighted_steering_vector(theta, params.n_rx)};
    const double mag = std::abs(g);
    d[2 * m_count + m] = {mag > 0.0 ? g / mag : Complex(1.0, 0.0), at_conj, ar};
  }
  return d;
}

}  // namespace

FisherInformation fim(const ParamVector& params, const MeasurementMatrix& a,
                      double es_over_sigma2) {
  if (params.n_paths() == 0) {
    throw std::invalid_argument("fim: need at least one path");
  }
  if (params.n_tx != a.n_tx() || params.n_rx != a.n_rx()) {
    throw std::invalid_argument("fim: measurement matrix does not match the arrays");
  }
  const auto d = derivatives(params);
  const auto n = static_cast<Eigen::Index>(d.size());
  // Per-side projections: V^T x_p and U^H y_p.
  std::vector<CVector> tx_proj(d.size());
  std::vector<CVector> rx_proj(d.size());
  for (std::size_t p = 0; p < d.size(); ++p) {
    tx_proj[p] = a.tx_beams().transpose() * d[p].tx_factor;
    rx_proj[p] = a.rx_beams().adjoint() * d[p].rx_factor;
  }
  FisherInformation out;
  out.scale = es_over_sigma2;
  out.j.resize(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = p; q < n; ++q) {
      const auto pi = static_cast<std::size_t>(p);
      const auto qi = static_cast<std::size_t>(q);
      const Complex inner = std::conj(d[pi].coeff) * d[qi].coeff *
                            tx_proj[pi].dot(tx_proj[qi]) * rx_proj[pi].dot(rx_proj[qi]);
      const double value = 2.0 * es_over_sigma2 * inner.real();
      out.j(p, q) = value;
      out.j(q, p) = value;
    }
  }
  return out;
}

RMatrix crb_covariance(const FisherInformation& fisher) {
  const Eigen::SelfAdjointEigenSolver<RMatrix> eig(fisher.j);
  if (eig.info() != Eigen::Success) {
    throw SingularInformationError("crb_covariance: eigen-decomposition failed");
  }
  const RVector& lambda = eig.eigenvalues();
  const double lo = lambda.minCoeff();
  const double hi = lambda.maxCoeff();
  if (!(lo > 0.0) || hi / lo >= 1e12) {
    throw SingularInformationError("crb_covariance: Fisher information is singular or "
                                   "ill-conditioned (condition number >= 1e12)");
  }
  const RMatrix& q = eig.eigenvectors();
  return q * lambda.cwiseInverse().asDiagonal() * q.transpose();
}

RMatrix crb_covariance_pseudo(const FisherInformation& fisher, double rel_tol) {
  const Eigen::SelfAdjointEigenSolver<RMatrix> eig(fisher.j);
  if (eig.info() != Eigen::Success) {
    throw SingularInformationError("crb_covariance_pseudo: eigen-decomposition failed");
  }
  const RVector& lambda = eig.eigenvalues();
  const double cutoff = rel_tol * std::max(lambda.maxCoeff(), 0.0);
  RVector inv = RVector::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > cutoff && lambda(i) > 0.0) {
      inv(i) = 1.0 / lambda(i);
    }
  }
  const RMatrix& q = eig.eigenvectors();
  return q * inv.asDiagonal() * q.transpose();
}

CMatrix jacobian_T(const ParamVector& params) {
  const auto d = derivatives(params);
  CMatrix t(static_cast<Eigen::Index>(params.n_tx * params.n_rx),
            static_cast<Eigen::Index>(d.size()));
  for (std::size_t p = 0; p < d.size(); ++p) {
    t.col(static_cast<Eigen::Index>(p)) = d[p].coeff * kron(d[p].tx_factor, d[p].rx_factor);
  }
  return t;
}

ChannelErrorCovariance sigma_h(const CMatrix& t, const RMatrix& sigma_theta) {
  if (t.cols() != sigma_theta.rows() || sigma_theta.rows() != sigma_theta.cols()) {
    throw std::invalid_argument("sigma_h: Jacobian and parameter covariance sizes differ");
  }
  ChannelErrorCovariance out;
  out.sigma = t * sigma_theta.cast<Complex>() * t.adjoint();
  // Remove rounding asymmetry so downstream eigen-solvers see an exact Hermitian matrix.
  out.sigma = (0.5 * (out.sigma + out.sigma.adjoint())).eval();
  out.t = t;
  return out;
}

namespace {

CVector quadratic_weight(const CVector& u, const CVector& v) {
  return kron(v.conjugate(), u);
}

}  // namespace

double error_power(const CVector& u, const CVector& v, const CMatrix& sigma) {
  const CVector w = quadratic_weight(u, v);
  if (w.size() != sigma.rows() || sigma.rows() != sigma.cols()) {
    throw std::invalid_argument("error_power: covariance size must be N_t N_r");
  }
  return std::max(0.0, w.dot(sigma * w).real());
}

double error_power(const CVector& u, const CVector& v, const CMatrix& t,
                   const RMatrix& sigma_theta) {
  const CVector w = quadratic_weight(u, v);
  if (w.size() != t.rows() || t.cols() != sigma_theta.rows()) {
    throw std::invalid_argument("error_power: Jacobian size mismatch");
  }
  const CVector g = t.adjoint() * w;
  return std::max(0.0, g.dot(sigma_theta.cast<Complex>() * g).real());
}

double estimated_rate(const CVector& u, const CVector& v, const CMatrix& h_estimate,
                      double err_power, double es_over_sigma2) {
  if (u.size() != h_estimate.rows() || v.size() != h_estimate.cols()) {
    throw std::invalid_argument("estimated_rate: beam sizes do not match the channel");
  }
  if (!(es_over_sigma2 >= 0.0) || !(err_power >= 0.0)) {
    throw std::invalid_argument("estimated_rate: snr and error power must be >= 0");
  }
  const double signal = std::norm(u.dot(h_estimate * v));
  return std::log2(1.0 + es_over_sigma2 * signal / (1.0 + es_over_sigma2 * err_power));
}

double estimated_rate(const CVector& u, const CVector& v, const CMatrix& h_estimate,
                      const ChannelErrorCovariance& cov, double es_over_sigma2) {
  return estimated_rate(u, v, h_estimate, error_power(u, v, cov.sigma), es_over_sigma2);
}

double estimated_rate(const CVector& u, const CVector& v, const CMatrix& h_estimate,
                      std::span<const CMatrix> error_samples, double es_over_sigma2) {
  if (error_samples.empty()) {
    throw std::invalid_argument("estimated_rate: need at least one error sample");
  }
  double acc = 0.0;
  for (const CMatrix& e : error_samples) {
    acc += std::norm(u.dot(e * v));
  }
  return estimated_rate(u, v, h_estimate, acc / static_cast<double>(error_samples.size()),
                        es_over_sigma2);
}

ErrorSampler::ErrorSampler(CMatrix factor, std::size_t n_rx, std::size_t n_tx)
    : factor_(std::move(factor)), n_rx_(n_rx), n_tx_(n_tx) {
  if (factor_.rows() != static_cast<Eigen::Index>(n_rx * n_tx)) {
    throw std::invalid_argument("ErrorSampler: factor rows must equal N_t * N_r");
  }
}

ErrorSampler ErrorSampler::from_covariance(const CMatrix& sigma, std::size_t n_rx,
                                           std::size_t n_tx) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(sigma);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("ErrorSampler: eigen-decomposition failed");
  }
  const RVector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return ErrorSampler(eig.eigenvectors() * root.cast<Complex>().asDiagonal(), n_rx, n_tx);
}

ErrorSampler ErrorSampler::from_jacobian(const CMatrix& t, const RMatrix& sigma_theta,
                                         std::size_t n_rx, std::size_t n_tx) {
  const Eigen::SelfAdjointEigenSolver<RMatrix> eig(sigma_theta);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("ErrorSampler: eigen-decomposition failed");
  }
  const RVector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const RMatrix half = eig.eigenvectors() * root.asDiagonal();
  return ErrorSampler(t * half.cast<Complex>(), n_rx, n_tx);
}

CMatrix ErrorSampler::sample(Rng& rng) const {
  CVector z(factor_.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    z(i) = complex_gaussian(1.0, rng);
  }
  const CVector e = factor_ * z;
  return Eigen::Map<const CMatrix>(e.data(), static_cast<Eigen::Index>(n_rx_),
                                   static_cast<Eigen::Index>(n_tx_));
}

}  // namespace locbeam
