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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Oracles here are independent of the library's own shortcuts.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "locbeam/alignment.hpp"
#include "locbeam/channel.hpp"
#include "locbeam/crb.hpp"
#include "locbeam/experiment.hpp"
#include "locbeam/random.hpp"

namespace {

using namespace locbeam;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------- 1

Scenario random_reference_like(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x(20.0, 80.0);
  std::uniform_real_distribution<double> y(25.0, 80.0);
  std::uniform_real_distribution<double> jitter(-10.0, 10.0);
  Scenario s = Scenario::reference();
  s.ue = {100.0 + jitter(rng), jitter(rng)};
  s.reflectors = {{x(rng), y(rng)}, {x(rng), -y(rng)}};
  return s;
}

Verdict restricted_search_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20260001);
  const Codebook cb(16);
  int kept = 0;
  int mismatched = 0;
  double worst = 0.0;
  for (std::uint64_t trial = 0; kept < 250 && trial < 100000; ++trial) {
    const Scenario s = random_reference_like(rng);
    Rng crng = block_stream(trial, 0, StreamPurpose::kChannel);
    const auto channel = build_channel(
        true_params_from_scenario(s, crng, default_gain_variances(3), 16, 16));
    Rng lrng = block_stream(trial, 0, StreamPurpose::kLocation);
    const auto bs = sample_location_estimate(s, Side::kBs, lrng);
    const auto ue = sample_location_estimate(s, Side::kUe, lrng);
    const auto plans = plan_paths(bs, ue, s, cb, cb);

    bool inside = true;
    for (const auto& p : plans) {
      const auto v_true = nearest_beam(cb, channel.params().aod[p.path]);
      const auto u_true = nearest_beam(cb, channel.params().aoa[p.path]);
      const auto& bi = p.bs_subset.indices;
      const auto& ui = p.ue_subset.indices;
      inside = inside && std::find(bi.begin(), bi.end(), v_true) != bi.end() &&
               std::find(ui.begin(), ui.end(), u_true) != ui.end();
    }
    if (!inside) continue;
    ++kept;

    const CMatrix g = (cb.beams().adjoint() * channel.matrix() * cb.beams()).cwiseAbs2();
    Eigen::Index ju = 0;
    Eigen::Index kv = 0;
    const double full = g.real().maxCoeff(&ju, &kv);
    double restricted = -1.0;
    for (const auto& p : plans) {
      for (auto v : p.bs_subset.indices) {
        for (auto u : p.ue_subset.indices) {
          restricted = std::max(restricted, g(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)).real());
        }
      }
    }
    const double r_full = std::log2(1.0 + full);
    const double r_restricted = std::log2(1.0 + restricted);
    if (std::abs(r_full - r_restricted) > 1e-12) {
      ++mismatched;
      worst = std::max(worst, r_full - r_restricted);
    }
  }
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = kept >= 200 && mismatched == 0 && secs < 30.0;
  v.detail = fmt("%.0f instances, %.0f mismatches (worst rate gap %.3g)", kept, mismatched, worst) +
             fmt(", %.2f s", secs);
  return v;
}

// ---------------------------------------------------------------- 2

ParamVector random_params(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  std::uniform_real_distribution<double> angle(0.2, kPi - 0.2);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  ParamVector p;
  p.n_tx = n;
  p.n_rx = n;
  for (std::size_t i = 0; i < m; ++i) {
    p.aod.push_back(angle(rng));
    p.aoa.push_back(angle(rng));
    p.gains.push_back(std::polar(mag(rng), phase(rng)));
  }
  return p;
}

CVector oracle_h(const ParamVector& ref, const RVector& theta) {
  const std::size_t m = ref.n_paths();
  CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(ref.n_rx), static_cast<Eigen::Index>(ref.n_tx));
  for (std::size_t i = 0; i < m; ++i) {
    const Complex phase = ref.gains[i] / std::abs(ref.gains[i]);
    h += theta(static_cast<Eigen::Index>(2 * m + i)) * phase *
         steering_vector(theta(static_cast<Eigen::Index>(m + i)), ref.n_rx) *
         steering_vector(theta(static_cast<Eigen::Index>(i)), ref.n_tx).adjoint();
  }
  return h.reshaped();
}

CVector oracle_mean(const ParamVector& ref, const RVector& theta, const CMatrix& u, const CMatrix& v) {
  const CMatrix h = oracle_h(ref, theta).reshaped(u.rows(), v.rows());
  return (u.adjoint() * h * v).reshaped();
}

Verdict fim_correctness() {
  std::mt19937_64 rng(20260002);
  double worst_fim = 0.0;
  double worst_t = 0.0;
  for (std::size_t m : {1u, 2u, 3u}) {
    for (std::size_t n : {4u, 8u, 16u}) {
      for (int rep = 0; rep < 3; ++rep) {
        const auto p = random_params(rng, m, n);
        const Codebook cb(n);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<std::size_t> tx(n / 2 + 1);
        std::vector<std::size_t> rx(n / 2 + 2);
        for (auto& i : tx) i = pick(rng);
        for (auto& i : rx) i = pick(rng);
        const auto a = MeasurementMatrix::from_codebooks(cb, cb, tx, rx);
        const double snr = 2.5;
        const RVector theta = p.values();
        const double step = 1e-6;
        CMatrix dm(static_cast<Eigen::Index>(a.n_measurements()), theta.size());
        for (Eigen::Index i = 0; i < theta.size(); ++i) {
          RVector hi = theta;
          RVector lo = theta;
          hi(i) += step;
          lo(i) -= step;
          dm.col(i) = (oracle_mean(p, hi, a.rx_beams(), a.tx_beams()) -
                       oracle_mean(p, lo, a.rx_beams(), a.tx_beams())) / (2 * step);
          const CVector dh = (oracle_h(p, hi) - oracle_h(p, lo)) / (2 * step);
          const CMatrix t = jacobian_T(p);
          worst_t = std::max(worst_t, (t.col(i) - dh).norm() / dh.norm());
        }
        const RMatrix oracle = 2.0 * snr * (dm.adjoint() * dm).real();
        const RMatrix j = fim(p, a, snr).j;
        for (Eigen::Index r = 0; r < j.rows(); ++r) {
          for (Eigen::Index c = 0; c < j.cols(); ++c) {
            const double scale = std::sqrt(oracle(r, r) * oracle(c, c));
            worst_fim = std::max(worst_fim, std::abs(j(r, c) - oracle(r, c)) / scale);
          }
        }
      }
    }
  }
  Verdict v;
  v.pass = worst_fim < 1e-5 && worst_t < 1e-6;
  v.detail = fmt("max FIM rel err %.3g, max Jacobian rel err %.3g", worst_fim, worst_t);
  return v;
}

// ---------------------------------------------------------------- 3

Verdict spot_value() {
  ParamVector p;
  p.aod = {1.1};
  p.aoa = {0.6};
  p.gains = {1.0};
  p.n_tx = 16;
  p.n_rx = 16;
  const MeasurementMatrix a(steering_vector(0.6, 16), steering_vector(1.1, 16));
  const double j = fim(p, a, 1.0).j(2, 2);
  return {std::abs(j - 2.0) < 1e-10, fmt("J(alpha,alpha) = %.15g", j)};
}

// ---------------------------------------------------------------- 4, 6, 8

struct Sweep {
  std::vector<ResultRow> rows;
  double seconds = 0.0;
};

const ResultRow* find_row(const std::vector<ResultRow>& rows, double snr, const std::string& scheme) {
  for (const auto& r : rows) {
    if (r.snr_db == snr && r.scheme == scheme) return &r;
  }
  return nullptr;
}

Verdict slot_counts(const Sweep& sweep) {
  const std::size_t n_a = exhaustive_slot_count(16, 16, 5);
  bool ok = n_a == 52;
  double worst = 0.0;
  for (const auto& r : sweep.rows) {
    if (r.scheme == "exhaustive") ok = ok && r.mean_n_a == 52.0;
    if (r.scheme == "coordinated") {
      worst = std::max(worst, r.mean_n_a);
      ok = ok && r.mean_n_a < 52.0;
    }
  }
  return {ok, fmt("exhaustive N_a = %.0f, max coordinated mean N_a = %.4g", static_cast<double>(n_a), worst)};
}

Verdict effective_rate_ordering(const Sweep& sweep, const ExperimentConfig& config) {
  bool ok = sweep.seconds < 300.0;
  std::string detail;
  for (const double snr : config.snr_grid_db) {
    if (snr < 10.0) continue;
    const auto* o = find_row(sweep.rows, snr, "optimal-oracle");
    const auto* c = find_row(sweep.rows, snr, "coordinated");
    const auto* w = find_row(sweep.rows, snr, "coordinated-no-window");
    const auto* e = find_row(sweep.rows, snr, "exhaustive");
    if (!o || !c || !w || !e) return {false, "missing rows"};
    const bool here = o->mean_effective_rate > c->mean_effective_rate &&
                      c->mean_effective_rate >= w->mean_effective_rate &&
                      w->mean_effective_rate > e->mean_effective_rate;
    ok = ok && here;
    if (!here || snr == 10.0) {
      detail += fmt("%g dB: %.4f > %.4f", snr, o->mean_effective_rate, c->mean_effective_rate) +
                fmt(" >= %.4f > %.4f; ", w->mean_effective_rate, e->mean_effective_rate);
    }
  }
  return {ok, detail + fmt("sweep %.2f s", sweep.seconds)};
}

Verdict determinism(const ExperimentConfig& config, const Sweep& sweep) {
  auto csv = [](const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    write_csv(rows, out);
    return out.str();
  };
  const std::string base = csv(sweep.rows);
  const std::string again = csv(run_experiment(config, 1));
  const std::string threaded = csv(run_experiment(config, 4));
  auto sampled = config;
  sampled.crb_mode = CrbMode::kSampled;
  sampled.n_blocks = 100;
  const bool crb_same = csv(run_experiment(sampled, 1)) == csv(run_experiment(sampled, 3));
  const bool ok = base == again && base == threaded && crb_same;
  return {ok, std::string("threads 1 vs 1: ") + (base == again ? "same" : "differ") +
                  ", 1 vs 4: " + (base == threaded ? "same" : "differ") +
                  ", sampled-CRB 1 vs 3: " + (crb_same ? "same" : "differ")};
}

// ---------------------------------------------------------------- 5

double position_only_ratio(std::size_t antennas) {
  ExperimentConfig c;
  c.n_tx = antennas;
  c.n_rx = antennas;
  c.snr_grid_db = {10.0};
  c.n_blocks = 1000;
  c.schemes = {Scheme::kPositionOnly, Scheme::kOptimalOracle};
  std::vector<double> ratio(c.n_blocks);
  for (std::size_t b = 0; b < c.n_blocks; ++b) {
    const auto out = run_block(c, b);
    ratio[b] = out.per_snr[0][0].rate / out.per_snr[0][1].rate;
  }
  return pairwise_sum(ratio) / static_cast<double>(c.n_blocks);
}

Verdict position_only_degradation() {
  const double r16 = position_only_ratio(16);
  const double r64 = position_only_ratio(64);
  return {r16 - r64 >= 0.05, fmt("ratio 16 = %.4f, ratio 64 = %.4f, margin %.4f", r16, r64, r16 - r64)};
}

// ---------------------------------------------------------------- 7

Verdict error_power_monte_carlo() {
  std::mt19937_64 rng(20260007);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    const std::size_t n = 8;
    const std::size_t m = 1 + static_cast<std::size_t>(inst % 3);
    const auto p = random_params(rng, m, n);
    // Random PSD parameter covariance.
    RMatrix b(3 * m, 3 * m);
    for (auto& x : b.reshaped()) x = g(rng);
    const RMatrix sigma_theta = 0.01 * b * b.transpose();
    const auto cov = sigma_h(jacobian_T(p), sigma_theta);
    CVector u(n);
    CVector v(n);
    for (auto& x : u) x = Complex(g(rng), g(rng));
    for (auto& x : v) x = Complex(g(rng), g(rng));
    u.normalize();
    v.normalize();
    const double analytic = error_power(u, v, cov.sigma);
    const auto sampler = ErrorSampler::from_covariance(cov.sigma, n, n);
    Rng draw(1000 + static_cast<std::uint64_t>(inst));
    std::vector<double> power(100000);
    for (auto& x : power) x = std::norm(u.dot(sampler.sample(draw) * v));
    const double mc = pairwise_sum(power) / static_cast<double>(power.size());
    worst = std::max(worst, std::abs(mc - analytic) / analytic);
  }
  return {worst < 0.03, fmt("max relative gap %.4f over 10 instances", worst)};
}

}  // namespace

int main() {
  const ExperimentConfig defaults;
  Sweep sweep;
  {
    const auto t0 = Clock::now();
    sweep.rows = run_experiment(defaults, 1);
    sweep.seconds = seconds_since(t0);
  }

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 restricted-search equivalence", restricted_search_equivalence},
      {"2 FIM and Jacobian vs finite differences", fim_correctness},
      {"3 FIM gain spot value", spot_value},
      {"4 slot counts", [&] { return slot_counts(sweep); }},
      {"5 position-only degradation with array size", position_only_degradation},
      {"6 effective-rate ordering", [&] { return effective_rate_ordering(sweep, defaults); }},
      {"7 analytic error power vs Monte Carlo", error_power_monte_carlo},
      {"8 determinism", [&] { return determinism(defaults, sweep); }},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::printf("%s: criterion %s (%s)\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
