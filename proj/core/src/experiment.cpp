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

#include "locbeam/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "locbeam/channel.hpp"
#include "locbeam/crb.hpp"
#include "locbeam/random.hpp"

namespace locbeam {

namespace {

// Error samples drawn per block in sampled CRB mode.
constexpr std::size_t kErrorSamples = 64;

// Diagonal entries this far below the largest count as "no information".
constexpr double kNoInformationTol = 1e-12;

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("read_csv: bad number '" + s + "'");
  return v;
}

unsigned resolve_threads(unsigned threads, std::size_t work) {
  unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(work, 1)));
}

// Calls fn(i) for i in [0, n) on `threads` workers. The first exception is
// rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  const unsigned workers = resolve_threads(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Everything run_block and run_crb_experiment share for one block.
struct BlockSetup {
  ChannelInstance channel;
  std::vector<PathPlan> plans;
};

BlockSetup setup_block(const ExperimentConfig& config, const Codebook& tx, const Codebook& rx,
                       std::uint64_t block_index) {
  Rng channel_rng = block_stream(config.master_seed, block_index, StreamPurpose::kChannel);
  ChannelInstance channel = build_channel(true_params_from_scenario(
      config.scenario, channel_rng, config.gain_variances, config.n_tx, config.n_rx));

  Rng location_rng = block_stream(config.master_seed, block_index, StreamPurpose::kLocation);
  const LocationEstimate bs_est = sample_location_estimate(config.scenario, Side::kBs, location_rng);
  const LocationEstimate ue_est = sample_location_estimate(config.scenario, Side::kUe, location_rng);
  auto plans = plan_paths(bs_est, ue_est, config.scenario, tx, rx);
  return {std::move(channel), std::move(plans)};
}

// Beams sounded by the location-aided schemes: every path's uncertainty
// subset, concatenated.
MeasurementMatrix location_measurements(const std::vector<PathPlan>& plans, const Codebook& tx,
                                        const Codebook& rx) {
  std::vector<std::size_t> tx_idx;
  std::vector<std::size_t> rx_idx;
  for (const auto& p : plans) {
    tx_idx.insert(tx_idx.end(), p.bs_subset.indices.begin(), p.bs_subset.indices.end());
    rx_idx.insert(rx_idx.end(), p.ue_subset.indices.begin(), p.ue_subset.indices.end());
  }
  return MeasurementMatrix::from_codebooks(tx, rx, tx_idx, rx_idx);
}

MeasurementMatrix full_measurements(const Codebook& tx, const Codebook& rx) {
  return MeasurementMatrix(rx.beams(), tx.beams());
}

// Channel-estimation error model of one beam set at unit SNR. The bound
// scales as 1/SNR, so one factorization serves the whole grid.
struct ErrorModel {
  CMatrix t;
  RMatrix sigma_theta;  // at SNR = 1
  RVector info_diag;    // diag(J) at SNR = 1
  std::vector<CMatrix> samples;  // at SNR = 1, sampled mode only

  ErrorModel(const ParamVector& params, const MeasurementMatrix& a)
      : t(jacobian_T(params)) {
    const FisherInformation f = fim(params, a, 1.0);
    sigma_theta = crb_covariance_pseudo(f);
    info_diag = f.j.diagonal();
  }

  void draw(Rng& rng, std::size_t n_rx, std::size_t n_tx) {
    const ErrorSampler sampler = ErrorSampler::from_jacobian(t, sigma_theta, n_rx, n_tx);
    samples.clear();
    for (std::size_t k = 0; k < kErrorSamples; ++k) samples.push_back(sampler.sample(rng));
  }

  // Parameter variances at `snr`; inf where the sounding carries no information.
  RVector crb_diag(double snr) const {
    const double top = info_diag.size() > 0 ? info_diag.maxCoeff() : 0.0;
    RVector out(sigma_theta.rows());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      out(i) = info_diag(i) <= kNoInformationTol * top
                   ? std::numeric_limits<double>::infinity()
                   : sigma_theta(i, i) / snr;
    }
    return out;
  }

  double rate(CrbMode mode, const CVector& u, const CVector& v, const CMatrix& h,
              double snr) const {
    if (mode == CrbMode::kSampled && !samples.empty()) {
      // Samples are drawn at unit SNR; the error amplitude scales as 1/sqrt(SNR).
      const double scale = 1.0 / std::sqrt(snr);
      double power = 0.0;
      for (const auto& e : samples) power += std::norm(u.dot(e * v));
      power *= scale * scale / static_cast<double>(samples.size());
      const CMatrix h_hat = h + scale * samples.front();
      return estimated_rate(u, v, h_hat, power, snr);
    }
    return estimated_rate(u, v, h, error_power(u, v, t, sigma_theta) / snr, snr);
  }
};

double target_for(const ExperimentConfig& config, double optimal_rate) {
  return config.target_mode == TargetMode::kAbsolute ? config.target_value
                                                     : config.target_value * optimal_rate;
}

AlignmentConfig alignment_config(const ExperimentConfig& config, double snr, double target,
                                 bool use_window) {
  AlignmentConfig a;
  a.target_rate = target;
  a.n_slots = config.n_slots;
  a.beams_per_slot = config.beams_per_slot;
  a.use_window = use_window;
  a.es_over_sigma2 = snr;
  return a;
}

bool uses_location_beams(Scheme s) {
  return s == Scheme::kCoordinated || s == Scheme::kCoordinatedNoWindow ||
         s == Scheme::kPositionOnly;
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (const double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

BlockOutcome run_block(const ExperimentConfig& config, std::uint64_t block_index) {
  const Codebook tx(config.n_tx);
  const Codebook rx(config.n_rx);
  const BlockSetup setup = setup_block(config, tx, rx, block_index);

  std::optional<ErrorModel> location_model;
  std::optional<ErrorModel> full_model;
  if (config.crb_mode != CrbMode::kOff) {
    const ParamVector params = ParamVector::from_channel(setup.channel.params());
    Rng error_rng = block_stream(config.master_seed, block_index, StreamPurpose::kChannelError);
    const bool need_location =
        std::any_of(config.schemes.begin(), config.schemes.end(), uses_location_beams);
    const bool need_full = std::find(config.schemes.begin(), config.schemes.end(),
                                     Scheme::kExhaustive) != config.schemes.end();
    if (need_location) {
      location_model.emplace(params, location_measurements(setup.plans, tx, rx));
      if (config.crb_mode == CrbMode::kSampled) location_model->draw(error_rng, config.n_rx, config.n_tx);
    }
    if (need_full) {
      full_model.emplace(params, full_measurements(tx, rx));
      if (config.crb_mode == CrbMode::kSampled) full_model->draw(error_rng, config.n_rx, config.n_tx);
    }
  }

  BlockOutcome out;
  out.per_snr.reserve(config.snr_grid_db.size());
  for (const double snr_db : config.snr_grid_db) {
    const double snr = db_to_linear(snr_db);
    const LinkEvaluator link(setup.channel, tx, rx, snr);
    const AlignmentOutcome oracle = optimal_oracle(link, alignment_config(config, snr, 0.0, true));
    const double target = target_for(config, oracle.achieved_rate);

    std::vector<SchemeResult> results;
    results.reserve(config.schemes.size());
    for (const Scheme scheme : config.schemes) {
      SchemeResult r;
      r.scheme = scheme;
      const bool windowed = scheme != Scheme::kCoordinatedNoWindow;
      const AlignmentConfig ac = alignment_config(config, snr, target, windowed);
      switch (scheme) {
        case Scheme::kCoordinated:
        case Scheme::kCoordinatedNoWindow:
          r.alignment = coordinated_alignment(link, setup.plans, ac);
          break;
        case Scheme::kExhaustive:
          r.alignment = exhaustive_search(link, ac);
          break;
        case Scheme::kOptimalOracle:
          r.alignment = optimal_oracle(link, ac);
          break;
        case Scheme::kPositionOnly:
          r.alignment = position_only_baseline(link, setup.plans, ac);
          break;
      }
      r.rate = r.alignment.achieved_rate;
      const ErrorModel* model = nullptr;
      if (scheme == Scheme::kExhaustive && full_model) model = &*full_model;
      if (uses_location_beams(scheme) && location_model) model = &*location_model;
      if (model != nullptr) {
        r.rate = model->rate(config.crb_mode, rx.beam(r.alignment.u_index),
                             tx.beam(r.alignment.v_index), setup.channel.matrix(), snr);
      }
      // A budget overrun reports N_a = N, which zeroes this as well.
      r.effective_rate = effective_rate(r.rate, r.alignment.n_alignment_slots, config.n_slots);
      results.push_back(std::move(r));
    }
    out.per_snr.push_back(std::move(results));
  }
  return out;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  std::vector<BlockOutcome> blocks(config.n_blocks);
  parallel_for(config.n_blocks, threads, [&](std::size_t b) { blocks[b] = run_block(config, b); });

  std::vector<ResultRow> rows;
  std::vector<double> rate(config.n_blocks), eff(config.n_blocks), n_a(config.n_blocks),
      hit(config.n_blocks);
  const double n = static_cast<double>(config.n_blocks);
  for (std::size_t s = 0; s < config.snr_grid_db.size(); ++s) {
    for (std::size_t k = 0; k < config.schemes.size(); ++k) {
      for (std::size_t b = 0; b < config.n_blocks; ++b) {
        const SchemeResult& r = blocks[b].per_snr[s][k];
        rate[b] = r.rate;
        eff[b] = r.effective_rate;
        n_a[b] = static_cast<double>(r.alignment.n_alignment_slots);
        hit[b] = r.alignment.met_target ? 1.0 : 0.0;
      }
      ResultRow row;
      row.snr_db = config.snr_grid_db[s];
      row.scheme = std::string(scheme_name(config.schemes[k]));
      row.mean_rate = pairwise_sum(rate) / n;
      row.mean_effective_rate = pairwise_sum(eff) / n;
      row.mean_n_a = pairwise_sum(n_a) / n;
      row.target_hit_fraction = pairwise_sum(hit) / n;
      row.n_blocks = config.n_blocks;
      rows.push_back(std::move(row));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.snr_db, a.scheme) < std::tie(b.snr_db, b.scheme);
  });
  return rows;
}

void write_csv(std::span<const ResultRow> rows, std::ostream& out) {
  out << "snr_db,scheme,mean_rate,mean_eff_rate,mean_na,hit_frac,blocks\n";
  for (const auto& r : rows) {
    out << format_double(r.snr_db) << ',' << r.scheme << ',' << format_double(r.mean_rate) << ','
        << format_double(r.mean_effective_rate) << ',' << format_double(r.mean_n_a) << ','
        << format_double(r.target_hit_fraction) << ',' << r.n_blocks << '\n';
  }
}

void write_csv(std::span<const ResultRow> rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_csv(rows, out);
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "snr_db,scheme,mean_rate,mean_eff_rate,mean_na,hit_frac,blocks") {
    throw std::runtime_error("read_csv: unexpected header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 7) throw std::runtime_error("read_csv: expected 7 fields: " + line);
    ResultRow r;
    r.snr_db = parse_double(f[0]);
    r.scheme = f[1];
    r.mean_rate = parse_double(f[2]);
    r.mean_effective_rate = parse_double(f[3]);
    r.mean_n_a = parse_double(f[4]);
    r.target_hit_fraction = parse_double(f[5]);
    r.n_blocks = static_cast<std::size_t>(std::stoull(f[6]));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<CrbRow> run_crb_experiment(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  const Codebook tx(config.n_tx);
  const Codebook rx(config.n_rx);
  const std::size_t n_params = 3 * config.scenario.n_paths();
  const std::size_t n_snr = config.snr_grid_db.size();

  // values[b][s][set] = crb diagonal followed by the three rates.
  const std::size_t n_values = n_params + 3;
  using PerSet = std::array<std::vector<double>, 2>;
  std::vector<std::vector<PerSet>> values(config.n_blocks, std::vector<PerSet>(n_snr));

  parallel_for(config.n_blocks, threads, [&](std::size_t b) {
    const BlockSetup setup = setup_block(config, tx, rx, b);
    const ParamVector params = ParamVector::from_channel(setup.channel.params());
    std::array<ErrorModel, 2> models = {
        ErrorModel(params, location_measurements(setup.plans, tx, rx)),
        ErrorModel(params, full_measurements(tx, rx))};
    if (config.crb_mode == CrbMode::kSampled) {
      Rng error_rng = block_stream(config.master_seed, b, StreamPurpose::kChannelError);
      for (auto& m : models) m.draw(error_rng, config.n_rx, config.n_tx);
    }
    for (std::size_t s = 0; s < n_snr; ++s) {
      const double snr = db_to_linear(config.snr_grid_db[s]);
      const LinkEvaluator link(setup.channel, tx, rx, snr);
      const double target =
          target_for(config, optimal_oracle(link, alignment_config(config, snr, 0.0, true)).achieved_rate);
      const AlignmentConfig ac = alignment_config(config, snr, target, true);
      const std::array<AlignmentOutcome, 2> picks = {coordinated_alignment(link, setup.plans, ac),
                                                     exhaustive_search(link, ac)};
      const CrbMode mode = config.crb_mode == CrbMode::kOff ? CrbMode::kAnalytic : config.crb_mode;
      for (std::size_t set = 0; set < 2; ++set) {
        std::vector<double>& v = values[b][s][set];
        v.resize(n_values);
        const RVector diag = models[set].crb_diag(snr);
        for (std::size_t p = 0; p < n_params; ++p) v[p] = diag(static_cast<Eigen::Index>(p));
        const AlignmentOutcome& pick = picks[set];
        const double est = models[set].rate(mode, rx.beam(pick.u_index), tx.beam(pick.v_index),
                                            setup.channel.matrix(), snr);
        v[n_params] = pick.achieved_rate;
        v[n_params + 1] = est;
        v[n_params + 2] = effective_rate(est, pick.n_alignment_slots, config.n_slots);
      }
    }
  });

  const std::array<std::string, 2> set_names = {"location-subsets", "full-codebook"};
  std::vector<std::string> quantity(n_values);
  for (std::size_t p = 0; p < n_params; ++p) {
    quantity[p] = "crb_" + param_name(p, config.scenario.n_paths());
  }
  quantity[n_params] = "rate_perfect_csi";
  quantity[n_params + 1] = "rate_estimated";
  quantity[n_params + 2] = "eff_rate_estimated";

  std::vector<CrbRow> rows;
  std::vector<double> column(config.n_blocks);
  for (std::size_t s = 0; s < n_snr; ++s) {
    for (std::size_t set = 0; set < 2; ++set) {
      for (std::size_t q = 0; q < n_values; ++q) {
        for (std::size_t b = 0; b < config.n_blocks; ++b) column[b] = values[b][s][set][q];
        rows.push_back({config.snr_grid_db[s], set_names[set], quantity[q],
                        pairwise_sum(column) / static_cast<double>(config.n_blocks)});
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CrbRow& a, const CrbRow& b) {
    return std::tie(a.snr_db, a.beam_set, a.quantity) < std::tie(b.snr_db, b.beam_set, b.quantity);
  });
  return rows;
}

void write_crb_csv(std::span<const CrbRow> rows, std::ostream& out) {
  out << "snr_db,beam_set,quantity,value\n";
  for (const auto& r : rows) {
    out << format_double(r.snr_db) << ',' << r.beam_set << ',' << r.quantity << ','
        << format_double(r.value) << '\n';
  }
}

void write_crb_csv(std::span<const CrbRow> rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_crb_csv(rows, out);
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace locbeam
