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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locbeam/alignment.hpp"
#include "locbeam/array_codebook.hpp"
#include "locbeam/geometry.hpp"

namespace locbeam {

enum class Scheme {
  kCoordinated,
  kCoordinatedNoWindow,
  kExhaustive,
  kOptimalOracle,
  kPositionOnly,
};

std::string_view scheme_name(Scheme scheme) noexcept;
std::optional<Scheme> parse_scheme(std::string_view name) noexcept;
std::vector<Scheme> all_schemes();

enum class TargetMode { kAbsolute, kFractionOfOptimal };
enum class CrbMode { kOff, kAnalytic, kSampled };

std::string_view crb_mode_name(CrbMode mode) noexcept;

/// Everything a Monte-Carlo run depends on. Defaults reproduce the
/// reference two-reflector scenario with 16-element arrays.
struct ExperimentConfig {
  Scenario scenario = Scenario::reference();
  std::size_t n_tx = 16;
  std::size_t n_rx = 16;
  std::vector<double> snr_grid_db = {-10, -5, 0, 5, 10, 15, 20, 25, 30};
  std::size_t n_blocks = 1000;
  std::size_t n_slots = 100;
  std::size_t beams_per_slot = 5;
  TargetMode target_mode = TargetMode::kFractionOfOptimal;
  double target_value = 0.95;  ///< fraction of the optimum, or bits/s/Hz
  std::vector<Scheme> schemes = all_schemes();
  CrbMode crb_mode = CrbMode::kOff;
  std::vector<double> gain_variances = {1.0, 0.1, 0.1};
  std::uint64_t master_seed = 1;

  /// Throws ConfigError.
  void validate() const;
};

/// Strict JSON parsing: every key is optional, unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ExperimentConfig& config);

/// One scheme's result on one block at one SNR.
struct SchemeResult {
  Scheme scheme = Scheme::kCoordinated;
  AlignmentOutcome alignment;
  double rate = 0.0;            ///< achieved rate, error-aware when CRB mode is on
  double effective_rate = 0.0;  ///< rate after the alignment-overhead discount
};

struct BlockOutcome {
  /// per_snr[s][k]: SNR grid point s, scheme config.schemes[k].
  std::vector<std::vector<SchemeResult>> per_snr;
};

/// Runs every enabled scheme on one block. All random draws derive from
/// (master_seed, block_index), and the channel and location estimates are
/// shared by every scheme and every SNR point.
BlockOutcome run_block(const ExperimentConfig& config, std::uint64_t block_index);

struct ResultRow {
  double snr_db = 0.0;
  std::string scheme;
  double mean_rate = 0.0;
  double mean_effective_rate = 0.0;
  double mean_n_a = 0.0;
  double target_hit_fraction = 0.0;
  std::size_t n_blocks = 0;

  bool operator==(const ResultRow&) const = default;
};

/// Averages run_block over all blocks. Rows come sorted by SNR, then by
/// scheme name. Output is independent of `threads` (0 = hardware).
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, unsigned threads = 0);

/// Sums in a fixed binary-tree order so the result does not depend on how
/// the terms were produced.
double pairwise_sum(std::span<const double> values);

void write_csv(std::span<const ResultRow> rows, std::ostream& out);
/// Throws std::runtime_error when the file cannot be written.
void write_csv(std::span<const ResultRow> rows, const std::filesystem::path& path);
std::vector<ResultRow> read_csv(std::istream& in);

/// Bound and error-aware rate statistics for one beam set.
struct CrbRow {
  double snr_db = 0.0;
  std::string beam_set;  ///< "full-codebook" or "location-subsets"
  std::string quantity;  ///< "crb_phi_0", ..., "rate_perfect_csi", "rate_estimated", ...
  double value = 0.0;
};

/// CRB diagonals (mean over blocks; inf for parameters without
/// information) and error-aware rates of the coordinated pair sounded over
/// the uncertainty-region beams versus the exhaustive pair sounded over
/// the full codebooks.
std::vector<CrbRow> run_crb_experiment(const ExperimentConfig& config, unsigned threads = 0);
void write_crb_csv(std::span<const CrbRow> rows, std::ostream& out);
void write_crb_csv(std::span<const CrbRow> rows, const std::filesystem::path& path);

}  // namespace locbeam
