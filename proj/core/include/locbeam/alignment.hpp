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
#include <optional>
#include <vector>

#include "locbeam/array_codebook.hpp"
#include "locbeam/channel.hpp"
#include "locbeam/geometry.hpp"
#include "locbeam/types.hpp"

namespace locbeam {

/// Contiguous run of codebook beams that covers one path's uncertainty
/// interval on one side. Never empty.
struct BeamSubset {
  std::vector<std::size_t> indices;  ///< ascending codebook indices
  Side side = Side::kBs;
  std::size_t path = 0;

  std::size_t size() const noexcept { return indices.size(); }
};

/// All beams whose pointing angle lies in [angle_hat - half, angle_hat + half];
/// falls back to {nearest_beam(angle_hat)} when that interval holds no
/// grid angle.
BeamSubset beam_subset(const Codebook& codebook, double angle_hat, double half_angle, Side side,
                       std::size_t path);

/// Inclusive 1-based position range inside a subset.
struct WindowRange {
  std::size_t first = 1;
  std::size_t last = 1;

  std::size_t size() const noexcept { return last - first + 1; }
  bool operator==(const WindowRange&) const = default;
};

/// Search window of width W over a subset of B beams centered at
/// position I (1-based):
///   W >= B           -> [1, B]
///   B - I < W/2      -> [B - W + 1, B]
///   I < W/2          -> [1, W]
///   otherwise        -> W entries starting at I - floor(W/2)
/// Throws std::invalid_argument unless 1 <= I <= B and W >= 1.
WindowRange search_window(std::size_t subset_size, std::size_t center, std::size_t width);

/// Per-block alignment parameters. The window width equals beams_per_slot.
struct AlignmentConfig {
  double target_rate = 0.0;       ///< R0 in bits/s/Hz
  std::size_t n_slots = 100;      ///< N, slots per block
  std::size_t beams_per_slot = 5; ///< N_b
  bool use_window = true;         ///< false: each phase sweeps the whole subset
  double es_over_sigma2 = 1.0;    ///< linear SNR

  void validate() const;
};

struct AlignmentOutcome {
  std::size_t v_index = 0;  ///< BS (transmit) beam
  std::size_t u_index = 0;  ///< UE (receive) beam
  std::size_t n_alignment_slots = 0;
  double achieved_rate = 0.0;
  double effective_rate = 0.0;
  bool met_target = false;
  std::optional<std::size_t> path_used;
};

/// Rate of every beam pair for one channel realization and SNR.
///
/// Stands in for over-the-air measurement: the gain table G = U^H H V is
/// computed once so schemes only pay for the pairs they look up.
class LinkEvaluator {
 public:
  LinkEvaluator(const ChannelInstance& channel, const Codebook& tx, const Codebook& rx,
                double es_over_sigma2);

  /// Downlink rate with UE beam u_index and BS beam v_index.
  double rate(std::size_t u_index, std::size_t v_index) const;
  /// Uplink rate over H^T; equal to rate(u_index, v_index).
  double uplink_rate(std::size_t v_index, std::size_t u_index) const;

  const Codebook& tx() const noexcept { return *tx_; }
  const Codebook& rx() const noexcept { return *rx_; }
  const ChannelInstance& channel() const noexcept { return *channel_; }
  double es_over_sigma2() const noexcept { return snr_; }

 private:
  const ChannelInstance* channel_;
  const Codebook* tx_;
  const Codebook* rx_;
  double snr_;
  RMatrix gain2_;  // |u_j^H H v_k|^2, N_r x N_t
};

/// Beam sets and initial beams of one path, derived from both sides'
/// location estimates.
struct PathPlan {
  std::size_t path = 0;
  PathView bs_view;
  PathView ue_view;
  BeamSubset bs_subset;
  BeamSubset ue_subset;
  std::size_t v_initial = 0;
  std::size_t u_initial = 0;
};

std::vector<PathPlan> plan_paths(const LocationEstimate& bs_estimate,
                                 const LocationEstimate& ue_estimate, const Scenario& scenario,
                                 const Codebook& tx, const Codebook& rx);

/// One slot-consuming step of the coordinated protocol.
struct AlignmentPhase {
  enum class Kind { kLocation, kInitialCheck, kUeWindow, kBsWindow };
  Kind kind = Kind::kLocation;
  std::size_t path = 0;
  std::size_t slots = 1;
  std::size_t fixed_beam = 0;             ///< partner held fixed during the phase
  std::vector<std::size_t> measured;      ///< codebook indices measured on the searching side
  std::size_t local_optimum = 0;          ///< best beam of the searching side after the phase
  double best_rate = 0.0;                 ///< rate of the local optimum pair
  /// Codebook indices spanned by the window, before excluding beams
  /// measured earlier. Window phases only.
  std::size_t window_first = 0;
  std::size_t window_last = 0;
};

struct AlignmentTrace {
  std::vector<AlignmentPhase> phases;
};

/// Coordinated beam alignment for one block.
///
/// Slot 1 is location estimation. For each path in order, the nearest
/// beams to the estimated AOD/AOA are checked (one slot). If R0 is not
/// met, the UE and BS alternate window phases, one slot each: the UE
/// measures its window with the BS beam fixed, then the BS measures its
/// window over the uplink with the UE's local optimum fixed. Each new
/// window is centered on the side's current optimum and skips beams that
/// side has already measured for this path, so the search walks toward
/// the edge where the local optimum landed. A path ends when neither side
/// has an unmeasured beam left in its window. The protocol stops as soon as
/// a measured pair reaches R0. Without success the best pair seen is
/// returned with met_target = false; running past N slots yields
/// n_alignment_slots = N, met_target = false and zero effective rate.
AlignmentOutcome coordinated_alignment(const LinkEvaluator& link, const std::vector<PathPlan>& plans,
                                       const AlignmentConfig& config,
                                       AlignmentTrace* trace = nullptr);

AlignmentOutcome coordinated_alignment(const ChannelInstance& channel,
                                       const LocationEstimate& bs_estimate,
                                       const LocationEstimate& ue_estimate,
                                       const Scenario& scenario, const Codebook& tx,
                                       const Codebook& rx, const AlignmentConfig& config,
                                       AlignmentTrace* trace = nullptr);

/// Global argmax over all N_t * N_r pairs; N_a = ceil(N_t N_r / N_b).
AlignmentOutcome exhaustive_search(const LinkEvaluator& link, const AlignmentConfig& config);

/// Global argmax with perfect channel knowledge and no alignment overhead.
AlignmentOutcome optimal_oracle(const LinkEvaluator& link, const AlignmentConfig& config);

/// Best of the per-path nearest-beam pairs, no search; N_a = 2.
AlignmentOutcome position_only_baseline(const LinkEvaluator& link,
                                        const std::vector<PathPlan>& plans,
                                        const AlignmentConfig& config);

/// [(1 - n_a / n) * rate]^+. Throws std::invalid_argument for n == 0.
double effective_rate(double rate, std::size_t n_a, std::size_t n);

/// Number of slots the exhaustive sweep needs.
std::size_t exhaustive_slot_count(std::size_t n_tx, std::size_t n_rx, std::size_t beams_per_slot);

}  // namespace locbeam
