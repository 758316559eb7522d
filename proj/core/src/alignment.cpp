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

#include "locbeam/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace locbeam {

BeamSubset beam_subset(const Codebook& codebook, double angle_hat, double half_angle, Side side,
                       std::size_t path) {
  if (!(half_angle >= 0.0)) {
    throw std::invalid_argument("beam_subset: half_angle must be >= 0");
  }
  BeamSubset subset;
  subset.side = side;
  subset.path = path;
  const double lo = angle_hat - half_angle;
  const double hi = angle_hat + half_angle;
  for (std::size_t j = 0; j < codebook.size(); ++j) {
    const double a = codebook.angle(j);
    if (a >= lo && a <= hi) {
      subset.indices.push_back(j);
    }
  }
  if (subset.indices.empty()) {
    subset.indices.push_back(nearest_beam(codebook, angle_hat));
  }
  return subset;
}

WindowRange search_window(std::size_t subset_size, std::size_t center, std::size_t width) {
  if (width == 0) {
    throw std::invalid_argument("search_window: width must be >= 1");
  }
  if (center < 1 || center > subset_size) {
    throw std::invalid_argument("search_window: center must lie in [1, subset_size]");
  }
  const std::size_t b = subset_size;
  const std::size_t i = center;
  const std::size_t w = width;
  if (w >= b) {
    return {1, b};
  }
  // Comparisons against W/2 are done in doubled integers to keep odd W exact.
  if (2 * (b - i) < w) {
    return {b - w + 1, b};
  }
  if (2 * i < w) {
    return {1, w};
  }
  const std::size_t first = std::max<std::size_t>(1, i - w / 2);
  return {first, first + w - 1};
}

void AlignmentConfig::validate() const {
  if (n_slots < 1) {
    throw std::invalid_argument("AlignmentConfig: n_slots must be >= 1");
  }
  if (beams_per_slot < 1) {
    throw std::invalid_argument("AlignmentConfig: beams_per_slot must be >= 1");
  }
  if (!(es_over_sigma2 >= 0.0)) {
    throw std::invalid_argument("AlignmentConfig: es_over_sigma2 must be >= 0");
  }
}

LinkEvaluator::LinkEvaluator(const ChannelInstance& channel, const Codebook& tx, const Codebook& rx,
                             double es_over_sigma2)
    : channel_(&channel), tx_(&tx), rx_(&rx), snr_(es_over_sigma2) {
  if (tx.n_antennas() != channel.n_tx() || rx.n_antennas() != channel.n_rx()) {
    throw std::invalid_argument("LinkEvaluator: codebooks do not match the channel dimensions");
  }
  if (!(es_over_sigma2 >= 0.0)) {
    throw std::invalid_argument("LinkEvaluator: es_over_sigma2 must be >= 0");
  }
  gain2_ = (rx.beams().adjoint() * channel.matrix() * tx.beams()).cwiseAbs2();
}

double LinkEvaluator::rate(std::size_t u_index, std::size_t v_index) const {
  return std::log2(1.0 + snr_ * gain2_(static_cast<Eigen::Index>(u_index),
                                       static_cast<Eigen::Index>(v_index)));
}

double LinkEvaluator::uplink_rate(std::size_t v_index, std::size_t u_index) const {
  // |v^T H^T conj(u)| = |u^H H v|
  return rate(u_index, v_index);
}

std::vector<PathPlan> plan_paths(const LocationEstimate& bs_estimate,
                                 const LocationEstimate& ue_estimate, const Scenario& scenario,
                                 const Codebook& tx, const Codebook& rx) {
  if (bs_estimate.observer != Side::kBs || ue_estimate.observer != Side::kUe) {
    throw std::invalid_argument("plan_paths: estimates passed in the wrong order");
  }
  if (bs_estimate.points.size() != scenario.n_paths() ||
      ue_estimate.points.size() != scenario.n_paths()) {
    throw std::invalid_argument("plan_paths: estimate path count differs from the scenario");
  }
  const auto bs_views = path_views(bs_estimate, scenario);
  const auto ue_views = path_views(ue_estimate, scenario);
  std::vector<PathPlan> plans;
  plans.reserve(scenario.n_paths());
  for (std::size_t m = 0; m < scenario.n_paths(); ++m) {
    PathPlan p;
    p.path = m;
    p.bs_view = bs_views[m];
    p.ue_view = ue_views[m];
    p.bs_subset = beam_subset(tx, p.bs_view.angle, p.bs_view.half_angle, Side::kBs, m);
    p.ue_subset = beam_subset(rx, p.ue_view.angle, p.ue_view.half_angle, Side::kUe, m);
    p.v_initial = nearest_beam(tx, p.bs_view.angle);
    p.u_initial = nearest_beam(rx, p.ue_view.angle);
    plans.push_back(std::move(p));
  }
  return plans;
}

namespace {

struct SideSearch {
  const BeamSubset* subset = nullptr;
  std::vector<bool> measured;  // by codebook index
  std::size_t current = 0;
};

// 1-based position inside a contiguous subset, clamped when the beam lies
// outside it.
std::size_t position_in_subset(const BeamSubset& subset, std::size_t beam) {
  const std::size_t front = subset.indices.front();
  const std::size_t back = subset.indices.back();
  if (beam <= front) {
    return 1;
  }
  if (beam >= back) {
    return subset.size();
  }
  return beam - front + 1;
}

std::vector<std::size_t> next_window(const SideSearch& side, const AlignmentConfig& config,
                                     WindowRange* span) {
  const auto& idx = side.subset->indices;
  const WindowRange range =
      config.use_window
          ? search_window(idx.size(), position_in_subset(*side.subset, side.current),
                          config.beams_per_slot)
          : WindowRange{1, idx.size()};
  *span = {idx[range.first - 1], idx[range.last - 1]};
  std::vector<std::size_t> beams;
  for (std::size_t p = range.first; p <= range.last; ++p) {
    const std::size_t beam = idx[p - 1];
    if (!side.measured[beam]) {
      beams.push_back(beam);
    }
  }
  return beams;
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

AlignmentOutcome coordinated_alignment(const LinkEvaluator& link, const std::vector<PathPlan>& plans,
                                       const AlignmentConfig& config, AlignmentTrace* trace) {
  config.validate();
  if (plans.empty()) {
    throw std::invalid_argument("coordinated_alignment: no paths");
  }
  const std::size_t budget = config.n_slots;
  std::size_t used = 1;  // location estimation
  if (trace != nullptr) {
    trace->phases.push_back({AlignmentPhase::Kind::kLocation, 0, 1, 0, {}, 0, 0.0});
  }

  AlignmentOutcome best;
  best.v_index = plans.front().v_initial;
  best.u_index = plans.front().u_initial;
  double best_rate = -std::numeric_limits<double>::infinity();
  const auto consider = [&](std::size_t u, std::size_t v, double rate, std::size_t path) {
    if (rate > best_rate) {
      best_rate = rate;
      best.u_index = u;
      best.v_index = v;
      best.path_used = path;
    }
  };
  const auto finish = [&](bool met) {
    best.achieved_rate =
        best.path_used ? best_rate : link.rate(best.u_index, best.v_index);
    best.n_alignment_slots = used;
    best.met_target = met;
    best.effective_rate = effective_rate(best.achieved_rate, used, budget);
    return best;
  };
  const auto out_of_slots = [&] {
    used = budget;
    AlignmentOutcome out = finish(false);
    out.effective_rate = 0.0;
    return out;
  };

  for (const PathPlan& plan : plans) {
    std::size_t u = plan.u_initial;
    std::size_t v = plan.v_initial;
    if (used + 1 > budget) {
      return out_of_slots();
    }
    used += 1;
    double current_rate = link.rate(u, v);
    consider(u, v, current_rate, plan.path);
    if (trace != nullptr) {
      trace->phases.push_back(
          {AlignmentPhase::Kind::kInitialCheck, plan.path, 1, v, {u}, u, current_rate});
    }
    if (current_rate >= config.target_rate) {
      return finish(true);
    }

    SideSearch ue{&plan.ue_subset, std::vector<bool>(link.rx().size(), false), u};
    SideSearch bs{&plan.bs_subset, std::vector<bool>(link.tx().size(), false), v};
    ue.measured[u] = true;
    bs.measured[v] = true;

    bool ue_turn = true;
    int idle = 0;
    while (idle < 2) {
      SideSearch& side = ue_turn ? ue : bs;
      WindowRange span;
      const std::vector<std::size_t> window = next_window(side, config, &span);
      if (window.empty()) {
        ++idle;
        ue_turn = !ue_turn;
        continue;
      }
      idle = 0;
      const std::size_t cost =
          config.use_window ? 1 : ceil_div(window.size(), config.beams_per_slot);
      if (used + cost > budget) {
        return out_of_slots();
      }
      used += cost;

      std::size_t local = side.current;
      double local_rate = current_rate;
      for (const std::size_t beam : window) {
        const double rate = ue_turn ? link.rate(beam, v) : link.uplink_rate(beam, u);
        side.measured[beam] = true;
        if (ue_turn) {
          consider(beam, v, rate, plan.path);
        } else {
          consider(u, beam, rate, plan.path);
        }
        if (rate > local_rate) {
          local_rate = rate;
          local = beam;
        }
      }
      side.current = local;
      (ue_turn ? u : v) = local;
      current_rate = local_rate;
      if (trace != nullptr) {
        trace->phases.push_back({ue_turn ? AlignmentPhase::Kind::kUeWindow
                                         : AlignmentPhase::Kind::kBsWindow,
                                 plan.path, cost, ue_turn ? v : u, window, local, local_rate,
                                 span.first, span.last});
      }
      if (current_rate >= config.target_rate) {
        return finish(true);
      }
      ue_turn = !ue_turn;
    }
  }
  return finish(false);
}

AlignmentOutcome coordinated_alignment(const ChannelInstance& channel,
                                       const LocationEstimate& bs_estimate,
                                       const LocationEstimate& ue_estimate,
                                       const Scenario& scenario, const Codebook& tx,
                                       const Codebook& rx, const AlignmentConfig& config,
                                       AlignmentTrace* trace) {
  const LinkEvaluator link(channel, tx, rx, config.es_over_sigma2);
  return coordinated_alignment(link, plan_paths(bs_estimate, ue_estimate, scenario, tx, rx),
                               config, trace);
}

namespace {

AlignmentOutcome global_argmax(const LinkEvaluator& link) {
  AlignmentOutcome out;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < link.rx().size(); ++u) {
    for (std::size_t v = 0; v < link.tx().size(); ++v) {
      const double r = link.rate(u, v);
      if (r > best) {
        best = r;
        out.u_index = u;
        out.v_index = v;
      }
    }
  }
  out.achieved_rate = best;
  return out;
}

}  // namespace

AlignmentOutcome exhaustive_search(const LinkEvaluator& link, const AlignmentConfig& config) {
  config.validate();
  AlignmentOutcome out = global_argmax(link);
  out.n_alignment_slots =
      exhaustive_slot_count(link.tx().size(), link.rx().size(), config.beams_per_slot);
  out.met_target =
      out.achieved_rate >= config.target_rate && out.n_alignment_slots <= config.n_slots;
  out.effective_rate = effective_rate(out.achieved_rate, out.n_alignment_slots, config.n_slots);
  return out;
}

AlignmentOutcome optimal_oracle(const LinkEvaluator& link, const AlignmentConfig& config) {
  config.validate();
  AlignmentOutcome out = global_argmax(link);
  out.n_alignment_slots = 0;
  out.met_target = out.achieved_rate >= config.target_rate;
  out.effective_rate = out.achieved_rate;
  return out;
}

AlignmentOutcome position_only_baseline(const LinkEvaluator& link,
                                        const std::vector<PathPlan>& plans,
                                        const AlignmentConfig& config) {
  config.validate();
  if (plans.empty()) {
    throw std::invalid_argument("position_only_baseline: no paths");
  }
  AlignmentOutcome out;
  double best = -std::numeric_limits<double>::infinity();
  for (const PathPlan& plan : plans) {
    const double r = link.rate(plan.u_initial, plan.v_initial);
    if (r > best) {
      best = r;
      out.u_index = plan.u_initial;
      out.v_index = plan.v_initial;
      out.path_used = plan.path;
    }
  }
  out.achieved_rate = best;
  out.n_alignment_slots = 2;
  out.met_target = best >= config.target_rate && out.n_alignment_slots <= config.n_slots;
  out.effective_rate = effective_rate(best, out.n_alignment_slots, config.n_slots);
  return out;
}

double effective_rate(double rate, std::size_t n_a, std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("effective_rate: n must be >= 1");
  }
  const double frac = 1.0 - static_cast<double>(n_a) / static_cast<double>(n);
  return std::max(0.0, frac * rate);
}

std::size_t exhaustive_slot_count(std::size_t n_tx, std::size_t n_rx, std::size_t beams_per_slot) {
  if (beams_per_slot == 0) {
    throw std::invalid_argument("exhaustive_slot_count: beams_per_slot must be >= 1");
  }
  return ceil_div(n_tx * n_rx, beams_per_slot);
}

}  // namespace locbeam
