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

#include <benchmark/benchmark.h>

#include "locbeam/alignment.hpp"
#include "locbeam/channel.hpp"
#include "locbeam/crb.hpp"
#include "locbeam/experiment.hpp"
#include "locbeam/random.hpp"

namespace {

using namespace locbeam;

struct Fixture {
  explicit Fixture(std::size_t n)
      : scenario(Scenario::reference()),
        cb(n),
        channel([&] {
          Rng rng = block_stream(1, 0, StreamPurpose::kChannel);
          return build_channel(
              true_params_from_scenario(scenario, rng, default_gain_variances(3), n, n));
        }()) {
    Rng rng = block_stream(1, 0, StreamPurpose::kLocation);
    const auto bs = sample_location_estimate(scenario, Side::kBs, rng);
    const auto ue = sample_location_estimate(scenario, Side::kUe, rng);
    plans = plan_paths(bs, ue, scenario, cb, cb);
  }

  Scenario scenario;
  Codebook cb;
  ChannelInstance channel;
  std::vector<PathPlan> plans;
};

void BM_Coordinated(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  AlignmentConfig cfg;
  cfg.es_over_sigma2 = 10.0;
  for (auto _ : state) {
    const LinkEvaluator link(f.channel, f.cb, f.cb, 10.0);
    cfg.target_rate = 0.95 * optimal_oracle(link, cfg).achieved_rate;
    benchmark::DoNotOptimize(coordinated_alignment(link, f.plans, cfg));
  }
}
BENCHMARK(BM_Coordinated)->Arg(16)->Arg(64);

void BM_Exhaustive(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  AlignmentConfig cfg;
  for (auto _ : state) {
    const LinkEvaluator link(f.channel, f.cb, f.cb, 10.0);
    benchmark::DoNotOptimize(exhaustive_search(link, cfg));
  }
}
BENCHMARK(BM_Exhaustive)->Arg(16)->Arg(64);

void BM_FimFullCodebook(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  const ParamVector p = ParamVector::from_channel(f.channel.params());
  const MeasurementMatrix a(f.cb.beams(), f.cb.beams());
  for (auto _ : state) {
    benchmark::DoNotOptimize(fim(p, a, 1.0));
  }
}
BENCHMARK(BM_FimFullCodebook)->Arg(16)->Arg(64);

void BM_RunBlock(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.crb_mode = state.range(0) != 0 ? CrbMode::kAnalytic : CrbMode::kOff;
  std::uint64_t block = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_block(cfg, block++));
  }
}
BENCHMARK(BM_RunBlock)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
