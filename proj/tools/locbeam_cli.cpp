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

// locbeam: Monte-Carlo driver for location-aided beam alignment.
//
//   locbeam run --config cfg.json --out results.csv [--seed N] [--threads N]
//   locbeam crb --config cfg.json --out crb.csv    [--seed N] [--threads N]
//   locbeam defaults

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "locbeam/experiment.hpp"
#include "locbeam/types.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_path = "-";
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON experiment config (defaults if omitted)");
  cmd->add_option("--out", opts.out_path, "output CSV path, '-' for stdout");
  cmd->add_option("--seed", opts.seed, "master seed, overrides the config");
  cmd->add_option("--threads", opts.threads, "worker threads, 0 = all cores");
}

locbeam::ExperimentConfig resolve_config(const CommonOptions& opts) {
  locbeam::ExperimentConfig config =
      opts.config_path.empty() ? locbeam::ExperimentConfig{} : locbeam::load_config(opts.config_path);
  if (opts.seed) config.master_seed = *opts.seed;
  config.validate();
  return config;
}

template <typename Rows, typename Writer>
void emit(const Rows& rows, const std::string& out_path, Writer write) {
  if (out_path == "-") {
    write(rows, std::cout);
  } else {
    write(rows, std::filesystem::path(out_path));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Location-aided beam alignment simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "simulate every scheme and write per-SNR averages");
  add_common(run, run_opts);

  CommonOptions crb_opts;
  CLI::App* crb = app.add_subcommand("crb", "channel-estimation bounds and error-aware rates");
  add_common(crb, crb_opts);

  app.add_subcommand("defaults", "print the default config as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto config = resolve_config(run_opts);
      const auto rows = locbeam::run_experiment(config, run_opts.threads);
      emit(rows, run_opts.out_path,
           [](const auto& r, auto&& sink) { locbeam::write_csv(r, sink); });
    } else if (crb->parsed()) {
      const auto config = resolve_config(crb_opts);
      const auto rows = locbeam::run_crb_experiment(config, crb_opts.threads);
      emit(rows, crb_opts.out_path,
           [](const auto& r, auto&& sink) { locbeam::write_crb_csv(r, sink); });
    } else {
      std::cout << locbeam::dump_config(locbeam::ExperimentConfig{}) << '\n';
    }
  } catch (const locbeam::ConfigError& e) {
    std::cerr << "locbeam: config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "locbeam: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
