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

#include <cstdint>
#include <random>

#include "locbeam/types.hpp"

namespace locbeam {

using Rng = std::mt19937_64;

/// Independent sub-streams of one block. Separate streams keep e.g. the
/// channel draw unchanged when channel-error sampling is switched on.
enum class StreamPurpose : std::uint64_t {
  kChannel = 1,
  kLocation = 2,
  kChannelError = 3,
};

/// Counter-based stream derivation: the state depends only on
/// (master_seed, block_index, purpose), never on execution order.
Rng block_stream(std::uint64_t master_seed, std::uint64_t block_index,
                 StreamPurpose purpose);

/// Circular-symmetric complex Gaussian with E|z|^2 = variance.
Complex complex_gaussian(double variance, Rng& rng);

/// Uniform point in the closed disk of the given radius centered at 0.
Point2 uniform_disk(double radius, Rng& rng);

}  // namespace locbeam
