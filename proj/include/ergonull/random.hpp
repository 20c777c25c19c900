// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The ergonull Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstdint>
#include <random>

namespace ergonull {

// splitmix64 finalizer; decorrelates nearby seeds.
std::uint64_t mix_seed(std::uint64_t x);

// Independent stream for one trial: seeded from mix(seed ^ trial) so results
// do not depend on which worker runs the trial.
std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t salt = 0);

}  // namespace ergonull
