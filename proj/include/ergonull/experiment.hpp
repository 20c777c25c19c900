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

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ergonull/channel_models.hpp"
#include "ergonull/experiment_config.hpp"

namespace ergonull {

// Paired Monte-Carlo curves: every scheme is evaluated on the same trials.
struct RateCurve {
  std::string x_label;  // "snr_db" or "d_max_wl"
  std::vector<double> x;
  std::vector<std::string> schemes;
  std::vector<std::vector<double>> mean;       // [scheme][x]
  std::vector<std::vector<double>> std_error;  // [scheme][x], sample std / sqrt(n)
  std::vector<std::vector<std::size_t>> trials;

  std::size_t scheme_index(const std::string& label) const;  // throws std::out_of_range
};

struct RunStats {
  std::uint64_t resampled_draws = 0;  // degenerate direction draws replaced
  std::uint64_t failed_trials = 0;    // trials excluded after an exception
  std::vector<std::string> failure_messages;
};

struct ExperimentResult {
  RateCurve curve;
  RunStats stats;
  // Per-trial rates [scheme][x][trial] for the trials that completed, in
  // trial-index order.
  std::vector<std::vector<std::vector<double>>> samples;
};

struct RunOptions {
  std::size_t threads = 1;  // 0 selects hardware concurrency
};

// Transmit powers for a desired power p: index 0 is the desired user.
std::vector<double> user_powers(double desired_power, std::size_t num_interferers, double sir_db,
                                PowerConvention convention);

struct SampledLos {
  std::vector<Direction> doa;  // at the desired receiver, desired user first
  std::uint64_t resampled = 0;
};

// num_users i.i.d. uniform directions on (0, pi). Draws with two directions
// closer than 1e-6 rad are redrawn and counted.
SampledLos sample_los_directions(std::mt19937_64& rng, std::size_t num_users);

// Equal-SNR LOS scenario for receiver 0 built from the config's power rules.
LosScenario make_los_scenario(const ExperimentConfig& config, const std::vector<Direction>& doa, double snr_db);

// Receiver-side estimates: each direction plus N(0, sigma^2) degrees, clamped
// to stay inside (0, 180) degrees.
std::vector<Direction> inject_directional_error(const std::vector<Direction>& doa, double sigma_deg,
                                                std::mt19937_64& rng);

struct SampledMimo {
  MimoScenario scenario;  // only receiver 0 is populated
  std::uint64_t resampled = 0;
};

// Desired transmitter 0 sends num_streams streams over desired_paths paths
// (strongest first); each external interferer sends one stream over one path.
// Powers start at 0 dB SNR with noise variance 1; set_mimo_snr rescales them.
SampledMimo sample_mimo_scenario(const ExperimentConfig& config, std::mt19937_64& rng);
void set_mimo_snr(MimoScenario& scenario, const ExperimentConfig& config, double snr_db);

ExperimentResult run_rate_vs_snr(const ExperimentConfig& config, const RunOptions& options = {});
ExperimentResult run_dmax_sweep(const ExperimentConfig& config, const RunOptions& options = {});
ExperimentResult run_mimo_experiment(const ExperimentConfig& config, const RunOptions& options = {});
// Dispatches on config.experiment after validating the config.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace ergonull
