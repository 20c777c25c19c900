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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ergonull {

// Raised for malformed or invalid experiment configurations. field() names
// the offending key (empty for syntax errors); line() is 1-based when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::string field = {}, std::optional<std::size_t> line = {});
  const std::string& field() const { return field_; }
  std::optional<std::size_t> line() const { return line_; }

 private:
  std::string field_;
  std::optional<std::size_t> line_;
};

enum class ExperimentKind { kLos4User, kLos6User, kDmaxSweep, kMimo2x3 };
enum class PowerConvention { kTotal, kPerInterferer };

std::string to_string(ExperimentKind kind);
std::string to_string(PowerConvention convention);

// Every field maps one-to-one onto a key of the JSON config file.
struct ExperimentConfig {
  std::string name;  // output basename, defaults to the experiment kind
  ExperimentKind experiment = ExperimentKind::kLos4User;
  std::uint64_t num_trials = 100;
  std::uint64_t seed = 1;
  std::vector<double> snr_grid_db;
  double sir_db = -5.0;
  PowerConvention interferer_power_convention = PowerConvention::kTotal;

  // LOS experiments
  std::size_t num_users = 4;
  double d_max_wl = 100.0;
  std::vector<double> d_max_grid_wl;  // dmax-sweep x axis
  double array_pitch_wl = 0.5;
  double phi_grid_deg = 1.0;
  std::string selection_mode = "phase-grid";  // phase-grid | closed-form
  bool strict_integer_spacing = false;
  double directional_error_deg = 0.0;

  // MIMO experiment
  std::size_t num_interferers = 2;
  std::size_t num_rx_elements = 100;
  std::size_t num_streams = 2;
  std::size_t num_rx_chains = 3;
  std::size_t desired_paths = 2;
  std::size_t subset_search_cap = 128;
  std::string mimo_stream_mode = "relaxed";  // strict | relaxed
  bool mimo_refine = true;
  std::string path_gain_model = "unit-phase";  // unit-phase | rayleigh
  double carrier_hz = 28e9;

  // Throws ConfigError naming the first invalid field.
  void validate() const;
  nlohmann::json to_json() const;
  // Stable 64-bit FNV-1a of the canonical JSON form.
  std::uint64_t hash() const;
};

// Parses config text; unknown keys, wrong types and missing required keys
// (experiment, num_trials, seed, snr_grid_db) raise ConfigError.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ExperimentPreset {
  std::string name;
  std::string description;
  ExperimentConfig config;
};

// Built-in configurations reproducing the published experiment set.
std::vector<ExperimentPreset> experiment_presets();

}  // namespace ergonull
