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
#include <vector>

#include "ergonull/array_manifold.hpp"
#include "ergonull/channel_models.hpp"
#include "ergonull/ergodic_nulling.hpp"

namespace ergonull {

enum class StreamTargetMode {
  // One target per strong desired path (the t strongest); every other path,
  // desired or not, is interference for that target.
  kStrict,
  // One target per transmitted stream, using its narrowband effective
  // channel; interfering transmitters' streams are the interference.
  kRelaxed,
};

struct StreamSearchOptions {
  StreamTargetMode target = StreamTargetMode::kStrict;
  PairMode pair_mode = PairMode::kClosedForm;
  double phi_grid_deg = 1.0;
  // Relaxed mode only: also count the desired transmitter's other streams as
  // interference for each target.
  bool own_streams_as_interference = true;
};

// Per-target 2-sparse beamformers sharing reference antenna 0.
struct StreamAssignment {
  std::size_t reference = 0;
  std::vector<std::size_t> antennas;          // n_l, distinct
  std::vector<SparseBeamformer> beamformers;  // support {reference, n_l}, weight 1 at the reference
  std::vector<double> sinr;                   // per-target SINR at selection time

  std::size_t streams() const { return antennas.size(); }
  // Sorted {reference, n_1, ..., n_t}.
  SelectionMatrix support() const;
  // r x t matrix whose column l holds beamformer l's weights on support().
  CMatrix weight_matrix() const;
};

// Picks, for each target in turn, the antenna n (not used by an earlier
// target) and 2-sparse weights on {0, n} maximizing that target's SINR. Ties
// go to the smaller antenna index.
StreamAssignment per_stream_pair_search(const MimoScenario& scenario, std::size_t rx_user,
                                        const StreamSearchOptions& options = {});

struct EquivalentChannel {
  CMatrix h_tilde;    // W^H S_R H, t x t
  CMatrix deviation;  // W^H S_R A_R - I over the t strongest desired paths
  double deviation_max_abs = 0.0;
  CMatrix w;          // beamformer columns after per-path normalization, r x t
};

// Each beamformer column is rescaled so its response to its own path is 1;
// D then measures the leakage between strong paths.
EquivalentChannel assemble_equivalent_channel(const StreamAssignment& assignment, const MimoScenario& scenario,
                                              std::size_t rx_user);

// Indices of the desired paths of transmitter rx_user at receiver rx_user,
// strongest first (stable in the path index on ties).
std::vector<std::size_t> strongest_paths(const MimoScenario& scenario, std::size_t rx_user);

// Diagonal path gains G (delay phases folded in) and a_t, the t x N_t matrix
// whose row l is a_T(psi_l)^T, over the t strongest desired paths. The
// noiseless equivalent channel in the ideal case is G * a_t.
struct PathFactors {
  CMatrix g;
  CMatrix a_t;
};
PathFactors desired_path_factors(const MimoScenario& scenario, std::size_t rx_user);

// log2 det(I + P / (sigma^2 t) G a_t a_t^H G^H).
double theorem2_rate(const CMatrix& g, const CMatrix& a_t, double power, double noise_var, std::size_t streams);

struct WaterfillingResult {
  double rate = 0.0;
  CMatrix covariance;  // Q, PSD with trace P
  std::vector<double> mode_powers;
  double water_level = 0.0;
};

// max_Q log2 det(I + H Q H^H / sigma^2) subject to tr(Q) = P, Q >= 0.
WaterfillingResult csit_rate_waterfilling(const CMatrix& h, double total_power, double noise_var);

// Mutual information of the selected antennas with interference treated as
// noise and an optimal linear receiver on the support.
double support_rate(const MimoScenario& scenario, std::size_t rx_user, const SelectionMatrix& support);
// Same antennas, interferers removed.
double support_interference_free_rate(const MimoScenario& scenario, std::size_t rx_user,
                                      const SelectionMatrix& support);
// Mutual information after compressing the support to W^H y (noise and
// interference covariances follow through W).
double compressed_rate(const MimoScenario& scenario, std::size_t rx_user, const StreamAssignment& assignment);

struct SubsetSearchResult {
  SelectionMatrix best_support;
  double best_rate = 0.0;
  double best_support_interference_free_rate = 0.0;
  double max_interference_free_rate = 0.0;
  std::size_t subsets_evaluated = 0;
};

// Exhaustive search over all subset_size-element receive subsets. Refuses
// arrays larger than max_elements.
SubsetSearchResult exhaustive_subset_search(const MimoScenario& scenario, std::size_t rx_user,
                                            std::size_t subset_size, std::size_t max_elements);

}  // namespace ergonull
