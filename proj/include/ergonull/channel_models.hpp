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

#include <Eigen/Dense>
#include <cstddef>
#include <random>
#include <vector>

#include "ergonull/array_manifold.hpp"

namespace ergonull {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Antennas routed into the RF chains. The implicit 0/1 matrix has one
// nonzero per column, at row indices[k] of column k.
struct SelectionMatrix {
  Support indices;

  std::size_t size() const { return indices.size(); }
  // Dense N x r selection matrix S (S^H y picks the selected entries of y).
  Eigen::MatrixXd dense(std::size_t num_elements) const;
  // Composition: entries of this selection taken through `inner`, which
  // indexes into this selection's outputs.
  SelectionMatrix then(const SelectionMatrix& inner) const;
  static SelectionMatrix identity(std::size_t n);
};

// Line-of-sight K-user interference channel seen through the arrays of every
// receiver: doa[i][j] is the direction of transmitter j at receiver i.
struct LosScenario {
  std::size_t num_users = 0;
  std::vector<std::vector<Direction>> doa;
  std::vector<double> power;
  double noise_var = 1.0;
  double power_cap = 0.0;  // 0 disables the cap check

  // Throws std::invalid_argument on shape or range violations.
  void validate() const;
  // Convenience constructor for the single-receiver view used throughout the
  // experiments: only receiver rx_user's row is meaningful, other rows
  // repeat it.
  static LosScenario single_receiver(std::vector<Direction> doa_at_receiver, std::vector<double> power,
                                     double noise_var);
};

// One specular path: complex gain, arrival and departure angle, delay.
struct PathSpec {
  cplx gain{1.0, 0.0};
  Direction doa;
  Direction dod;
  double delay_s = 0.0;
};

using PathList = std::vector<PathSpec>;

// Specular multipath interference channel with single-antenna transmitters.
struct MultipathScenario {
  std::size_t num_users = 0;
  std::vector<std::vector<PathList>> paths;  // paths[i][j]
  std::vector<double> power;
  double noise_var = 1.0;

  void validate() const;
};

// Ray-based MIMO interference channel. Transmitter j sends tx_streams[j]
// streams from its first tx_streams[j] antennas (transmit selection).
struct MimoScenario {
  std::size_t num_users = 0;
  std::size_t streams = 1;    // t
  std::size_t rx_chains = 2;  // r
  UlaGeometry tx_geometry{1, 0.5};
  UlaGeometry rx_geometry{2, 0.5};
  std::vector<std::vector<PathList>> paths;  // paths[i][j]; empty rows are unpopulated receivers
  std::vector<double> power;                 // total power per transmitter
  std::vector<std::size_t> tx_streams;       // per transmitter, <= tx_geometry elements
  double noise_var = 1.0;
  double carrier_hz = 28e9;

  void validate() const;
  std::size_t streams_of(std::size_t user) const { return tx_streams.at(user); }
  double per_stream_power(std::size_t user) const;
};

enum class PathGainModel { kUnitPhase, kRayleigh };

// Unit modulus with uniform phase, or CN(0, 1).
cplx sample_path_gain(std::mt19937_64& rng, PathGainModel model);

// a(theta) on the selected receive antennas of receiver rx_user for the
// signal of tx_user.
SteeringVector los_channel_vector(const LosScenario& scenario, std::size_t rx_user, std::size_t tx_user,
                                  const SelectionMatrix& support, const UlaGeometry& geometry);

// H = sum_l gamma_l a_R(theta_l)[rx] a_T(psi_l)[tx]^T (plain transpose).
CMatrix mimo_channel_matrix(const MimoScenario& scenario, std::size_t i, std::size_t j,
                            const SelectionMatrix& rx_support, const SelectionMatrix& tx_support);

// Narrowband per-stream channel of stream m of transmitter j at receiver i:
//   h = sum_l gamma_l exp(j 2 pi f_c tau_l) a(theta_l)[rx] a_m(psi_l).
CVector effective_stream_channel(const MimoScenario& scenario, std::size_t i, std::size_t j, std::size_t m,
                                 const SelectionMatrix& rx_support);

// Columns are effective_stream_channel(m) for every stream of transmitter j.
CMatrix narrowband_channel_matrix(const MimoScenario& scenario, std::size_t i, std::size_t j,
                                  const SelectionMatrix& rx_support);

// sum_{k != i} P_k sum_l |w^H a(theta_{i,k,l})|^2 |gamma_{i,k,l}|^2
double residual_interference_power(const MultipathScenario& scenario, std::size_t rx_user,
                                   const SparseBeamformer& w, const UlaGeometry& geometry);

}  // namespace ergonull
