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

#include <span>
#include <vector>

#include "ergonull/array_manifold.hpp"
#include "ergonull/channel_models.hpp"

namespace ergonull {

struct LinkRate {
  double bits_per_use = 0.0;
  double sinr_linear = 0.0;

  static LinkRate from_sinr(double sinr);
};

// P_d |w^H a_d|^2 / (sum_j P_j |w^H a_j|^2 + sigma^2 ||w||^2). All steering
// vectors are restricted to the beamformer's support. Throws on w = 0.
double output_sinr(std::span<const cplx> weights, std::span<const cplx> desired, double desired_power,
                   std::span<const SteeringVector> interferers, std::span<const double> interferer_powers,
                   double noise_var);

// SINR of user rx_user's signal at the output of w on receiver rx_user.
double sinr(const LosScenario& scenario, std::size_t rx_user, const SparseBeamformer& w,
            const UlaGeometry& geometry);

// log2 det(I + p H_d H_d^H Q^-1) with Q = sigma^2 I + sum_j p_j H_j H_j^H,
// where p is the per-stream power of the desired transmitter.
double mimo_rate_interference_as_noise(const CMatrix& h_desired, std::span<const CMatrix> h_interferers,
                                       double per_stream_power, double noise_var);
// Same, with a separate per-stream power for every interferer.
double mimo_rate_interference_as_noise(const CMatrix& h_desired, std::span<const CMatrix> h_interferers,
                                       double per_stream_power, std::span<const double> interferer_stream_powers,
                                       double noise_var);

// log2(1 + r P/sigma^2): matched filtering on r selected antennas with no
// interference.
double interference_free_rate(const LosScenario& scenario, std::size_t rx_user, const SelectionMatrix& support);

// sum_l log2(1 + |gamma_l|^2 P/sigma^2) over the first t+1 desired paths
// (fewer if the path list is shorter): the orthogonal-channel benchmark.
double orthogonal_benchmark_rate(std::span<const cplx> desired_path_gains, std::size_t streams, double power,
                                 double noise_var);

// Two users per slot, users paired (0,1), (2,3), ... in index order; the
// receiver applies the max-SINR (MMSE) combiner on pair_support against its
// single co-slot interferer. Rate is log2(1 + SINR) / ceil(K/2).
double tdma_mmse_benchmark(const LosScenario& scenario, std::size_t rx_user, const UlaGeometry& geometry,
                           const SelectionMatrix& pair_support);

// log2 det of a Hermitian positive-definite matrix via Cholesky. Throws
// std::domain_error if the factorization fails.
double log2_det_hpd(const CMatrix& m);

}  // namespace ergonull
