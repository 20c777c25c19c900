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

// Spacing selection for two-antenna interference nulling.
//
// A pair of antennas separated by d wavelengths and combined with phase phi
// sees user k with pair gain (1 + cos(2 pi d cos(theta_k) + phi)) / 2. When the
// cosines are rationally independent, the points d * (cos(theta_1), ...,
// cos(theta_K)) mod 1 fill the unit cube uniformly as d runs over the
// integers, so some d puts the desired coordinate near 0 and every interferer
// coordinate near 1/2: the desired user sits on a grating lobe and every
// interferer on a null. weyl_box_search finds the first such d directly;
// pair_selection_search is the practical, SINR-driven version over an actual
// array.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ergonull/array_manifold.hpp"
#include "ergonull/channel_models.hpp"

namespace ergonull {

// Target region in [0, 1)^K. The desired coordinate's interval is [0, eps'],
// interferers get [(1 - eps')/2, (1 + eps')/2], with eps' = epsilon / (2 pi).
struct BoxSpec {
  std::vector<std::pair<double, double>> intervals;
  double epsilon_prime = 0.0;

  static BoxSpec nulling_box(std::size_t num_users, std::size_t desired, double epsilon);
  double volume() const;
};

// Smallest integer d in [1, d_max] with frac(d c_desired) within eps' of 0
// (wrapping around 1) and frac(d c_k) strictly inside ((1 - eps')/2,
// (1 + eps')/2) for all k != desired. eps' = epsilon / (2 pi).
std::optional<std::uint64_t> weyl_box_search(std::span<const double> cosines, std::size_t desired, double epsilon,
                                             std::uint64_t d_max);

// Fraction of m in [1, count] whose point frac(m c) falls in the half-open box
// prod_k [lo_k, hi_k).
double box_hit_fraction(std::span<const double> cosines, std::span<const std::pair<double, double>> box,
                        std::uint64_t count);

// Star-discrepancy estimate of {m c mod 1 : m = 1..count}. Exact for one
// dimension; for K >= 2 the sup over anchored boxes [0, u) is taken over u
// on a regular grid of the unit cube, which bounds the true value from below.
double equidistribution_discrepancy(std::span<const double> cosines, std::uint64_t count);

enum class PhaseRule {
  kZero,     // w = [1, 1] / sqrt(2)
  kMatched,  // phi = -2 pi d cos(theta_desired), so the desired gain is exactly 1
};

// Smallest integer d in [1, d_max] whose pair gains under `rule` satisfy
// g_desired > 1 - delta and g_k < delta for every k != desired.
std::optional<std::uint64_t> nulling_spacing_search(std::span<const double> cosines, std::size_t desired,
                                                    double delta, std::uint64_t d_max, PhaseRule rule);

enum class PairMode {
  kPhaseGrid,   // w = [1, e^{j phi}] with phi on a uniform grid
  kClosedForm,  // per-pair MVDR, rescaled to w_0 = 1
};

struct PairSearchOptions {
  double phi_grid_deg = 1.0;  // phase-grid mode only
  PairMode mode = PairMode::kClosedForm;
  bool integer_spacing_only = false;
};

struct SelectionResult {
  double spacing_wl = 0.0;
  double phase = 0.0;
  SparseBeamformer beamformer;
  double achieved_sinr = 0.0;
};

// Max-SINR pair with antenna 0 as the reference. Candidates are antennas
// 1..N-1 (integer-wavelength separations only, if requested). Ties go to the
// smaller antenna index, then the smaller grid phase.
SelectionResult pair_selection_search(const LosScenario& scenario, std::size_t rx_user, const UlaGeometry& geometry,
                                      const PairSearchOptions& options = {});

// w = R_n^-1 a_d with R_n = sum_j P_j a_j a_j^H + sigma^2 I on the support,
// rescaled so w_0 = 1 (left unit-norm if w_0 vanishes). Steering vectors are
// already restricted to the support.
SparseBeamformer support_constrained_mvdr(std::span<const cplx> steering_desired,
                                          std::span<const SteeringVector> steering_interferers,
                                          std::span<const double> powers, double noise_var,
                                          const SelectionMatrix& support);

}  // namespace ergonull
