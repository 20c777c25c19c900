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


#include <doctest.h>

#include <random>

#include "ergonull/ergodic_nulling.hpp"
#include "ergonull/experiment.hpp"
#include "ergonull/random.hpp"
#include "ergonull/rates.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace ergonull;

namespace {

std::vector<double> thetas(const std::vector<Direction>& d) {
  std::vector<double> out;
  for (const Direction& x : d) out.push_back(x.theta());
  return out;
}

}  // namespace

TEST_CASE("pair search matches the exhaustive pair and fine-phase oracle") {
  std::mt19937_64 rng(101);
  const UlaGeometry g(20, 0.5);
  for (int rep = 0; rep < 5; ++rep) {
    const auto dirs = testing::random_directions(rng, 3);
    const std::vector<double> p{1.0, 1.5, 0.7};
    const LosScenario s = testing::los(dirs, p, 0.3);
    PairSearchOptions opt;
    opt.mode = PairMode::kPhaseGrid;
    const double found = pair_selection_search(s, 0, g, opt).achieved_sinr;
    const double oracle = oracle::exhaustive_pair_sinr(thetas(dirs), p, 0.3, 20, 0.5, 0.1);
    CHECK(std::abs(found - oracle) <= 0.01 * oracle);
  }
}

TEST_CASE("support-constrained MVDR beats random beamformers and matches a fine grid") {
  std::mt19937_64 rng(202);
  const UlaGeometry g(12, 0.5);
  const SelectionMatrix sup{{0, 4, 9}};
  const auto dirs = testing::random_directions(rng, 4);
  const std::vector<double> p{1.0, 2.0, 0.5, 1.0};
  const double noise = 0.2;
  const auto ad = steering_vector(g, sup.indices, dirs[0]);
  std::vector<SteeringVector> ai;
  for (std::size_t k = 1; k < 4; ++k) ai.push_back(steering_vector(g, sup.indices, dirs[k]));
  const std::vector<double> ip(p.begin() + 1, p.end());
  const SparseBeamformer w = support_constrained_mvdr(ad, ai, ip, noise, sup);
  const double mvdr = oracle::output_sinr(w.weights, ad, p[0], ai, ip, noise);
  std::mt19937_64 draw(7);
  const double random_best = oracle::random_search_sinr(ad, p[0], ai, ip, noise, 1000000, draw);
  CHECK(mvdr >= random_best * (1.0 - 1e-12));
  const double grid = oracle::grid_max_sinr(ad, p[0], ai, ip, noise, 6.0);
  CHECK(grid <= mvdr * (1.0 + 1e-12));
  CHECK(grid >= mvdr * (1.0 - 1e-3));
}

TEST_CASE("MIMO rate matches a sampled mutual-information estimate") {
  std::mt19937_64 rng(303);
  for (int rep = 0; rep < 3; ++rep) {
    const CMatrix hd = testing::random_matrix(rng, 2, 2);
    const std::vector<CMatrix> hi{testing::random_matrix(rng, 2, 1)};
    const std::vector<double> pi{0.8};
    const double p = 1.5;
    const double noise = 0.4;
    const double exact = mimo_rate_interference_as_noise(hd, hi, p, pi, noise);
    const oracle::Estimate est = oracle::sampled_mutual_information(hd, hi, p, pi, noise, 100000, rng);
    CHECK(std::abs(est.mean - exact) <= 4.0 * est.std_error);
  }
}

TEST_CASE("TDMA benchmark matches a grid search over unit 2-vectors") {
  std::mt19937_64 rng(404);
  const UlaGeometry g(2, 0.5);
  for (int rep = 0; rep < 10; ++rep) {
    const auto dirs = testing::random_directions(rng, 4);
    const std::vector<double> p{1.0, 3.0, 0.5, 2.0};
    const LosScenario s = testing::los(dirs, p, 0.5);
    for (std::size_t u : {0U, 3U}) {
      const double got = tdma_mmse_benchmark(s, u, g, SelectionMatrix{{0, 1}});
      const double ref = oracle::tdma_grid_rate(thetas(dirs), p, 0.5, 0.5, u);
      CHECK(std::abs(got - ref) <= 0.005 * ref);
    }
  }
}

TEST_CASE("per-stream pair search matches the exhaustive per-stream oracle") {
  ExperimentConfig c;
  for (const auto& preset : experiment_presets())
    if (preset.name == "fig8") c = preset.config;
  REQUIRE(c.experiment == ExperimentKind::kMimo2x3);
  c.selection_mode = "closed-form";
  auto rng = trial_stream(c.seed, 0);
  SampledMimo m = sample_mimo_scenario(c, rng);
  set_mimo_snr(m.scenario, c, 10.0);
  StreamSearchOptions opt;
  opt.target = StreamTargetMode::kRelaxed;
  const StreamAssignment a = per_stream_pair_search(m.scenario, 0, opt);
  const auto ref = oracle::per_stream_oracle(m.scenario, 0, a.antennas, 2.0);
  for (std::size_t l = 0; l < ref.size(); ++l) CHECK(std::abs(a.sinr[l] - ref[l]) <= 0.01 * ref[l]);
}
